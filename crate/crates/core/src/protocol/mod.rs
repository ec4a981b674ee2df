//! Sequential protocol engines: the single-memory wire and two-memory
//! entangling.

pub mod deferred;
pub mod frame;
pub mod two_memory;
pub mod wire;

pub use deferred::{run_deferred, DeferredBranch};
pub use frame::{frame_apply, frame_remove, PauliFrame};
pub use two_memory::{
    bus_direct_residual, bus_sigma, verify_fig4_lu_equivalence, EntangleMode, EntangleRecord, Fig4Report,
    TwoMemoryEngine,
};
pub use wire::{
    basis_redefinition_residual, branch_determinism_residual, branch_outcomes, compile_rotation, enumerate_branches, random_qubit, run_wire,
    wire_oracle, Branch, CycleRecord, FlyerBasis, ProtocolTrace, RotationPlan, WireEngine, WireOutcomes,
};

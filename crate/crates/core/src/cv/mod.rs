//! Continuous-variable backend: symplectic Gaussian unitaries, nullifier
//! algebra for ideal graph states, and finitely squeezed covariance states.

mod gaussian;
mod nullifier;
mod symplectic;
mod verify;

pub use gaussian::{gaussian_graph_state, nullifier_variances, GaussianState, HomodyneOutcome};
pub use nullifier::{
    nullifier_basis, recover_graph, transform_nullifiers, NullifierBasis, RecoveredGraph,
};
pub use symplectic::{
    graph_entangler, omega, symplectic_cz, symplectic_fourier, symplectic_lc_unitary, SymplecticOp,
};
pub use verify::{lc_commutation_deviation, verify_eq2, verify_eq4_identity, Eq2Report, Eq4Report};

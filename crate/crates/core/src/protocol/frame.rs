//! Pauli byproduct bookkeeping for the qubit wire.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::{gates, QuditState};

/// Exponents `(x, z)`: the stored memory state is `X^x Z^z` applied to the
/// logical state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliFrame {
    pub x: u8,
    pub z: u8,
}

impl PauliFrame {
    pub fn new(x: u8, z: u8) -> Self {
        Self { x: x & 1, z: z & 1 }
    }

    pub fn is_trivial(self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Equatorial angle to use on the stored state so that the logical state
    /// sees `R_z(theta)`: the X exponent flips the sign.
    pub fn adapt_angle(self, theta: f64) -> f64 {
        if self.x == 1 {
            -theta
        } else {
            theta
        }
    }

    /// Frame after one cycle with outcome `s`: the new byproduct `X^s` joins
    /// the old frame pushed through `H` (`X ↔ Z`), `R_z` commuting with `Z`.
    pub fn after_cycle(self, s: u8) -> Self {
        Self { x: (s ^ self.z) & 1, z: self.x }
    }
}

fn check_qubit(state: &QuditState) -> Result<()> {
    if state.d() != 2 || state.n() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "frame acts on one qubit, got n = {}, d = {}",
            state.n(),
            state.d()
        )));
    }
    Ok(())
}

/// `X^x Z^z |ψ⟩`.
pub fn frame_apply(state: &QuditState, frame: PauliFrame) -> Result<QuditState> {
    check_qubit(state)?;
    let mut out = state.clone();
    if frame.z == 1 {
        out = out.apply_matrix(0, &gates::pauli_z())?;
    }
    if frame.x == 1 {
        out = out.apply_matrix(0, &gates::pauli_x())?;
    }
    Ok(out)
}

/// `Z^{−z} X^{−x} |ψ⟩`, the inverse of [`frame_apply`].
pub fn frame_remove(state: &QuditState, frame: PauliFrame) -> Result<QuditState> {
    check_qubit(state)?;
    let mut out = state.clone();
    if frame.x == 1 {
        out = out.apply_matrix(0, &gates::pauli_x())?;
    }
    if frame.z == 1 {
        out = out.apply_matrix(0, &gates::pauli_z())?;
    }
    Ok(out)
}

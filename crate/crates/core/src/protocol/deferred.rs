//! Deferred reference for the wire: every flyer is attached up front, the
//! memory interacts with each in turn, and all flyer measurements happen at
//! the end in order.
//!
//! Operations on flyer `r_i` after its interaction commute with everything
//! that touches the memory and the other flyers, so postponing them must not
//! change any branch.

use rand_chacha::ChaCha8Rng;

use super::frame::{frame_remove, PauliFrame};
use crate::error::{Error, Result};
use crate::qudit::{gates, LocalGate, Outcome, QuditState};

#[derive(Clone, Debug)]
pub struct DeferredBranch {
    /// Memory state before frame removal.
    pub stored: QuditState,
    pub logical: QuditState,
    pub frame: PauliFrame,
    /// Probability of the whole outcome sequence.
    pub prob: f64,
}

/// Star of `k` flyers around the memory (register 0), each interaction
/// followed by the swap unitary `H_m ⊗ H_r`, then flyers measured in order
/// in adapted equatorial bases with the given outcomes.
pub fn run_deferred(input: &QuditState, thetas: &[f64], outcomes: &[u8]) -> Result<DeferredBranch> {
    if input.n() != 1 || input.d() != 2 {
        return Err(Error::DimensionMismatch("the memory is one qubit".into()));
    }
    if outcomes.len() != thetas.len() {
        return Err(Error::DimensionMismatch(format!("{} outcomes for {} angles", outcomes.len(), thetas.len())));
    }
    let k = thetas.len();
    let h = gates::hadamard();
    let mut state = input.clone();
    if k > 0 {
        state = state.tensor(&QuditState::plus_state(k, 2)?)?;
    }
    for i in 1..=k {
        state = state.apply_cz(0, i, 1)?.apply_matrix(0, &h)?.apply_matrix(i, &h)?;
    }

    let mut frame = PauliFrame::default();
    let mut prob = 1.0;
    for (&theta, &s) in thetas.iter().zip(outcomes) {
        // The next unmeasured flyer is always register 1.
        let basis = LocalGate::new(1, gates::equatorial_basis(frame.adapt_angle(theta)))?;
        let m = state.measure::<ChaCha8Rng>(&basis, Outcome::Forced(s as usize))?;
        prob *= m.prob;
        state = m.post;
        frame = frame.after_cycle(s);
    }
    let logical = frame_remove(&state, frame)?;
    Ok(DeferredBranch { stored: state, logical, frame, prob })
}

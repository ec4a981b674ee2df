//! The single-memory quantum wire.
//!
//! Each cycle attaches a fresh flying register in `|+⟩`, entangles it with
//! the memory by CZ, applies `H` to the memory, and measures the flyer in the
//! equatorial basis conjugated by `H`. The flyer-side Hadamard of the SWAP
//! is never applied as a gate. With outcome `s` the stored state becomes
//! `X^s H R_z(θ')` of the previous one, `R_z(θ) = diag(1, e^{iθ})`, and
//! [`PauliFrame`] tracks the byproducts so the logical state sees
//! `H R_z(θ)` every cycle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::frame::{frame_remove, PauliFrame};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::qudit::{gates, LocalGate, Outcome, QuditState};

/// How the flyer-side Hadamard is realized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlyerBasis {
    /// Folded into the measurement basis.
    #[default]
    Absorbed,
    /// Applied as a gate before an equatorial measurement.
    ActiveH,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub angle: f64,
    pub adapted_angle: f64,
    pub basis: String,
    pub outcome: u8,
    pub prob: f64,
    pub frame: PauliFrame,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTrace {
    pub cycles: Vec<CycleRecord>,
}

impl ProtocolTrace {
    pub fn outcomes(&self) -> Vec<u8> {
        self.cycles.iter().map(|c| c.outcome).collect()
    }

    pub fn frame(&self) -> PauliFrame {
        self.cycles.last().map(|c| c.frame).unwrap_or_default()
    }
}

#[derive(Clone, Debug)]
pub struct WireEngine {
    memory: QuditState,
    frame: PauliFrame,
    trace: ProtocolTrace,
    rng: ChaCha8Rng,
    flyer_basis: FlyerBasis,
    peak_live: usize,
}

impl WireEngine {
    /// Engine whose memory holds the one-qubit `input`.
    pub fn new(input: QuditState, seed: u64) -> Result<Self> {
        if input.n() != 1 || input.d() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "the wire memory is one qubit, got n = {}, d = {}",
                input.n(),
                input.d()
            )));
        }
        Ok(Self {
            memory: input,
            frame: PauliFrame::default(),
            trace: ProtocolTrace::default(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            flyer_basis: FlyerBasis::Absorbed,
            peak_live: 1,
        })
    }

    pub fn with_flyer_basis(mut self, basis: FlyerBasis) -> Self {
        self.flyer_basis = basis;
        self
    }

    pub fn stored_state(&self) -> &QuditState {
        &self.memory
    }

    pub fn frame(&self) -> PauliFrame {
        self.frame
    }

    pub fn trace(&self) -> &ProtocolTrace {
        &self.trace
    }

    /// Most registers held at once so far.
    pub fn peak_live_registers(&self) -> usize {
        self.peak_live
    }

    /// Stored state with the byproduct frame removed.
    pub fn logical_state(&self) -> Result<QuditState> {
        frame_remove(&self.memory, self.frame)
    }

    /// Entangled memory–flyer pair just before the flyer is measured, and the
    /// basis gate to measure the flyer (register 1) with.
    fn prepare(&self, theta: f64) -> Result<(QuditState, LocalGate, f64)> {
        let adapted = self.frame.adapt_angle(theta);
        let h = gates::hadamard();
        let mut joint = self
            .memory
            .tensor(&QuditState::plus_state(1, 2)?)?
            .apply_cz(0, 1, 1)?
            .apply_matrix(0, &h)?;
        let eq = gates::equatorial_basis(adapted);
        let basis = match self.flyer_basis {
            FlyerBasis::Absorbed => LocalGate::new(1, eq * &h)?,
            FlyerBasis::ActiveH => {
                joint = joint.apply_matrix(1, &h)?;
                LocalGate::new(1, eq)?
            }
        };
        Ok((joint, basis, adapted))
    }

    /// Born probabilities of the next cycle's two outcomes.
    pub fn cycle_probabilities(&self, theta: f64) -> Result<Vec<f64>> {
        let (joint, basis, _) = self.prepare(theta)?;
        joint.probabilities(&basis)
    }

    /// Runs one cycle at requested angle `theta`. `forced` pins the flyer's
    /// outcome; otherwise it is sampled from the engine's generator.
    pub fn cycle(&mut self, theta: f64, forced: Option<u8>) -> Result<CycleRecord> {
        let (joint, basis, adapted) = self.prepare(theta)?;
        self.peak_live = self.peak_live.max(joint.n());
        let m = match forced {
            Some(s) => joint.measure::<ChaCha8Rng>(&basis, Outcome::Forced(s as usize))?,
            None => joint.measure(&basis, Outcome::Sample(&mut self.rng))?,
        };
        let s = m.outcome as u8;
        self.memory = m.post;
        self.frame = self.frame.after_cycle(s);
        let basis_label = match self.flyer_basis {
            FlyerBasis::Absorbed => format!("H·(|0⟩+(−1)^s e^(−i·{adapted:.6})|1⟩)/√2"),
            FlyerBasis::ActiveH => format!("H then (|0⟩+(−1)^s e^(−i·{adapted:.6})|1⟩)/√2"),
        };
        let record = CycleRecord { angle: theta, adapted_angle: adapted, basis: basis_label, outcome: s, prob: m.prob, frame: self.frame };
        self.trace.cycles.push(record.clone());
        Ok(record)
    }
}

/// Outcome source for [`run_wire`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WireOutcomes {
    Forced(Vec<u8>),
    Sample { seed: u64 },
}

/// Runs the angle schedule with feed-forward and returns the frame-removed
/// logical state and the trace.
pub fn run_wire(input: &QuditState, thetas: &[f64], outcomes: &WireOutcomes) -> Result<(QuditState, ProtocolTrace)> {
    let seed = match outcomes {
        WireOutcomes::Forced(list) => {
            if list.len() != thetas.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} outcomes for {} angles",
                    list.len(),
                    thetas.len()
                )));
            }
            0
        }
        WireOutcomes::Sample { seed } => *seed,
    };
    let mut engine = WireEngine::new(input.clone(), seed)?;
    for (i, &theta) in thetas.iter().enumerate() {
        let forced = match outcomes {
            WireOutcomes::Forced(list) => Some(list[i]),
            WireOutcomes::Sample { .. } => None,
        };
        engine.cycle(theta, forced)?;
    }
    Ok((engine.logical_state()?, engine.trace))
}

/// `∏ H R_z(θ_i)` applied to `input` by plain matrix products.
pub fn wire_oracle(input: &QuditState, thetas: &[f64]) -> Result<QuditState> {
    let h = gates::hadamard();
    let mut u = gates::identity(2);
    for &t in thetas {
        u = &h * gates::rz(t) * u;
    }
    input.apply_matrix(0, &u)
}

/// Outcome sequence `index` in binary, first cycle most significant.
pub fn branch_outcomes(index: usize, k: usize) -> Vec<u8> {
    (0..k).map(|i| (index >> (k - 1 - i) & 1) as u8).collect()
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub outcomes: Vec<u8>,
    pub logical: QuditState,
    pub trace: ProtocolTrace,
}

/// Every one of the `2^k` outcome branches of a schedule.
pub fn enumerate_branches(input: &QuditState, thetas: &[f64], exec: Exec) -> Result<Vec<Branch>> {
    let k = thetas.len();
    let idx: Vec<usize> = (0..1usize << k).collect();
    exec.map(idx, |i| {
        let outcomes = branch_outcomes(i, k);
        let (logical, trace) = run_wire(input, thetas, &WireOutcomes::Forced(outcomes.clone()))?;
        Ok(Branch { outcomes, logical, trace })
    })
    .into_iter()
    .collect()
}

/// Largest residual between any branch's logical output and the oracle.
pub fn branch_determinism_residual(input: &QuditState, thetas: &[f64], exec: Exec) -> Result<f64> {
    let want = wire_oracle(input, thetas)?;
    Ok(enumerate_branches(input, thetas, exec)?
        .iter()
        .map(|b| b.logical.phase_residual(&want))
        .fold(0.0, f64::max))
}

/// Largest branch-by-branch difference, in outcome probabilities and in
/// stored post-states, between the absorbed basis and an active `H` on the
/// flyer.
pub fn basis_redefinition_residual(input: &QuditState, thetas: &[f64]) -> Result<(f64, f64)> {
    let k = thetas.len();
    let (mut dp, mut ds): (f64, f64) = (0.0, 0.0);
    for i in 0..1usize << k {
        let outs = branch_outcomes(i, k);
        let mut a = WireEngine::new(input.clone(), 0)?;
        let mut b = WireEngine::new(input.clone(), 0)?.with_flyer_basis(FlyerBasis::ActiveH);
        for (&t, &s) in thetas.iter().zip(&outs) {
            let pa = a.cycle_probabilities(t)?;
            let pb = b.cycle_probabilities(t)?;
            dp = pa.iter().zip(&pb).map(|(x, y)| (x - y).abs()).fold(dp, f64::max);
            if pa[s as usize] < 1e-14 {
                break;
            }
            a.cycle(t, Some(s))?;
            b.cycle(t, Some(s))?;
            ds = ds.max(a.stored_state().phase_residual(b.stored_state()));
        }
    }
    Ok((dp, ds))
}

/// Angle schedule for `R_z(γ) R_x(β) R_z(α)`, with `R_x(β) = H R_z(β) H`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationPlan {
    pub angles: Vec<f64>,
    /// Number of trailing `θ = 0` cycles, which only contribute `H`.
    pub padding: usize,
}

/// `[α, β, γ, 0]` realizes `H·H R_z(γ)·H R_z(β)·H R_z(α) = R_z(γ) R_x(β) R_z(α)`;
/// when `β = 0` the two Z rotations merge into `[α + γ, 0]`. Every plan
/// has even length, so no stray `H` is left over.
pub fn compile_rotation(alpha: f64, beta: f64, gamma: f64) -> RotationPlan {
    if beta == 0.0 {
        RotationPlan { angles: vec![alpha + gamma, 0.0], padding: 1 }
    } else {
        RotationPlan { angles: vec![alpha, beta, gamma, 0.0], padding: 1 }
    }
}

/// Draws a uniformly random single-qubit input.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> QuditState {
    QuditState::random(1, 2, rng).expect("one qubit fits")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn ket(a: f64, b: f64) -> QuditState {
        QuditState::from_amplitudes(1, 2, vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)]).unwrap()
    }

    /// Measuring the ψ side of CZ(|ψ⟩⊗|+⟩) in `(|0⟩+(−1)^s e^{−iθ}|1⟩)/√2`
    /// leaves `X^s H R_z(θ)|ψ⟩` on the other register.
    fn two_register_oracle(psi: &QuditState, theta: f64, s: u8) -> QuditState {
        let joint = psi.tensor(&QuditState::plus_state(1, 2).unwrap()).unwrap().apply_cz(0, 1, 1).unwrap();
        let basis = LocalGate::new(0, gates::equatorial_basis(theta)).unwrap();
        joint.measure::<ChaCha8Rng>(&basis, Outcome::Forced(s as usize)).unwrap().post
    }

    #[test]
    fn oracle_matches_the_stated_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let psi = random_qubit(&mut rng);
            let theta: f64 = rng.random_range(-3.0..3.0);
            for s in 0..2u8 {
                let mut u = gates::hadamard() * gates::rz(theta);
                if s == 1 {
                    u = gates::pauli_x() * u;
                }
                let want = psi.apply_matrix(0, &u).unwrap();
                assert!(two_register_oracle(&psi, theta, s).phase_residual(&want) < 1e-12);
            }
        }
    }

    #[test]
    fn cycle_examples() {
        let zero = ket(1.0, 0.0);
        let plus = ket(1.0, 1.0);

        let mut e = WireEngine::new(zero.clone(), 0).unwrap();
        let rec = e.cycle(0.0, Some(0)).unwrap();
        assert!((rec.prob - 0.5).abs() < 1e-12);
        assert!(e.stored_state().phase_residual(&plus) < 1e-12);
        assert!(e.frame().is_trivial());

        let mut e = WireEngine::new(plus.clone(), 0).unwrap();
        e.cycle(0.0, Some(0)).unwrap();
        assert!(e.stored_state().phase_residual(&zero) < 1e-12);

        let mut e = WireEngine::new(zero, 0).unwrap();
        e.cycle(0.0, Some(1)).unwrap();
        assert_eq!(e.frame(), PauliFrame::new(1, 0));
        assert!(e.logical_state().unwrap().phase_residual(&plus) < 1e-12);
    }

    #[test]
    fn engine_cycle_matches_two_register_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..10 {
            let psi = random_qubit(&mut rng);
            let theta: f64 = rng.random_range(-3.0..3.0);
            for s in 0..2u8 {
                let mut e = WireEngine::new(psi.clone(), 0).unwrap();
                e.cycle(theta, Some(s)).unwrap();
                assert!(e.stored_state().phase_residual(&two_register_oracle(&psi, theta, s)) < 1e-12);
            }
        }
    }

    #[test]
    fn run_wire_examples() {
        let zero = ket(1.0, 0.0);
        let (out, trace) = run_wire(&zero, &[], &WireOutcomes::Forced(vec![])).unwrap();
        assert_eq!(out, zero);
        assert!(trace.cycles.is_empty());

        let (out, trace) = run_wire(&zero, &[0.0, 0.0], &WireOutcomes::Forced(vec![0, 0])).unwrap();
        assert!(out.phase_residual(&zero) < 1e-12);
        assert_eq!(trace.outcomes(), vec![0, 0]);

        assert!(run_wire(&zero, &[0.0], &WireOutcomes::Forced(vec![])).is_err());
    }

    #[test]
    fn sampled_runs_are_seed_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let psi = random_qubit(&mut rng);
        let thetas = [0.3, -1.2, 2.0, 0.1];
        let a = run_wire(&psi, &thetas, &WireOutcomes::Sample { seed: 5 }).unwrap();
        let b = run_wire(&psi, &thetas, &WireOutcomes::Sample { seed: 5 }).unwrap();
        assert_eq!(a.1, b.1);
        assert!(a.0.phase_residual(&wire_oracle(&psi, &thetas).unwrap()) < 1e-10);
    }

    #[test]
    fn all_branches_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for k in 0..=5 {
            let psi = random_qubit(&mut rng);
            let thetas: Vec<f64> = (0..k).map(|_| rng.random_range(-3.2..3.2)).collect();
            let res = branch_determinism_residual(&psi, &thetas, Exec::Serial).unwrap();
            assert!(res < 1e-10, "k = {k}: {res}");
        }
    }

    #[test]
    fn compiled_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let psi = random_qubit(&mut rng);

        let plan = compile_rotation(0.0, 0.0, 0.0);
        assert!(plan.angles.iter().all(|&t| t == 0.0));
        assert_eq!(plan.angles.len() % 2, 0);
        assert!(branch_determinism_residual(&psi, &plan.angles, Exec::Serial).unwrap() < 1e-10);
        let (out, _) = run_wire(&psi, &plan.angles, &WireOutcomes::Forced(vec![1, 0])).unwrap();
        assert!(out.phase_residual(&psi) < 1e-12);

        let phi = 0.83;
        let plan = compile_rotation(phi, 0.0, 0.0);
        assert_eq!(plan.angles, vec![phi, 0.0]);
        let want = psi.apply_matrix(0, &gates::rz(phi)).unwrap();
        for b in enumerate_branches(&psi, &plan.angles, Exec::Serial).unwrap() {
            assert!(b.logical.phase_residual(&want) < 1e-10);
        }

        for _ in 0..5 {
            let (a, b, c): (f64, f64, f64) =
                (rng.random_range(-3.0..3.0), rng.random_range(0.1..3.0), rng.random_range(-3.0..3.0));
            let target = gates::rz(c) * gates::rx(b) * gates::rz(a);
            let want = psi.apply_matrix(0, &target).unwrap();
            let plan = compile_rotation(a, b, c);
            for br in enumerate_branches(&psi, &plan.angles, Exec::Serial).unwrap() {
                assert!(br.logical.phase_residual(&want) < 1e-10);
            }
        }
    }

    #[test]
    fn active_and_absorbed_bases_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let psi = random_qubit(&mut rng);
        let (dp, ds) = basis_redefinition_residual(&psi, &[0.7, -1.9, 2.5]).unwrap();
        assert!(dp < 1e-12 && ds < 1e-12, "{dp} {ds}");
    }

    #[test]
    fn memory_bound_on_the_wire() {
        let mut e = WireEngine::new(ket(1.0, 0.0), 3).unwrap();
        for t in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7] {
            e.cycle(t, None).unwrap();
            assert_eq!(e.stored_state().n(), 1);
        }
        assert_eq!(e.peak_live_registers(), 2);
    }

    #[test]
    fn rejects_non_qubit_memory() {
        assert!(WireEngine::new(QuditState::plus_state(2, 2).unwrap(), 0).is_err());
        assert!(WireEngine::new(QuditState::plus_state(1, 3).unwrap(), 0).is_err());
    }
}

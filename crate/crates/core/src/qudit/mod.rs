//! Dense state vectors over `n` registers of local dimension `d`.
//!
//! Amplitudes are indexed in mixed radix with register 0 as the most
//! significant digit. Equality between states is always taken up to a
//! global phase.

pub mod gates;
mod verify;

pub use gates::Mat;
pub use verify::{
    apply_lc_unitary, verify_eq1, verify_eq3_identity, verify_qudit_swap, Eq1Report, Eq3Report,
    FourierVariant, QuditSwapReport,
};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Default refusal threshold for `d^n`.
pub const DEFAULT_MAX_AMPS: u64 = 1 << 24;

/// Amplitude cap, overridable through `SEQMBQC_MAX_AMPS`.
pub fn max_amps() -> u64 {
    std::env::var("SEQMBQC_MAX_AMPS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_AMPS)
}

fn checked_len(n: usize, d: usize) -> Result<usize> {
    let requested = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let cap = max_amps();
    if requested > cap as u128 {
        return Err(Error::MemoryCap { requested, cap });
    }
    Ok(requested as usize)
}

/// A single-register unitary together with the register it acts on.
#[derive(Clone, Debug)]
pub struct LocalGate {
    pub target: usize,
    pub matrix: Mat,
}

impl LocalGate {
    pub fn new(target: usize, matrix: Mat) -> Result<Self> {
        let dev = gates::unitarity_deviation(&matrix);
        if dev > 1e-12 {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { target, matrix })
    }
}

/// Outcome selection for a projective measurement.
pub enum Outcome<'a, R: Rng + ?Sized> {
    Forced(usize),
    Sample(&'a mut R),
}

#[derive(Clone, Debug)]
pub struct Measurement {
    pub outcome: usize,
    pub prob: f64,
    /// Post-measurement state of the remaining registers (the measured one is
    /// removed; labels above it shift down by one).
    pub post: QuditState,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuditState {
    n: usize,
    d: usize,
    amps: Vec<Complex64>,
}

impl QuditState {
    /// `|+⟩^{⊗n}`: every amplitude equals `d^{-n/2}`.
    pub fn plus_state(n: usize, d: usize) -> Result<Self> {
        check_dims(n, d)?;
        let len = checked_len(n, d)?;
        let a = Complex64::new((len as f64).sqrt().recip(), 0.0);
        Ok(Self { n, d, amps: vec![a; len] })
    }

    /// Computational basis state with the given digits (register 0 first).
    pub fn basis_state(d: usize, digits: &[usize]) -> Result<Self> {
        let n = digits.len();
        check_dims(n.max(1), d)?;
        let len = checked_len(n, d)?;
        let mut idx = 0;
        for &a in digits {
            if a >= d {
                return Err(Error::DimensionMismatch(format!("digit {a} out of range for d = {d}")));
            }
            idx = idx * d + a;
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(Self { n, d, amps })
    }

    /// Wraps raw amplitudes, normalizing them. Zero vectors are rejected.
    pub fn from_amplitudes(n: usize, d: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_dims(n.max(1), d)?;
        let len = checked_len(n, d)?;
        if amps.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {n} registers of dimension {d}",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::DimensionMismatch("state has zero or non-finite norm".into()));
        }
        Ok(Self { n, d, amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    /// Haar-ish random state: normalized complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Self> {
        use rand_distr::{Distribution, StandardNormal};
        check_dims(n, d)?;
        let len = checked_len(n, d)?;
        let amps = (0..len)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        Self::from_amplitudes(n, d, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn stride(&self, j: usize) -> usize {
        self.d.pow((self.n - 1 - j) as u32)
    }

    fn check_register(&self, j: usize) -> Result<()> {
        if j < self.n {
            Ok(())
        } else {
            Err(Error::RegisterOutOfRange { index: j, n: self.n })
        }
    }

    /// Digit of register `j` in basis index `idx`.
    #[inline]
    pub fn digit(&self, idx: usize, j: usize) -> usize {
        idx / self.stride(j) % self.d
    }

    /// Tensor product `self ⊗ other`; `other`'s registers are appended.
    pub fn tensor(&self, other: &QuditState) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(format!("d = {} vs d = {}", self.d, other.d)));
        }
        checked_len(self.n + other.n, self.d)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self { n: self.n + other.n, d: self.d, amps })
    }

    /// Applies a `d × d` matrix to register `j`.
    pub fn apply_matrix(&self, j: usize, m: &Mat) -> Result<Self> {
        self.check_register(j)?;
        if m.nrows() != self.d || m.ncols() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} gate on a d = {} register",
                m.nrows(),
                m.ncols(),
                self.d
            )));
        }
        let d = self.d;
        let s = self.stride(j);
        let mut out = self.amps.clone();
        let mut buf = vec![Complex64::new(0.0, 0.0); d];
        for block in (0..self.amps.len()).step_by(d * s) {
            for inner in 0..s {
                let base = block + inner;
                for (a, slot) in buf.iter_mut().enumerate() {
                    *slot = self.amps[base + a * s];
                }
                for a in 0..d {
                    out[base + a * s] = (0..d).map(|b| m[(a, b)] * buf[b]).sum();
                }
            }
        }
        Ok(Self { amps: out, ..self.clone() })
    }

    pub fn apply_gate(&self, gate: &LocalGate) -> Result<Self> {
        self.apply_matrix(gate.target, &gate.matrix)
    }

    /// Weighted controlled-Z: basis state with digits `(a_j, a_k)` picks up
    /// `exp(2πi·w·a_j·a_k/d)`. For `d = 2, w = 1` this is the usual CZ.
    pub fn apply_cz(&self, j: usize, k: usize, w: i64) -> Result<Self> {
        self.check_register(j)?;
        self.check_register(k)?;
        if j == k {
            return Err(Error::SameRegister(j));
        }
        let d = self.d;
        let table: Vec<Complex64> = (0..d * d)
            .map(|ab| gates::root_of_unity(w.rem_euclid(d as i64) * ((ab / d) * (ab % d)) as i64, d))
            .collect();
        let (sj, sk) = (self.stride(j), self.stride(k));
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(idx, a)| a * table[(idx / sj % d) * d + idx / sk % d])
            .collect();
        Ok(Self { amps, ..self.clone() })
    }

    /// Born probabilities for measuring register `j` in the basis whose bras
    /// are the rows of `basis`.
    pub fn probabilities(&self, basis: &LocalGate) -> Result<Vec<f64>> {
        let rotated = self.apply_gate(basis)?;
        let j = basis.target;
        let mut probs = vec![0.0; self.d];
        for (idx, a) in rotated.amps.iter().enumerate() {
            probs[rotated.digit(idx, j)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Projective measurement of register `basis.target` in the basis
    /// `{basis† |k⟩}`.
    pub fn measure<R: Rng + ?Sized>(&self, basis: &LocalGate, outcome: Outcome<'_, R>) -> Result<Measurement> {
        let rotated = self.apply_gate(basis)?;
        let j = basis.target;
        let k = match outcome {
            Outcome::Forced(k) => {
                if k >= self.d {
                    return Err(Error::DimensionMismatch(format!("outcome {k} for d = {}", self.d)));
                }
                k
            }
            Outcome::Sample(rng) => {
                let probs = self.probabilities(basis)?;
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = self.d - 1;
                for (k, p) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        pick = k;
                        break;
                    }
                }
                pick
            }
        };
        let s = rotated.stride(j);
        let d = self.d;
        let kept: Vec<Complex64> = rotated
            .amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx / s % d == k)
            .map(|(_, a)| *a)
            .collect();
        let prob: f64 = kept.iter().map(|a| a.norm_sqr()).sum();
        if prob < 1e-14 {
            return Err(Error::ImpossibleOutcome { outcome: k, prob });
        }
        let norm = prob.sqrt();
        let post = Self { n: self.n - 1, d, amps: kept.into_iter().map(|a| a / norm).collect() };
        Ok(Measurement { outcome: k, prob, post })
    }

    /// `min_φ ‖self − e^{iφ} other‖`, evaluated at the optimal phase.
    pub fn phase_residual(&self, other: &QuditState) -> f64 {
        assert_eq!((self.n, self.d), (other.n, other.d), "states of different shape");
        let inner: Complex64 = other.amps.iter().zip(&self.amps).map(|(b, a)| b.conj() * a).sum();
        let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { Complex64::new(1.0, 0.0) };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - phase * b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

fn check_dims(n: usize, d: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DimensionMismatch("need at least one register".into()));
    }
    if d < 2 {
        return Err(Error::DimensionMismatch(format!("local dimension must be at least 2, got {d}")));
    }
    Ok(())
}

/// Whether `s1` and `s2` agree up to a global phase, with the residual
/// `min_φ ‖s1 − e^{iφ}s2‖` (equivalently `√(2 − 2|⟨s1|s2⟩|)`).
pub fn equal_up_to_phase(s1: &QuditState, s2: &QuditState, tol: f64) -> Result<(bool, f64)> {
    if (s1.n, s1.d) != (s2.n, s2.d) {
        return Err(Error::DimensionMismatch(format!(
            "({}, {}) vs ({}, {})",
            s1.n, s1.d, s2.n, s2.d
        )));
    }
    let r = s1.phase_residual(s2);
    Ok((r < tol, r))
}

pub fn plus_state(n: usize, d: usize) -> Result<QuditState> {
    QuditState::plus_state(n, d)
}

/// `∏ CZ_jk^{Γ_jk} |+⟩^{⊗n}` for a graph whose modulus is `d`.
pub fn build_graph_state(g: &WeightedGraph, d: usize) -> Result<QuditState> {
    if g.modulus() != Some(d as u32) {
        return Err(Error::ModulusMismatch { expected: Some(d as u32), found: g.modulus() });
    }
    let mut s = QuditState::plus_state(g.n(), d)?;
    for (j, k, w) in g.edges() {
        s = s.apply_cz(j, k, w.to_integer())?;
    }
    Ok(s)
}

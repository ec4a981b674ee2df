//! Gaussian unitaries as real symplectic matrices.
//!
//! Quadratures are ordered `x = (q_1..q_n, p_1..p_n)` with `[q_j, p_j] = i`.
//! A [`SymplecticOp`] stores the Heisenberg-picture matrix `S` of a unitary
//! `U`, `U† x U = S x`, so the operator product `A B` has matrix `S_A S_B`
//! and a state `U|ψ⟩` has covariance `S V Sᵀ`. Operators transported by
//! conjugation (`U x U†`, e.g. nullifiers) use `S⁻¹`.
//!
//! Conventions (`ħ = 1`):
//!
//! | unitary              | Heisenberg action                          |
//! |----------------------|--------------------------------------------|
//! | `F`                  | `q → −p`, `p → q` (so `F q F† = p`)         |
//! | `exp(i a p_j²/2)`    | `q_j → q_j − a p_j`                         |
//! | `exp(i b q_j²/2)`    | `p_j → p_j + b q_j`                         |
//! | `exp(i w q_j q_k)`   | `p_j → p_j + w q_k`, `p_k → p_k + w q_j`    |
//! | `exp(i c p_j q_k)`   | `q_j → q_j − c q_k`, `p_k → p_k + c p_j`    |
//!
//! Each row follows from `U† x U = exp(−Ω H) x` for `U = exp(i xᵀHx/2)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Standard symplectic form for `(q.., p..)` ordering: `[[0, 1], [−1, 0]]`.
pub fn omega(n: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        w[(j, n + j)] = 1.0;
        w[(n + j, j)] = -1.0;
    }
    w
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticOp {
    n: usize,
    s: DMatrix<f64>,
}

impl SymplecticOp {
    pub fn identity(n: usize) -> Self {
        Self { n, s: DMatrix::identity(2 * n, 2 * n) }
    }

    /// Wraps a matrix, checking `S Ω Sᵀ = Ω` within `1e-12`.
    pub fn from_matrix(s: DMatrix<f64>) -> Result<Self> {
        if s.nrows() != s.ncols() || s.nrows() % 2 != 0 {
            return Err(Error::DimensionMismatch(format!("{}x{} is not 2n x 2n", s.nrows(), s.ncols())));
        }
        let op = Self { n: s.nrows() / 2, s };
        let dev = op.symplectic_deviation();
        if dev > 1e-12 {
            return Err(Error::DimensionMismatch(format!("matrix is not symplectic (deviation {dev:e})")));
        }
        Ok(op)
    }

    /// Heisenberg matrix of `exp(i xᵀ H x / 2)` for symmetric `H`, via the
    /// matrix exponential `exp(−Ω H)`.
    pub fn from_quadratic(h: &DMatrix<f64>) -> Result<Self> {
        if h.nrows() != h.ncols() || h.nrows() % 2 != 0 {
            return Err(Error::DimensionMismatch("Hamiltonian must be 2n x 2n".into()));
        }
        let n = h.nrows() / 2;
        let generator = -(omega(n) * h);
        Ok(Self { n, s: generator.exp() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    fn check_mode(&self, j: usize) -> Result<()> {
        if j < self.n {
            Ok(())
        } else {
            Err(Error::RegisterOutOfRange { index: j, n: self.n })
        }
    }

    /// Fourier transform on mode `j` (or its adjoint).
    pub fn fourier(n: usize, j: usize, dagger: bool) -> Result<Self> {
        let mut op = Self::identity(n);
        op.check_mode(j)?;
        let sign = if dagger { -1.0 } else { 1.0 };
        let (q, p) = (j, n + j);
        op.s[(q, q)] = 0.0;
        op.s[(p, p)] = 0.0;
        op.s[(q, p)] = -sign;
        op.s[(p, q)] = sign;
        Ok(op)
    }

    /// `exp(i w q_j q_k)`.
    pub fn cz(n: usize, j: usize, k: usize, w: f64) -> Result<Self> {
        let mut op = Self::identity(n);
        op.check_mode(j)?;
        op.check_mode(k)?;
        if j == k {
            return Err(Error::SameRegister(j));
        }
        op.s[(n + j, k)] = w;
        op.s[(n + k, j)] = w;
        Ok(op)
    }

    /// `exp(i a p_j² / 2)`.
    pub fn p_shear(n: usize, j: usize, a: f64) -> Result<Self> {
        let mut op = Self::identity(n);
        op.check_mode(j)?;
        op.s[(j, n + j)] = -a;
        Ok(op)
    }

    /// `exp(i b q_j² / 2)`.
    pub fn q_shear(n: usize, j: usize, b: f64) -> Result<Self> {
        let mut op = Self::identity(n);
        op.check_mode(j)?;
        op.s[(n + j, j)] = b;
        Ok(op)
    }

    /// `exp(i c p_j q_k)`, `j ≠ k`.
    pub fn pq_coupling(n: usize, j: usize, k: usize, c: f64) -> Result<Self> {
        let mut op = Self::identity(n);
        op.check_mode(j)?;
        op.check_mode(k)?;
        if j == k {
            return Err(Error::SameRegister(j));
        }
        op.s[(j, k)] = -c;
        op.s[(n + k, n + j)] = c;
        Ok(op)
    }

    /// Phase-space rotation of mode `j` taking `q_j` to `cos φ q_j + sin φ p_j`.
    pub fn rotation(n: usize, j: usize, phi: f64) -> Result<Self> {
        let mut op = Self::identity(n);
        op.check_mode(j)?;
        let (c, s) = (phi.cos(), phi.sin());
        let (q, p) = (j, n + j);
        op.s[(q, q)] = c;
        op.s[(q, p)] = s;
        op.s[(p, q)] = -s;
        op.s[(p, p)] = c;
        Ok(op)
    }

    /// `self · other` as operators: `other` acts first on the state.
    pub fn then_after(&self, other: &SymplecticOp) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {} modes", self.n, other.n)));
        }
        Ok(Self { n: self.n, s: &self.s * &other.s })
    }

    /// Operator product of a sequence, leftmost first: `ops[0] · ops[1] · …`.
    pub fn product(n: usize, ops: &[SymplecticOp]) -> Result<Self> {
        ops.iter().try_fold(Self::identity(n), |acc, op| acc.then_after(op))
    }

    /// `S⁻¹ = −Ω Sᵀ Ω`.
    pub fn inverse(&self) -> Self {
        let w = omega(self.n);
        Self { n: self.n, s: -(&w * self.s.transpose() * &w) }
    }

    /// Largest entry of `|S Ω Sᵀ − Ω|`.
    pub fn symplectic_deviation(&self) -> f64 {
        let w = omega(self.n);
        (&self.s * &w * self.s.transpose() - w).amax()
    }

    pub fn max_abs_diff(&self, other: &SymplecticOp) -> f64 {
        (&self.s - &other.s).amax()
    }
}

/// `exp(±i p_j²/2) ⊗_{l ∈ N_j} exp(∓i q_l²/2)`, with `N_j` read from `g`.
pub fn symplectic_lc_unitary(g: &WeightedGraph, j: usize, sign: i32) -> Result<SymplecticOp> {
    let n = g.n();
    let sigma = if sign >= 0 { 1.0 } else { -1.0 };
    let mut ops = vec![SymplecticOp::p_shear(n, j, sigma)?];
    for l in g.neighborhood(j)? {
        ops.push(SymplecticOp::q_shear(n, l, -sigma)?);
    }
    SymplecticOp::product(n, &ops)
}

pub fn symplectic_fourier(n: usize, j: usize, dagger: bool) -> Result<SymplecticOp> {
    SymplecticOp::fourier(n, j, dagger)
}

pub fn symplectic_cz(n: usize, j: usize, k: usize, w: f64) -> Result<SymplecticOp> {
    SymplecticOp::cz(n, j, k, w)
}

/// Product of the weighted CZs of every edge of `g`.
pub fn graph_entangler(g: &WeightedGraph) -> Result<SymplecticOp> {
    let n = g.n();
    let w = g.to_f64();
    let ops = g
        .edges()
        .map(|(j, k, _)| SymplecticOp::cz(n, j, k, w[j * n + k]))
        .collect::<Result<Vec<_>>>()?;
    SymplecticOp::product(n, &ops)
}

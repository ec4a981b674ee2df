//! Nullifier bases of ideal CV graph states.
//!
//! Starting from `|0⟩_p^{⊗n}` (annihilated by every `p_j`) and conjugating by
//! `CZ_jk = exp(i Γ_jk q_j q_k)` turns each `p_j` into `p_j − Σ_k Γ_jk q_k`.
//! These `n` combinations annihilate `|G⟩`, and row-space comparison of
//! nullifier bases is how ideal states are compared here.

use nalgebra::DMatrix;
use num_traits::Zero;

use super::symplectic::SymplecticOp;
use crate::error::{Error, Result};
use crate::graph::{Weight, WeightedGraph};

/// `n × 2n` coefficient matrix; row `j` is a linear combination of
/// `(q_1..q_n, p_1..p_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NullifierBasis {
    n: usize,
    m: DMatrix<f64>,
}

impl NullifierBasis {
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.ncols() != 2 * m.nrows() {
            return Err(Error::DimensionMismatch(format!("{}x{} is not n x 2n", m.nrows(), m.ncols())));
        }
        Ok(Self { n: m.nrows(), m })
    }

    /// `{p_1, …, p_n}`: the nullifiers of `|0⟩_p^{⊗n}`.
    pub fn vacuum(n: usize) -> Self {
        let mut m = DMatrix::zeros(n, 2 * n);
        for j in 0..n {
            m[(j, n + j)] = 1.0;
        }
        Self { n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Heisenberg transport under `U`: rows become the coefficients of
    /// `U n U†`, i.e. `M' = M S⁻¹`.
    pub fn transform(&self, op: &SymplecticOp) -> Result<Self> {
        if op.n() != self.n {
            return Err(Error::DimensionMismatch(format!("{} nullifiers vs {} modes", self.n, op.n())));
        }
        Ok(Self { n: self.n, m: &self.m * op.inverse().matrix() })
    }
}

/// `M = [−Γ | 1]`.
pub fn nullifier_basis(g: &WeightedGraph) -> Result<NullifierBasis> {
    if g.modulus().is_some() {
        return Err(Error::ModulusMismatch { expected: None, found: g.modulus() });
    }
    let n = g.n();
    let w = g.to_f64();
    let mut nb = NullifierBasis::vacuum(n);
    for j in 0..n {
        for k in 0..n {
            nb.m[(j, k)] = -w[j * n + k];
        }
    }
    Ok(nb)
}

pub fn transform_nullifiers(nb: &NullifierBasis, op: &SymplecticOp) -> Result<NullifierBasis> {
    nb.transform(op)
}

/// Adjacency matrix read back from a nullifier basis.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveredGraph {
    pub gamma: DMatrix<f64>,
}

/// Entries of the recovered matrix may deviate from symmetry or from a zero
/// diagonal by at most this much.
const STRUCTURE_TOL: f64 = 1e-9;

/// Row-reduces the basis so the p-block is the identity and returns the
/// negated q-block as an adjacency matrix.
pub fn recover_graph(nb: &NullifierBasis) -> Result<RecoveredGraph> {
    let n = nb.n;
    let q_block = nb.m.columns(0, n).into_owned();
    let p_block = nb.m.columns(n, n).into_owned();
    let svd = p_block.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if n > 0 && !(smin > 1e-12 * smax.max(1.0)) {
        return Err(Error::NotGraphNullifier("p-block is singular".into()));
    }
    let inv = p_block
        .try_inverse()
        .ok_or_else(|| Error::NotGraphNullifier("p-block is singular".into()))?;
    let gamma = -(inv * q_block);
    for j in 0..n {
        if gamma[(j, j)].abs() > STRUCTURE_TOL {
            return Err(Error::NotGraphNullifier(format!("diagonal entry {j} is {:e}", gamma[(j, j)])));
        }
        for k in j + 1..n {
            if (gamma[(j, k)] - gamma[(k, j)]).abs() > STRUCTURE_TOL {
                return Err(Error::NotGraphNullifier(format!("entries ({j},{k}) and ({k},{j}) differ")));
            }
        }
    }
    Ok(RecoveredGraph { gamma })
}

impl RecoveredGraph {
    /// Largest per-entry distance to the weights of `g`.
    pub fn max_deviation(&self, g: &WeightedGraph) -> f64 {
        let n = g.n();
        if self.gamma.nrows() != n {
            return f64::INFINITY;
        }
        let w = g.to_f64();
        (0..n * n).map(|i| (self.gamma[(i / n, i % n)] - w[i]).abs()).fold(0.0, f64::max)
    }

    /// Snaps entries to nearby rationals with denominator at most `max_den`.
    pub fn to_weighted_graph(&self, max_den: i64) -> Result<WeightedGraph> {
        let n = self.gamma.nrows();
        let mut g = WeightedGraph::real(n)?;
        for j in 0..n {
            for k in j + 1..n {
                let x = 0.5 * (self.gamma[(j, k)] + self.gamma[(k, j)]);
                let w = nearest_rational(x, max_den);
                if !w.is_zero() {
                    g.set_weight(j, k, w)?;
                }
            }
        }
        Ok(g)
    }
}

/// Best rational approximation with bounded denominator (continued fractions).
fn nearest_rational(x: f64, max_den: i64) -> Weight {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let k2 = a.saturating_mul(k1).saturating_add(k0);
        if k2 > max_den || k2 <= 0 {
            break;
        }
        let h2 = a.saturating_mul(h1).saturating_add(h0);
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        rest = frac.recip();
    }
    if k1 == 0 {
        return Weight::from(x.round() as i64);
    }
    Weight::new(h1, k1)
}

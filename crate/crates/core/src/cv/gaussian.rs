//! Finitely squeezed Gaussian states: covariance matrix and mean, vacuum
//! variance 1/2.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::nullifier::nullifier_basis;
use super::symplectic::{graph_entangler, omega, SymplecticOp};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    n: usize,
    v: DMatrix<f64>,
    mean: DVector<f64>,
}

/// How the homodyne outcome is chosen.
pub enum HomodyneOutcome<'a, R: Rng + ?Sized> {
    Forced(f64),
    Sample(&'a mut R),
}

impl GaussianState {
    pub fn vacuum(n: usize) -> Self {
        Self { n, v: DMatrix::identity(2 * n, 2 * n) * 0.5, mean: DVector::zeros(2 * n) }
    }

    /// Product of p-squeezed modes: `Var(q) = e^{2ζ}/2`, `Var(p) = e^{−2ζ}/2`.
    pub fn p_squeezed(n: usize, zeta: f64) -> Self {
        let mut v = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            v[(j, j)] = (2.0 * zeta).exp() / 2.0;
            v[(n + j, n + j)] = (-2.0 * zeta).exp() / 2.0;
        }
        Self { n, v, mean: DVector::zeros(2 * n) }
    }

    pub fn new(v: DMatrix<f64>, mean: DVector<f64>) -> Result<Self> {
        if v.nrows() != v.ncols() || v.nrows() % 2 != 0 || mean.len() != v.nrows() {
            return Err(Error::DimensionMismatch("covariance must be 2n x 2n with a 2n mean".into()));
        }
        Ok(Self { n: v.nrows() / 2, v, mean })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    /// State after the unitary with Heisenberg matrix `S`: `V → S V Sᵀ`.
    pub fn apply(&self, op: &SymplecticOp) -> Result<Self> {
        if op.n() != self.n {
            return Err(Error::DimensionMismatch(format!("{} modes vs {}-mode operator", self.n, op.n())));
        }
        let s = op.matrix();
        Ok(Self { n: self.n, v: s * &self.v * s.transpose(), mean: s * &self.mean })
    }

    /// Variance of the linear combination `c · x`.
    pub fn variance_of(&self, c: &DVector<f64>) -> f64 {
        (c.transpose() * &self.v * c)[(0, 0)]
    }

    /// Smallest eigenvalue of `V + iΩ/2`, via its real embedding.
    pub fn uncertainty_margin(&self) -> f64 {
        let dim = 2 * self.n;
        if dim == 0 {
            return 0.0;
        }
        let half_omega = omega(self.n) * 0.5;
        let mut big = DMatrix::zeros(2 * dim, 2 * dim);
        big.view_mut((0, 0), (dim, dim)).copy_from(&self.v);
        big.view_mut((dim, dim), (dim, dim)).copy_from(&self.v);
        big.view_mut((0, dim), (dim, dim)).copy_from(&(-&half_omega));
        big.view_mut((dim, 0), (dim, dim)).copy_from(&half_omega);
        SymmetricEigen::new(big).eigenvalues.min()
    }

    /// `V` symmetric and `V + iΩ/2 ⪰ 0`, both within `1e-10`.
    pub fn is_physical(&self) -> bool {
        let sym = (&self.v - self.v.transpose()).amax() <= 1e-10;
        sym && self.uncertainty_margin() >= -1e-10
    }

    /// `det(2V)`; equals one exactly for pure states.
    pub fn purity_det(&self) -> f64 {
        (&self.v * 2.0).determinant()
    }

    /// Homodyne detection of `cos φ q_k + sin φ p_k`. The measured mode is
    /// removed from the returned state.
    pub fn homodyne_measure<R: Rng + ?Sized>(
        &self,
        k: usize,
        phi: f64,
        outcome: HomodyneOutcome<'_, R>,
    ) -> Result<(f64, GaussianState)> {
        if k >= self.n {
            return Err(Error::RegisterOutOfRange { index: k, n: self.n });
        }
        let n = self.n;
        let mut c = DVector::zeros(2 * n);
        c[k] = phi.cos();
        c[n + k] = phi.sin();
        let vc = &self.v * &c;
        let var = c.dot(&vc);
        let mu = c.dot(&self.mean);
        let x = match outcome {
            HomodyneOutcome::Forced(x) => x,
            HomodyneOutcome::Sample(rng) => {
                let normal = Normal::new(mu, var.max(0.0).sqrt()).expect("finite variance");
                normal.sample(rng)
            }
        };
        // Moore–Penrose inverse of the scalar variance.
        let gain = if var > 1e-300 { 1.0 / var } else { 0.0 };
        let v_cond = &self.v - &vc * vc.transpose() * gain;
        let mean_cond = &self.mean + &vc * ((x - mu) * gain);

        let keep: Vec<usize> = (0..n).filter(|&j| j != k).chain((0..n).filter(|&j| j != k).map(|j| n + j)).collect();
        let m = keep.len();
        let v = DMatrix::from_fn(m, m, |a, b| v_cond[(keep[a], keep[b])]);
        let mean = DVector::from_fn(m, |a, _| mean_cond[keep[a]]);
        Ok((x, GaussianState { n: n - 1, v, mean }))
    }
}

/// `S_G V_sq S_Gᵀ` with `S_G` the composed CZ network of `g` and `V_sq` the
/// p-squeezed product at squeezing `ζ`.
pub fn gaussian_graph_state(g: &WeightedGraph, zeta: f64) -> Result<GaussianState> {
    if g.modulus().is_some() {
        return Err(Error::ModulusMismatch { expected: None, found: g.modulus() });
    }
    if !(zeta >= 0.0 && zeta.is_finite()) {
        return Err(Error::DimensionMismatch(format!("squeezing must be finite and non-negative, got {zeta}")));
    }
    GaussianState::p_squeezed(g.n(), zeta).apply(&graph_entangler(g)?)
}

/// `Var(n_j)` for every nullifier row of `g`.
pub fn nullifier_variances(gs: &GaussianState, g: &WeightedGraph) -> Result<Vec<f64>> {
    if gs.n() != g.n() {
        return Err(Error::DimensionMismatch(format!("{}-mode state vs {}-vertex graph", gs.n(), g.n())));
    }
    let nb = nullifier_basis(g)?;
    Ok(nb
        .matrix()
        .row_iter()
        .map(|row| {
            let c = row.transpose();
            gs.variance_of(&c)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn vacuum_and_squeezed_products() {
        let empty = WeightedGraph::real(3).unwrap();
        let vac = gaussian_graph_state(&empty, 0.0).unwrap();
        assert_eq!(vac, GaussianState::vacuum(3));
        let sq = gaussian_graph_state(&empty, 1.5).unwrap();
        assert_eq!(sq, GaussianState::p_squeezed(3, 1.5));
        assert!(sq.covariance().is_square());
        for (i, j) in [(0, 1), (0, 3), (2, 5)] {
            assert_eq!(sq.covariance()[(i, j)], 0.0);
        }
        assert_eq!(nullifier_variances(&vac, &empty).unwrap(), vec![0.5; 3]);
    }

    #[test]
    fn edge_nullifier_variance() {
        let edge = WeightedGraph::unweighted(2, None, &[(0, 1)]).unwrap();
        let gs = gaussian_graph_state(&edge, 1.0).unwrap();
        for v in nullifier_variances(&gs, &edge).unwrap() {
            assert!((v - (-2.0f64).exp() / 2.0).abs() < 1e-12);
        }
        assert!(gs.is_physical());
        assert!((gs.purity_det() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn variances_shrink_with_squeezing() {
        let g = WeightedGraph::unweighted(3, None, &[(0, 1), (1, 2)]).unwrap();
        let vars: Vec<f64> = [0.0, 1.0, 2.0]
            .iter()
            .map(|&z| nullifier_variances(&gaussian_graph_state(&g, z).unwrap(), &g).unwrap()[1])
            .collect();
        assert!(vars[0] > vars[1] && vars[1] > vars[2]);
    }

    #[test]
    fn homodyne_on_uncorrelated_vacuum() {
        let vac = GaussianState::vacuum(3);
        let (_, post) = vac.homodyne_measure::<ChaCha8Rng>(1, 0.0, HomodyneOutcome::Forced(0.3)).unwrap();
        assert_eq!(post, GaussianState::vacuum(2));
    }

    #[test]
    fn homodyne_conditioning_matches_schur_complement() {
        let edge = WeightedGraph::unweighted(2, None, &[(0, 1)]).unwrap();
        let zeta = 0.8;
        let gs = gaussian_graph_state(&edge, zeta).unwrap();
        let v = gs.covariance();
        // Measure q of mode 1 (index 1); keep (q_0, p_0) = indices (0, 2).
        let (_, post) = gs.homodyne_measure::<ChaCha8Rng>(1, 0.0, HomodyneOutcome::Forced(0.0)).unwrap();
        let idx = [0usize, 2];
        for a in 0..2 {
            for b in 0..2 {
                let want = v[(idx[a], idx[b])] - v[(idx[a], 1)] * v[(1, idx[b])] / v[(1, 1)];
                assert!((post.covariance()[(a, b)] - want).abs() < 1e-12);
            }
        }
        // the p-variance of the kept mode shrinks relative to its marginal
        assert!(post.covariance()[(1, 1)] < v[(2, 2)]);
        assert!(post.is_physical());
    }

    #[test]
    fn measuring_everything_leaves_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let edge = WeightedGraph::unweighted(2, None, &[(0, 1)]).unwrap();
        let gs = gaussian_graph_state(&edge, 0.5).unwrap();
        let (_, one) = gs.homodyne_measure(0, 0.4, HomodyneOutcome::Sample(&mut rng)).unwrap();
        assert!(one.is_physical());
        let (_, none) = one.homodyne_measure(0, 1.2, HomodyneOutcome::Sample(&mut rng)).unwrap();
        assert_eq!(none.n(), 0);
        assert!(gs.homodyne_measure::<ChaCha8Rng>(2, 0.0, HomodyneOutcome::Forced(0.0)).is_err());
    }

    #[test]
    fn forced_outcome_shifts_the_mean() {
        let edge = WeightedGraph::unweighted(2, None, &[(0, 1)]).unwrap();
        let gs = gaussian_graph_state(&edge, 1.0).unwrap();
        let (x, post) = gs.homodyne_measure::<ChaCha8Rng>(1, 0.0, HomodyneOutcome::Forced(1.0)).unwrap();
        assert_eq!(x, 1.0);
        // p_0 − q_1 is squeezed, so p_0 follows q_1 = 1.
        assert!((post.mean()[1] - 1.0).abs() < 0.05);
    }
}

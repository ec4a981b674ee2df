use nalgebra::DVector;
use serde::Serialize;

use super::nullifier::{nullifier_basis, recover_graph, NullifierBasis};
use super::symplectic::{symplectic_lc_unitary, SymplecticOp};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

#[derive(Clone, Debug, Serialize)]
pub struct Eq2Report {
    pub m: usize,
    pub r: usize,
    /// Per-entry distance between the graph recovered after `F_r† ⊗ F_m` and
    /// the graph with `m` and `r` exchanged.
    pub fourier_deviation: f64,
    /// Same, after `U_LC(r, −1) U_LC(m, +1)`.
    pub chain_deviation: f64,
    /// Same, after `exp(i p_r²/2) ⊗ exp(−i q_m²/2)` against the original graph.
    pub stabilizer_deviation: f64,
}

impl Eq2Report {
    pub fn max_residual(&self) -> f64 {
        self.fourier_deviation.max(self.chain_deviation).max(self.stabilizer_deviation)
    }
}

fn deviation_after(nb: &NullifierBasis, op: &SymplecticOp, want: &WeightedGraph) -> f64 {
    match nb.transform(op).and_then(|t| recover_graph(&t)) {
        Ok(rec) => rec.max_deviation(want),
        Err(_) => f64::INFINITY,
    }
}

/// Graph-level check of `F_r† ⊗ F_m` as the SWAP of a leaf `r` and its
/// neighbour `m` on an ideal CV graph state.
pub fn verify_eq2(g: &WeightedGraph, m: usize, r: usize) -> Result<Eq2Report> {
    if g.modulus().is_some() {
        return Err(Error::ModulusMismatch { expected: None, found: g.modulus() });
    }
    g.check_swap_precondition(m, r)?;
    let n = g.n();
    let nb = nullifier_basis(g)?;
    let swapped = g.transpose_vertices(m, r)?;

    let fourier = SymplecticOp::product(
        n,
        &[SymplecticOp::fourier(n, r, true)?, SymplecticOp::fourier(n, m, false)?],
    )?;
    let fourier_deviation = deviation_after(&nb, &fourier, &swapped);

    let after_m = g.local_complement(m, 1)?;
    let chain = symplectic_lc_unitary(&after_m, r, -1)?.then_after(&symplectic_lc_unitary(g, m, 1)?)?;
    let chain_deviation = deviation_after(&nb, &chain, &swapped);

    let stabilizer =
        SymplecticOp::product(n, &[SymplecticOp::p_shear(n, r, 1.0)?, SymplecticOp::q_shear(n, m, -1.0)?])?;
    let stabilizer_deviation = deviation_after(&nb, &stabilizer, g);

    Ok(Eq2Report { m, r, fourier_deviation, chain_deviation, stabilizer_deviation })
}

#[derive(Clone, Debug, Serialize)]
pub struct Eq4Report {
    /// `exp(i p_r²/2) exp(−i q_m²/2) CZ_rm` against `CZ_rm exp(i p_r²/2) exp(i p_r q_m)`.
    pub matrix_diff: f64,
    /// Component of the transported `p_r` outside the span of `{p_r}` under
    /// `exp(i p_r²/2) exp(i p_r q_m)`.
    pub residual_span_leak: f64,
    /// `U_LC(r,−1) U_LC(m,+1)` on the edge graph against
    /// `(F_r† ⊗ F_m)(exp(i p_r²/2) ⊗ exp(−i q_m²/2))`.
    pub chain_diff: f64,
}

impl Eq4Report {
    pub fn max_residual(&self) -> f64 {
        self.matrix_diff.max(self.residual_span_leak).max(self.chain_diff)
    }
}

/// Two-mode operator identities behind the qumode SWAP, with `r = 0`, `m = 1`.
pub fn verify_eq4_identity() -> Eq4Report {
    let (n, r, m) = (2, 0, 1);
    let op = |res: Result<SymplecticOp>| res.expect("two-mode operator");
    let p_shear_r = op(SymplecticOp::p_shear(n, r, 1.0));
    let q_shear_m = op(SymplecticOp::q_shear(n, m, -1.0));
    let cz = op(SymplecticOp::cz(n, r, m, 1.0));
    let coupling = op(SymplecticOp::pq_coupling(n, r, m, 1.0));

    let lhs = op(SymplecticOp::product(n, &[p_shear_r.clone(), q_shear_m.clone(), cz.clone()]));
    let rhs = op(SymplecticOp::product(n, &[cz, p_shear_r.clone(), coupling.clone()]));
    let matrix_diff = lhs.max_abs_diff(&rhs);

    let residual = op(p_shear_r.then_after(&coupling));
    let mut row = DVector::zeros(2 * n);
    row[n + r] = 1.0;
    let moved = residual.inverse().matrix().transpose() * &row;
    let along = moved[n + r];
    let mut leak = moved.clone();
    leak[n + r] -= along;
    let residual_span_leak = leak.amax();

    let edge = WeightedGraph::unweighted(2, None, &[(r, m)]).expect("edge graph");
    let after_m = edge.local_complement(m, 1).expect("valid vertex");
    let chain = op(op(symplectic_lc_unitary(&after_m, r, -1)).then_after(&op(symplectic_lc_unitary(&edge, m, 1))));
    let factored = op(SymplecticOp::product(
        n,
        &[
            op(SymplecticOp::fourier(n, r, true)),
            op(SymplecticOp::fourier(n, m, false)),
            p_shear_r,
            q_shear_m,
        ],
    ));
    let chain_diff = chain.max_abs_diff(&factored);

    Eq4Report { matrix_diff, residual_span_leak, chain_diff }
}

/// Per-entry distance between the graph recovered after the Gaussian LC
/// unitary and `local_complement(g, j, sign)`.
pub fn lc_commutation_deviation(g: &WeightedGraph, j: usize, sign: i32) -> Result<f64> {
    let nb = nullifier_basis(g)?;
    let op = symplectic_lc_unitary(g, j, sign)?;
    let want = g.local_complement(j, if sign >= 0 { 1 } else { -1 })?;
    Ok(deviation_after(&nb, &op, &want))
}

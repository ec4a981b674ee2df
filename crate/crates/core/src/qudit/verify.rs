//! Local-unitary realizations of the qubit and qudit SWAP-by-LC identities.

use std::f64::consts::FRAC_PI_4;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::gates::{self, Mat};
use super::{build_graph_state, QuditState};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Applies `exp(∓iπ/4 X_j) ⊗_{l ∈ N_j} exp(±iπ/4 Z_l)` with `N_j` read from
/// `g`. On `|G⟩` for an unweighted qubit graph this yields the graph state of
/// `LC(g, j, sign)` up to a global phase.
pub fn apply_lc_unitary(s: &QuditState, g: &WeightedGraph, j: usize, sign: i32) -> Result<QuditState> {
    if s.d() != 2 {
        return Err(Error::UnsupportedDimension(s.d()));
    }
    let sign = if sign >= 0 { 1.0 } else { -1.0 };
    let nb = g.neighborhood(j)?;
    let mut out = s.apply_matrix(j, &gates::exp_involution(-sign * FRAC_PI_4, &gates::pauli_x()))?;
    let zrot = gates::exp_involution(sign * FRAC_PI_4, &gates::pauli_z());
    for l in nb {
        out = out.apply_matrix(l, &zrot)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Eq1Report {
    pub m: usize,
    pub r: usize,
    /// `‖(H_r ⊗ H_m)|G⟩ − e^{iφ}|G_swapped⟩‖` at the optimal phase.
    pub residual: f64,
    /// Same comparison for `U_LC(r, −1) U_LC(m, +1)|G⟩`.
    pub chain_residual: f64,
}

impl Eq1Report {
    pub fn max_residual(&self) -> f64 {
        self.residual.max(self.chain_residual)
    }
}

/// Checks that `H_r ⊗ H_m` maps `|G⟩` to the graph state with `m` and `r`
/// exchanged, and that the two LC unitaries compose to the same state.
pub fn verify_eq1(g: &WeightedGraph, m: usize, r: usize) -> Result<Eq1Report> {
    if g.modulus() != Some(2) {
        return Err(Error::ModulusMismatch { expected: Some(2), found: g.modulus() });
    }
    g.check_swap_precondition(m, r)?;
    let state = build_graph_state(g, 2)?;
    let target = build_graph_state(&g.transpose_vertices(m, r)?, 2)?;
    let h = gates::hadamard();
    let swapped = state.apply_matrix(r, &h)?.apply_matrix(m, &h)?;
    let residual = swapped.phase_residual(&target);

    let after_m = g.local_complement(m, 1)?;
    let chained = apply_lc_unitary(&apply_lc_unitary(&state, g, m, 1)?, &after_m, r, -1)?;
    let chain_residual = chained.phase_residual(&target);
    Ok(Eq1Report { m, r, residual, chain_residual })
}

#[derive(Clone, Debug, Serialize)]
pub struct Eq3Report {
    /// Largest entry of `|LHS − RHS|` for the two-qubit operator identity.
    pub matrix_diff: f64,
    /// Both sides applied to `|+⟩_r ⊗ |ψ⟩_m` for seeded random `ψ`.
    pub product_state_diff: f64,
    /// `exp(−iπ/4 X_r) exp(iπ/4 Z_m)` acting on `CZ|++⟩`, against `CZ|++⟩`.
    pub stabilizer_residual: f64,
    /// Same, with `m` in a random state instead of `|+⟩`.
    pub stabilizer_residual_random_m: f64,
    /// `U_LC(r,−1) U_LC(m,+1)` against `(H_r ⊗ H_m)(exp(−iπ/4 X_r) ⊗ exp(iπ/4 Z_m))`,
    /// as operators up to global phase.
    pub chain_operator_diff: f64,
}

impl Eq3Report {
    pub fn max_residual(&self) -> f64 {
        [
            self.matrix_diff,
            self.product_state_diff,
            self.stabilizer_residual,
            self.chain_operator_diff,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Two-qubit operators on registers `(r, m)`, `r` the more significant.
fn on_r(a: &Mat) -> Mat {
    gates::kron(a, &gates::identity(2))
}

fn on_m(a: &Mat) -> Mat {
    gates::kron(&gates::identity(2), a)
}

fn cz_matrix() -> Mat {
    let mut m = gates::identity(4);
    m[(3, 3)] = -m[(3, 3)];
    m
}

/// `exp(−iπ/4 X_r) exp(iπ/4 Z_m) CZ = CZ exp(iπ/4 Z_m) exp(−iπ/4 X_r Z_m)`,
/// plus its consequences for states with `r` in `|+⟩`.
pub fn verify_eq3_identity() -> Eq3Report {
    let x = gates::pauli_x();
    let z = gates::pauli_z();
    let xr = gates::exp_involution(-FRAC_PI_4, &x);
    let zm = gates::exp_involution(FRAC_PI_4, &z);
    let cz = cz_matrix();
    let lhs = on_r(&xr) * on_m(&zm) * &cz;
    let xz = gates::exp_involution(-FRAC_PI_4, &gates::kron(&x, &z));
    let rhs = &cz * on_m(&zm) * xz;
    let matrix_diff = gates::max_abs_diff(&lhs, &rhs);

    let mut rng = ChaCha8Rng::seed_from_u64(0x3e3);
    let plus = QuditState::plus_state(1, 2).expect("one qubit");
    let mut product_state_diff: f64 = 0.0;
    let mut stabilizer_residual_random_m: f64 = 0.0;
    for _ in 0..8 {
        let psi = QuditState::random(1, 2, &mut rng).expect("one qubit");
        let v = plus.tensor(&psi).expect("same d");
        let a = apply_two(&lhs, &v);
        let b = apply_two(&rhs, &v);
        product_state_diff = product_state_diff.max(a.phase_residual(&b).max(max_entry_diff(&a, &b)));
        let graph_like = apply_two(&cz, &v);
        stabilizer_residual_random_m = stabilizer_residual_random_m.max(a.phase_residual(&graph_like));
    }

    let pp = QuditState::plus_state(2, 2).expect("two qubits");
    let czpp = apply_two(&cz, &pp);
    let stabilized = apply_two(&(on_r(&xr) * on_m(&zm)), &czpp);
    let stabilizer_residual = stabilized.phase_residual(&czpp);

    // Edge graph: N_m = {r}, and after LC(m) the neighbourhood of r is {m}.
    let lc_m = on_m(&gates::exp_involution(-FRAC_PI_4, &x)) * on_r(&gates::exp_involution(FRAC_PI_4, &z));
    let lc_r = on_r(&gates::exp_involution(FRAC_PI_4, &x)) * on_m(&gates::exp_involution(-FRAC_PI_4, &z));
    let chain = lc_r * lc_m;
    let h = gates::hadamard();
    let factored = gates::kron(&h, &h) * on_r(&xr) * on_m(&zm);
    let chain_operator_diff = gates::max_abs_diff_up_to_phase(&chain, &factored);

    Eq3Report {
        matrix_diff,
        product_state_diff,
        stabilizer_residual,
        stabilizer_residual_random_m,
        chain_operator_diff,
    }
}

fn apply_two(op: &Mat, s: &QuditState) -> QuditState {
    let v = nalgebra::DVector::from_column_slice(s.amplitudes());
    let w = op * v;
    QuditState::from_amplitudes(s.n(), s.d(), w.iter().copied().collect()).expect("unitary image")
}

fn max_entry_diff(a: &QuditState, b: &QuditState) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Placement of the Fourier transform and its adjoint on `(r, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FourierVariant {
    #[serde(rename = "F_r⊗F_m")]
    FrFm,
    #[serde(rename = "F_r†⊗F_m")]
    FrDagFm,
    #[serde(rename = "F_r⊗F_m†")]
    FrFmDag,
    #[serde(rename = "F_r†⊗F_m†")]
    FrDagFmDag,
}

impl FourierVariant {
    pub const ALL: [FourierVariant; 4] =
        [FourierVariant::FrFm, FourierVariant::FrDagFm, FourierVariant::FrFmDag, FourierVariant::FrDagFmDag];

    pub fn daggers(self) -> (bool, bool) {
        match self {
            FourierVariant::FrFm => (false, false),
            FourierVariant::FrDagFm => (true, false),
            FourierVariant::FrFmDag => (false, true),
            FourierVariant::FrDagFmDag => (true, true),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FourierVariant::FrFm => "F_r⊗F_m",
            FourierVariant::FrDagFm => "F_r†⊗F_m",
            FourierVariant::FrFmDag => "F_r⊗F_m†",
            FourierVariant::FrDagFmDag => "F_r†⊗F_m†",
        }
    }
}

impl std::fmt::Display for FourierVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuditSwapReport {
    pub d: usize,
    pub m: usize,
    pub r: usize,
    /// Residual for each placement, in [`FourierVariant::ALL`] order.
    pub residuals: Vec<(FourierVariant, f64)>,
    /// Placements with residual below 1e-10.
    pub passing: Vec<FourierVariant>,
}

impl QuditSwapReport {
    pub const TOLERANCE: f64 = 1e-10;

    /// Smallest residual over the four placements.
    pub fn best_residual(&self) -> f64 {
        self.residuals.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min)
    }
}

/// Tries all four dagger placements of the DFT on `(r, m)` and reports which
/// of them carry `|G⟩` to the graph state with `m` and `r` exchanged.
pub fn verify_qudit_swap(g: &WeightedGraph, m: usize, r: usize, d: usize) -> Result<QuditSwapReport> {
    if g.modulus() != Some(d as u32) {
        return Err(Error::ModulusMismatch { expected: Some(d as u32), found: g.modulus() });
    }
    g.check_swap_precondition(m, r)?;
    let state = build_graph_state(g, d)?;
    let target = build_graph_state(&g.transpose_vertices(m, r)?, d)?;
    let f = gates::dft(d);
    let fd = gates::dft_dagger(d);
    let mut residuals = Vec::with_capacity(4);
    for v in FourierVariant::ALL {
        let (dag_r, dag_m) = v.daggers();
        let out = state
            .apply_matrix(r, if dag_r { &fd } else { &f })?
            .apply_matrix(m, if dag_m { &fd } else { &f })?;
        residuals.push((v, out.phase_residual(&target)));
    }
    let passing = residuals
        .iter()
        .filter(|(_, res)| *res < QuditSwapReport::TOLERANCE)
        .map(|(v, _)| *v)
        .collect();
    Ok(QuditSwapReport { d, m, r, residuals, passing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_unweighted, leaf_pairs};

    fn q(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
        WeightedGraph::unweighted(n, Some(2), edges).unwrap()
    }

    #[test]
    fn lc_unitary_on_edge_is_trivial() {
        let g = q(2, &[(0, 1)]);
        let s = build_graph_state(&g, 2).unwrap();
        let out = apply_lc_unitary(&s, &g, 0, 1).unwrap();
        assert!(out.phase_residual(&s) < 1e-14);
    }

    #[test]
    fn lc_unitary_on_star_center() {
        let star = q(4, &[(0, 1), (0, 2), (0, 3)]);
        let s = build_graph_state(&star, 2).unwrap();
        let out = apply_lc_unitary(&s, &star, 0, 1).unwrap();
        let want = build_graph_state(&star.local_complement(0, 1).unwrap(), 2).unwrap();
        assert!(out.phase_residual(&want) < 1e-14);
    }

    #[test]
    fn lc_unitary_pair_is_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = q(3, &[(0, 1), (0, 2)]);
        let s = QuditState::random(3, 2, &mut rng).unwrap();
        let there = apply_lc_unitary(&s, &g, 0, 1).unwrap();
        let back = apply_lc_unitary(&there, &g, 0, -1).unwrap();
        assert!(back.phase_residual(&s) < 1e-14);
        let qutrit = QuditState::plus_state(2, 3).unwrap();
        assert_eq!(apply_lc_unitary(&qutrit, &g, 0, 1).unwrap_err(), Error::UnsupportedDimension(3));
    }

    #[test]
    fn lc_unitary_commutes_with_graph_lc() {
        for n in 1..=4 {
            for g in all_unweighted(n, Some(2)) {
                let s = build_graph_state(&g, 2).unwrap();
                for j in 0..n {
                    for sign in [1, -1] {
                        let out = apply_lc_unitary(&s, &g, j, sign).unwrap();
                        let want = build_graph_state(&g.local_complement(j, sign as i64).unwrap(), 2).unwrap();
                        assert!(out.phase_residual(&want) < 1e-12);
                        assert!((out.norm() - 1.0).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn eq1_examples() {
        for (g, m, r) in [
            (q(2, &[(0, 1)]), 0, 1),
            (q(3, &[(0, 1), (1, 2)]), 1, 0),
            (q(4, &[(0, 1), (0, 2), (0, 3)]), 0, 1),
        ] {
            let rep = verify_eq1(&g, m, r).unwrap();
            assert!(rep.max_residual() < 1e-10, "{rep:?}");
        }
        assert!(matches!(verify_eq1(&q(3, &[(0, 1), (1, 2)]), 0, 1), Err(Error::SwapPrecondition(_))));
    }

    #[test]
    fn eq3_identity() {
        let rep = verify_eq3_identity();
        assert!(rep.matrix_diff < 1e-12, "{rep:?}");
        assert!(rep.product_state_diff < 1e-12);
        assert!(rep.stabilizer_residual < 1e-12);
        assert!(rep.chain_operator_diff < 1e-12);
        // With r in |+⟩ the operator fixes CZ(|+⟩_r ⊗ |ψ⟩_m) for every ψ.
        assert!(rep.stabilizer_residual_random_m < 1e-12);
    }

    #[test]
    fn qudit_swap_variants() {
        let edge2 = q(2, &[(0, 1)]);
        let rep = verify_qudit_swap(&edge2, 0, 1, 2).unwrap();
        assert_eq!(rep.passing.len(), 4, "all placements coincide for d = 2");

        let edge3 = WeightedGraph::unweighted(2, Some(3), &[(0, 1)]).unwrap();
        let rep = verify_qudit_swap(&edge3, 0, 1, 3).unwrap();
        // an isolated edge is symmetric enough for two placements
        assert_eq!(rep.passing, vec![FourierVariant::FrDagFm, FourierVariant::FrFmDag]);

        let line3 = WeightedGraph::unweighted(3, Some(3), &[(0, 1), (1, 2)]).unwrap();
        let rep_line = verify_qudit_swap(&line3, 1, 0, 3).unwrap();
        assert_eq!(rep_line.passing, vec![FourierVariant::FrDagFm]);
    }

    #[test]
    fn eq1_exhaustive_small() {
        for n in 2..=4 {
            for g in all_unweighted(n, Some(2)) {
                for (m, r) in leaf_pairs(&g) {
                    assert!(verify_eq1(&g, m, r).unwrap().max_residual() < 1e-10);
                }
            }
        }
    }
}

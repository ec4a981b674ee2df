use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use seqmbqc::cv::{gaussian_graph_state, GaussianState, HomodyneOutcome, SymplecticOp};
use seqmbqc::graph::{random_leaf_graph, random_real_weighted, random_unweighted, Weight, WeightedGraph};
use seqmbqc::par::Exec;
use seqmbqc::protocol::{branch_determinism_residual, frame_apply, frame_remove, PauliFrame};
use seqmbqc::qudit::{gates, QuditState};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn graph(seed: u64, n: usize, modulus: Option<u32>) -> WeightedGraph {
    match modulus {
        None => random_real_weighted(n, &mut rng(seed)),
        Some(_) => random_unweighted(n, 0.5, modulus, &mut rng(seed)),
    }
}

fn modulus() -> impl Strategy<Value = Option<u32>> {
    prop_oneof![Just(None), Just(Some(2)), Just(Some(3)), Just(Some(5))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lc_is_undone_by_the_opposite_delta(seed: u64, n in 1usize..8, m in modulus(), l in 0usize..8, num in -5i64..=5, den in 1i64..=3) {
        let g = graph(seed, n, m);
        let l = l % n;
        let delta = if m.is_some() { Weight::from(num) } else { Weight::new(num, den) };
        let back = g.local_complement(l, delta).unwrap().local_complement(l, -delta).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn lc_only_touches_pairs_inside_the_neighbourhood(seed: u64, n in 1usize..8, m in modulus(), l in 0usize..8) {
        let g = graph(seed, n, m);
        let l = l % n;
        let h = g.local_complement(l, 1).unwrap();
        let nb = g.neighborhood(l).unwrap();
        prop_assert_eq!(h.neighborhood(l).unwrap(), nb.clone());
        for j in 0..n {
            for k in 0..n {
                prop_assert_eq!(h.weight(j, k), h.weight(k, j));
                if j != k && !(nb.contains(&j) && nb.contains(&k)) {
                    prop_assert_eq!(h.weight(j, k), g.weight(j, k));
                }
            }
        }
    }

    #[test]
    fn swap_by_lc_is_a_transposition(seed: u64, n in 2usize..9, d in prop_oneof![Just(2u32), Just(3), Just(7)]) {
        let (g, m, r) = random_leaf_graph(n, Some(d), &mut rng(seed));
        prop_assert_eq!(g.swap_by_lc(m, r).unwrap(), g.transpose_vertices(m, r).unwrap());
    }

    #[test]
    fn graph_json_round_trips(seed: u64, n in 1usize..7, m in modulus()) {
        let g = graph(seed, n, m);
        prop_assert_eq!(WeightedGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn gates_preserve_the_norm(seed: u64, n in 1usize..5, d in 2usize..5, t: f64, j in 0usize..5, k in 0usize..5, w in -3i64..4) {
        let mut r = rng(seed);
        let s = QuditState::random(n, d, &mut r).unwrap();
        let out = s.apply_matrix(j % n, &gates::dft(d)).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        if n >= 2 && j % n != k % n {
            let out = out.apply_cz(j % n, k % n, w).unwrap();
            prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        }
        if d == 2 {
            let out = s.apply_matrix(j % n, &gates::rz(t % 10.0)).unwrap();
            prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn symplectic_products_stay_symplectic(n in 1usize..5, ops in prop::collection::vec((0u8..5, 0usize..5, 0usize..5, -3.0f64..3.0), 0..8)) {
        let list: Vec<SymplecticOp> = ops
            .iter()
            .map(|&(kind, j, k, a)| {
                let (j, k) = (j % n, k % n);
                match kind {
                    0 => SymplecticOp::p_shear(n, j, a).unwrap(),
                    1 => SymplecticOp::q_shear(n, j, a).unwrap(),
                    2 => SymplecticOp::fourier(n, j, a < 0.0).unwrap(),
                    3 => SymplecticOp::rotation(n, j, a).unwrap(),
                    _ if j != k => SymplecticOp::cz(n, j, k, a).unwrap(),
                    _ => SymplecticOp::identity(n),
                }
            })
            .collect();
        let s = SymplecticOp::product(n, &list).unwrap();
        prop_assert!(s.symplectic_deviation() < 1e-9);
        let id = s.then_after(&s.inverse()).unwrap();
        prop_assert!(id.max_abs_diff(&SymplecticOp::identity(n)) < 1e-8);
    }

    #[test]
    fn gaussian_graph_states_stay_pure(seed: u64, n in 1usize..6, zeta in 0.0f64..2.0, phi in 0.0f64..3.2, x in -2.0f64..2.0) {
        let g = graph(seed, n, None);
        let gs = gaussian_graph_state(&g, zeta).unwrap();
        prop_assert!((gs.purity_det() - 1.0).abs() < 1e-8);
        prop_assert!(gs.is_physical());
        if n >= 2 {
            let (_, post) = gs.homodyne_measure::<ChaCha8Rng>(0, phi, HomodyneOutcome::Forced(x)).unwrap();
            prop_assert!((post.purity_det() - 1.0).abs() < 1e-6);
            prop_assert!(post.is_physical());
        }
        prop_assert!((GaussianState::vacuum(n).purity_det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frame_apply_and_remove_are_inverse(seed: u64, x in 0u8..2, z in 0u8..2) {
        let s = QuditState::random(1, 2, &mut rng(seed)).unwrap();
        let f = PauliFrame::new(x, z);
        let back = frame_remove(&frame_apply(&s, f).unwrap(), f).unwrap();
        prop_assert!(back.phase_residual(&s) < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wire_output_is_branch_independent(seed: u64, thetas in prop::collection::vec(-3.2f64..3.2, 0..=8)) {
        let s = QuditState::random(1, 2, &mut rng(seed)).unwrap();
        prop_assert!(branch_determinism_residual(&s, &thetas, Exec::Parallel).unwrap() < 1e-10);
    }
}

#[test]
fn amplitudes_are_normalized_on_construction() {
    let s = QuditState::from_amplitudes(1, 2, vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)]).unwrap();
    assert!((s.norm() - 1.0).abs() < 1e-15);
}

use num_traits::Zero;
use rand::Rng;

use super::{Weight, WeightedGraph};

/// Every unweighted graph on `n` labelled vertices, in bitmask order over
/// the upper-triangle pairs.
pub fn all_unweighted(n: usize, modulus: Option<u32>) -> impl Iterator<Item = WeightedGraph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| {
        let mut g = WeightedGraph::new(n, modulus).expect("n >= 1");
        for (bit, &(j, k)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                g.set_weight(j, k, Weight::from(1)).expect("valid pair");
            }
        }
        g
    })
}

/// All `(m, r)` such that `r` has degree one and its neighbour is `m`.
pub fn leaf_pairs(g: &WeightedGraph) -> Vec<(usize, usize)> {
    (0..g.n())
        .filter_map(|r| {
            let nb = g.neighborhood(r).ok()?;
            (nb.len() == 1).then(|| (nb[0], r))
        })
        .collect()
}

pub fn random_unweighted<R: Rng + ?Sized>(
    n: usize,
    edge_prob: f64,
    modulus: Option<u32>,
    rng: &mut R,
) -> WeightedGraph {
    let mut g = WeightedGraph::new(n, modulus).expect("n >= 1");
    for j in 0..n {
        for k in j + 1..n {
            if rng.random_bool(edge_prob) {
                g.set_weight(j, k, Weight::from(1)).expect("valid pair");
            }
        }
    }
    g
}

/// Random unweighted graph on `n >= 2` vertices in which `r` has exactly one
/// neighbour `m`. Returns `(g, m, r)`.
pub fn random_leaf_graph<R: Rng + ?Sized>(
    n: usize,
    modulus: Option<u32>,
    rng: &mut R,
) -> (WeightedGraph, usize, usize) {
    assert!(n >= 2, "a leaf needs a neighbour");
    let mut g = random_unweighted(n, 0.5, modulus, rng);
    let r = rng.random_range(0..n);
    let m = (r + rng.random_range(1..n)) % n;
    for k in 0..n {
        if k != r {
            g.set_weight(r, k, Weight::zero()).expect("valid pair");
        }
    }
    g.set_weight(r, m, Weight::from(1)).expect("valid pair");
    (g, m, r)
}

/// Random graph with exact rational weights `p/q`, `0 < |p| <= 6`, `1 <= q <= 4`,
/// each pair present with probability one half.
pub fn random_real_weighted<R: Rng + ?Sized>(n: usize, rng: &mut R) -> WeightedGraph {
    let mut g = WeightedGraph::real(n).expect("n >= 1");
    for j in 0..n {
        for k in j + 1..n {
            if rng.random_bool(0.5) {
                g.set_weight(j, k, random_weight(rng)).expect("valid pair");
            }
        }
    }
    g
}

/// Random real-weighted graph on `n >= 2` vertices plus a vertex `j` whose
/// incident edges all share one weight, `+1` or `-1`; other edges are random
/// rationals. `j` has at least one neighbour.
pub fn random_unit_incident_graph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (WeightedGraph, usize) {
    assert!(n >= 2, "j needs a neighbour");
    let mut g = random_real_weighted(n, rng);
    let j = rng.random_range(0..n);
    let w = Weight::from(if rng.random_bool(0.5) { 1 } else { -1 });
    let forced = (j + rng.random_range(1..n)) % n;
    for k in (0..n).filter(|&k| k != j) {
        let on = k == forced || rng.random_bool(0.5);
        g.set_weight(j, k, if on { w } else { Weight::zero() }).expect("valid pair");
    }
    (g, j)
}

pub(crate) fn random_weight<R: Rng + ?Sized>(rng: &mut R) -> Weight {
    let mut p = rng.random_range(1..=6i64);
    if rng.random_bool(0.5) {
        p = -p;
    }
    Weight::new(p, rng.random_range(1..=4i64))
}

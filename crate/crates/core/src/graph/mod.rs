//! Exact weighted graphs and local complementation.
//!
//! A [`WeightedGraph`] stores a dense symmetric adjacency matrix with exact
//! rational weights. Qubit graphs carry modulus 2, qudit graphs modulus `d`
//! (weights live in `0..d`), and continuous-variable graphs carry no modulus.

mod enumerate;
mod io;

pub use enumerate::{
    all_unweighted, leaf_pairs, random_leaf_graph, random_real_weighted, random_unit_incident_graph,
    random_unweighted,
};
pub use io::{GraphFile, WeightRepr};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Weight = num_rational::Rational64;

/// Parameters of a single local complementation: the vertex and the weight
/// added to every pair of its neighbours.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LcParams {
    pub vertex: usize,
    pub delta: Weight,
}

impl LcParams {
    pub fn new(vertex: usize, delta: impl Into<Weight>) -> Self {
        Self { vertex, delta: delta.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    n: usize,
    modulus: Option<u32>,
    weights: Vec<Weight>,
}

impl WeightedGraph {
    /// Empty graph on `n` vertices.
    pub fn new(n: usize, modulus: Option<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be at least 1".into()));
        }
        if let Some(d) = modulus {
            if d < 2 {
                return Err(Error::InvalidGraph(format!("modulus must be at least 2, got {d}")));
            }
        }
        Ok(Self { n, modulus, weights: vec![Weight::zero(); n * n] })
    }

    /// Empty qubit graph (modulus 2).
    pub fn qubit(n: usize) -> Result<Self> {
        Self::new(n, Some(2))
    }

    /// Empty graph with real (rational) weights, as used for qumodes.
    pub fn real(n: usize) -> Result<Self> {
        Self::new(n, None)
    }

    /// Builds a graph from `(j, k, w)` triples. Repeated pairs are rejected.
    pub fn from_edges<W: Into<Weight> + Copy>(
        n: usize,
        modulus: Option<u32>,
        edges: &[(usize, usize, W)],
    ) -> Result<Self> {
        let mut g = Self::new(n, modulus)?;
        let mut seen = std::collections::HashSet::new();
        for &(j, k, w) in edges {
            let key = (j.min(k), j.max(k));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!("duplicate edge {{{}, {}}}", key.0, key.1)));
            }
            g.set_weight(j, k, w.into())?;
        }
        Ok(g)
    }

    /// Unweighted graph from an edge list.
    pub fn unweighted(n: usize, modulus: Option<u32>, edges: &[(usize, usize)]) -> Result<Self> {
        let triples: Vec<(usize, usize, i64)> = edges.iter().map(|&(j, k)| (j, k, 1)).collect();
        Self::from_edges(n, modulus, &triples)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Option<u32> {
        self.modulus
    }

    #[inline]
    pub fn weight(&self, j: usize, k: usize) -> Weight {
        self.weights[j * self.n + k]
    }

    pub fn set_weight(&mut self, j: usize, k: usize, w: Weight) -> Result<()> {
        self.check_vertex(j)?;
        self.check_vertex(k)?;
        if j == k {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {j}")));
        }
        let w = self.reduce(w)?;
        self.weights[j * self.n + k] = w;
        self.weights[k * self.n + j] = w;
        Ok(())
    }

    fn reduce(&self, w: Weight) -> Result<Weight> {
        match self.modulus {
            None => Ok(w),
            Some(d) => {
                if !w.is_integer() {
                    return Err(Error::NonIntegerWeight(w.to_string()));
                }
                Ok(Weight::from_integer(w.to_integer().rem_euclid(d as i64)))
            }
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Nonzero edges as `(j, k, w)` with `j < k`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Weight)> + '_ {
        (0..self.n).flat_map(move |j| {
            (j + 1..self.n).filter_map(move |k| {
                let w = self.weight(j, k);
                (!w.is_zero()).then_some((j, k, w))
            })
        })
    }

    /// Vertices sharing a nonzero-weight edge with `l`, in increasing order.
    pub fn neighborhood(&self, l: usize) -> Result<Vec<usize>> {
        self.check_vertex(l)?;
        Ok((0..self.n).filter(|&k| k != l && !self.weight(l, k).is_zero()).collect())
    }

    pub fn degree(&self, l: usize) -> Result<usize> {
        self.neighborhood(l).map(|nb| nb.len())
    }

    /// True when every nonzero weight equals one.
    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|w| w.is_zero() || w.is_one())
    }

    /// Adds `delta` to the weight of every unordered pair inside the
    /// neighbourhood of `l` (taken in `self`). Nothing else changes.
    pub fn local_complement(&self, l: usize, delta: impl Into<Weight>) -> Result<Self> {
        let delta = delta.into();
        let nb = self.neighborhood(l)?;
        let delta = self.reduce(delta)?;
        let mut out = self.clone();
        if delta.is_zero() {
            return Ok(out);
        }
        for (a, &j) in nb.iter().enumerate() {
            for &k in &nb[a + 1..] {
                let w = out.reduce(self.weight(j, k) + delta)?;
                out.weights[j * self.n + k] = w;
                out.weights[k * self.n + j] = w;
            }
        }
        Ok(out)
    }

    pub fn apply_lc(&self, lc: LcParams) -> Result<Self> {
        self.local_complement(lc.vertex, lc.delta)
    }

    /// `LC(m, +1)` followed by `LC(r, -1)`. For an unweighted graph in which
    /// `m` is the only neighbour of `r` this exchanges the labels of `m` and `r`.
    pub fn swap_by_lc(&self, m: usize, r: usize) -> Result<Self> {
        self.check_swap_precondition(m, r)?;
        self.local_complement(m, 1)?.local_complement(r, -1)
    }

    pub(crate) fn check_swap_precondition(&self, m: usize, r: usize) -> Result<()> {
        self.check_vertex(m)?;
        self.check_vertex(r)?;
        if !self.is_unweighted() {
            return Err(Error::SwapPrecondition("graph is not unweighted".into()));
        }
        let nb = self.neighborhood(r)?;
        if nb.len() != 1 {
            return Err(Error::SwapPrecondition(format!(
                "vertex {r} has degree {}, expected 1",
                nb.len()
            )));
        }
        if nb[0] != m {
            return Err(Error::SwapPrecondition(format!(
                "the only neighbour of {r} is {}, not {m}",
                nb[0]
            )));
        }
        Ok(())
    }

    /// Relabels vertices: vertex `j` of `self` becomes vertex `pi[j]`.
    pub fn permute(&self, pi: &[usize]) -> Result<Self> {
        if pi.len() != self.n {
            return Err(Error::InvalidPermutation(format!(
                "length {} does not match vertex count {}",
                pi.len(),
                self.n
            )));
        }
        let mut hit = vec![false; self.n];
        for &p in pi {
            if p >= self.n || std::mem::replace(&mut hit[p], true) {
                return Err(Error::InvalidPermutation(format!("{pi:?} is not a bijection")));
            }
        }
        let mut out = Self { weights: vec![Weight::zero(); self.n * self.n], ..self.clone() };
        for j in 0..self.n {
            for k in 0..self.n {
                out.weights[pi[j] * self.n + pi[k]] = self.weight(j, k);
            }
        }
        Ok(out)
    }

    /// Exchanges the labels `a` and `b`.
    pub fn transpose_vertices(&self, a: usize, b: usize) -> Result<Self> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        let mut pi: Vec<usize> = (0..self.n).collect();
        pi.swap(a, b);
        self.permute(&pi)
    }

    /// Removes vertex `v`; higher labels shift down by one.
    pub fn delete_vertex(&self, v: usize) -> Result<Self> {
        self.check_vertex(v)?;
        if self.n == 1 {
            return Err(Error::InvalidGraph("cannot delete the last vertex".into()));
        }
        let keep: Vec<usize> = (0..self.n).filter(|&k| k != v).collect();
        let m = keep.len();
        let mut weights = vec![Weight::zero(); m * m];
        for (a, &j) in keep.iter().enumerate() {
            for (b, &k) in keep.iter().enumerate() {
                weights[a * m + b] = self.weight(j, k);
            }
        }
        Ok(Self { n: m, modulus: self.modulus, weights })
    }

    /// Weight matrix as `f64`, row-major.
    pub fn to_f64(&self) -> Vec<f64> {
        self.weights.iter().map(|w| *w.numer() as f64 / *w.denom() as f64).collect()
    }
}

/// Same vertex count, same modulus, identical weights after reduction.
pub fn graphs_equal(a: &WeightedGraph, b: &WeightedGraph) -> bool {
    if a.n != b.n || a.modulus != b.modulus {
        return false;
    }
    match a.modulus {
        None => a.weights == b.weights,
        Some(_) => a
            .weights
            .iter()
            .zip(&b.weights)
            .all(|(x, y)| a.reduce(*x).ok() == a.reduce(*y).ok()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> WeightedGraph {
        WeightedGraph::unweighted(3, Some(2), &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn neighborhoods() {
        let g = path3();
        assert_eq!(g.neighborhood(1).unwrap(), vec![0, 2]);
        assert_eq!(g.neighborhood(0).unwrap(), vec![1]);
        let lone = WeightedGraph::qubit(1).unwrap();
        assert!(lone.neighborhood(0).unwrap().is_empty());
        assert_eq!(g.neighborhood(3), Err(Error::VertexOutOfRange { vertex: 3, n: 3 }));
    }

    #[test]
    fn lc_on_star_center_closes_triangle() {
        // m = 0, r1 = 1, r2 = 2
        let star = WeightedGraph::unweighted(3, Some(2), &[(0, 1), (0, 2)]).unwrap();
        let tri = WeightedGraph::unweighted(3, Some(2), &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(star.local_complement(0, 1).unwrap(), tri);
    }

    #[test]
    fn lc_on_triangle_leaf_gives_line() {
        let tri = WeightedGraph::unweighted(3, Some(2), &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let line = WeightedGraph::unweighted(3, Some(2), &[(1, 2), (2, 0)]).unwrap();
        assert_eq!(tri.local_complement(2, -1).unwrap(), line);
    }

    #[test]
    fn zero_delta_is_identity() {
        let g = WeightedGraph::from_edges(4, None, &[(0, 1, Weight::new(3, 2)), (1, 2, Weight::from(2)), (1, 3, Weight::from(-1))])
            .unwrap();
        assert_eq!(g.local_complement(1, 0).unwrap(), g);
    }

    #[test]
    fn weighted_lc_produces_weight_two_edges() {
        // Real weights: LC(0, +1) on a star whose leaves already share an edge.
        let g = WeightedGraph::unweighted(3, None, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let h = g.local_complement(0, 1).unwrap();
        assert_eq!(h.weight(1, 2), Weight::from(2));
        assert_eq!(h.weight(0, 1), Weight::from(1));
        let back = h.local_complement(0, -1).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn swap_examples() {
        let edge = WeightedGraph::unweighted(2, Some(2), &[(0, 1)]).unwrap();
        assert_eq!(edge.swap_by_lc(0, 1).unwrap(), edge);

        // star center m=0, leaves r=1, a=2, b=3
        let star = WeightedGraph::unweighted(4, Some(2), &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let star_r = WeightedGraph::unweighted(4, Some(2), &[(1, 0), (1, 2), (1, 3)]).unwrap();
        assert_eq!(star.swap_by_lc(0, 1).unwrap(), star_r);
        assert_eq!(star.transpose_vertices(0, 1).unwrap(), star_r);

        // line r=0 – m=1 – a=2  ->  m – r – a
        let line = WeightedGraph::unweighted(3, None, &[(0, 1), (1, 2)]).unwrap();
        let want = WeightedGraph::unweighted(3, None, &[(1, 0), (0, 2)]).unwrap();
        assert_eq!(line.swap_by_lc(1, 0).unwrap(), want);
    }

    #[test]
    fn swap_preconditions() {
        let line = path3();
        assert!(matches!(line.swap_by_lc(0, 1), Err(Error::SwapPrecondition(_))));
        let tri = WeightedGraph::unweighted(3, Some(2), &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert!(matches!(tri.swap_by_lc(0, 1), Err(Error::SwapPrecondition(_))));
        let weighted = WeightedGraph::from_edges(2, None, &[(0, 1, 2)]).unwrap();
        let err = weighted.swap_by_lc(0, 1).unwrap_err();
        assert!(err.to_string().contains("unweighted"));
        let p4 = WeightedGraph::unweighted(4, Some(2), &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let err = p4.swap_by_lc(2, 0).unwrap_err();
        assert!(err.to_string().contains("not 2"));
    }

    #[test]
    fn permutations() {
        let g = path3();
        assert_eq!(g.permute(&[0, 1, 2]).unwrap(), g);
        let edge = WeightedGraph::unweighted(2, Some(2), &[(0, 1)]).unwrap();
        assert_eq!(edge.permute(&[1, 0]).unwrap(), edge);
        let relabeled = WeightedGraph::unweighted(3, Some(2), &[(0, 2), (2, 1)]).unwrap();
        assert_eq!(g.permute(&[0, 2, 1]).unwrap(), relabeled);
        assert!(matches!(g.permute(&[0, 0, 1]), Err(Error::InvalidPermutation(_))));
        assert!(matches!(g.permute(&[0, 1]), Err(Error::InvalidPermutation(_))));
    }

    #[test]
    fn equality_modulo() {
        let g = path3();
        assert!(graphs_equal(&g, &g));
        let a = WeightedGraph::from_edges(2, Some(2), &[(0, 1, 2)]).unwrap();
        let b = WeightedGraph::qubit(2).unwrap();
        assert!(graphs_equal(&a, &b));
        let star = WeightedGraph::unweighted(3, Some(2), &[(1, 0), (1, 2)]).unwrap();
        let other = WeightedGraph::unweighted(3, Some(2), &[(0, 1), (0, 2)]).unwrap();
        assert!(!graphs_equal(&star, &other));
        let real = WeightedGraph::unweighted(3, None, &[(0, 1), (1, 2)]).unwrap();
        assert!(!graphs_equal(&g, &real));
    }

    #[test]
    fn delete_vertex_shifts_labels() {
        let g = WeightedGraph::unweighted(3, Some(2), &[(0, 2)]).unwrap();
        let h = g.delete_vertex(1).unwrap();
        assert_eq!(h, WeightedGraph::unweighted(2, Some(2), &[(0, 1)]).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(WeightedGraph::new(0, None).is_err());
        assert!(WeightedGraph::from_edges(2, Some(3), &[(0, 1, Weight::new(1, 2))]).is_err());
        assert!(WeightedGraph::unweighted(2, None, &[(0, 1), (1, 0)]).is_err());
        assert!(WeightedGraph::unweighted(2, None, &[(0, 0)]).is_err());
    }
}

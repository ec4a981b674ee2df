//! JSON graph files: `{"n": 3, "modulus": 2, "edges": [[0, 1, 1], [1, 2, "3/2"]]}`.
//!
//! Each edge is `[j, k, w]` with `j < k`; `w` is an integer or a `"p/q"`
//! string. Unlisted pairs have weight zero and repeated pairs are rejected.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Weight, WeightedGraph};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightRepr {
    Int(i64),
    Ratio(String),
}

impl WeightRepr {
    fn to_weight(&self) -> Result<Weight> {
        match self {
            WeightRepr::Int(v) => Ok(Weight::from(*v)),
            WeightRepr::Ratio(s) => s
                .trim()
                .parse::<Weight>()
                .map_err(|_| Error::GraphFormat(format!("cannot parse weight {s:?}"))),
        }
    }

    fn from_weight(w: Weight) -> Self {
        if w.is_integer() {
            WeightRepr::Int(w.to_integer())
        } else {
            WeightRepr::Ratio(format!("{}/{}", w.numer(), w.denom()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    pub modulus: Option<u32>,
    pub edges: Vec<(usize, usize, WeightRepr)>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::GraphFormat(e.to_string()))
    }

    pub fn to_graph(&self) -> Result<WeightedGraph> {
        let mut g = WeightedGraph::new(self.n, self.modulus)?;
        let mut seen = std::collections::HashSet::new();
        for (j, k, w) in &self.edges {
            if j >= k {
                return Err(Error::GraphFormat(format!("edge [{j}, {k}] must have j < k")));
            }
            if !seen.insert((*j, *k)) {
                return Err(Error::GraphFormat(format!("duplicate edge [{j}, {k}]")));
            }
            g.set_weight(*j, *k, w.to_weight()?)?;
        }
        Ok(g)
    }

    pub fn from_graph(g: &WeightedGraph) -> Self {
        Self {
            n: g.n(),
            modulus: g.modulus(),
            edges: g
                .edges()
                .filter(|(_, _, w)| !w.is_zero())
                .map(|(j, k, w)| (j, k, WeightRepr::from_weight(w)))
                .collect(),
        }
    }
}

impl WeightedGraph {
    pub fn from_json(text: &str) -> Result<Self> {
        GraphFile::parse(text)?.to_graph()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphFile::from_graph(self)).expect("graph file serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_and_rational_weights() {
        let g = WeightedGraph::from_json(r#"{"n": 3, "modulus": null, "edges": [[0, 1, 1], [1, 2, "-3/2"]]}"#)
            .unwrap();
        assert_eq!(g.weight(1, 0), Weight::from(1));
        assert_eq!(g.weight(2, 1), Weight::new(-3, 2));
        assert_eq!(g.weight(0, 2), Weight::from(0));
        assert_eq!(WeightedGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn modular_weights_reduce() {
        let g = WeightedGraph::from_json(r#"{"n": 2, "modulus": 3, "edges": [[0, 1, 5]]}"#).unwrap();
        assert_eq!(g.weight(0, 1), Weight::from(2));
    }

    #[test]
    fn rejects_malformed_files() {
        for bad in [
            r#"{"n": 2, "modulus": null, "edges": [[0, 1, 1], [0, 1, 2]]}"#,
            r#"{"n": 2, "modulus": null, "edges": [[1, 0, 1]]}"#,
            r#"{"n": 2, "modulus": null, "edges": [[0, 2, 1]]}"#,
            r#"{"n": 2, "modulus": null, "edges": [[0, 1, "x"]]}"#,
            r#"{"n": 2, "modulus": 2, "edges": [[0, 1, "1/2"]]}"#,
            r#"{"n": 2, "modulus": null, "edges": [[0, 1, 0.5]]}"#,
            r#"{"n": 0, "modulus": null, "edges": []}"#,
            r#"{"n": 2, "edges": []"#,
        ] {
            assert!(WeightedGraph::from_json(bad).is_err(), "{bad}");
        }
    }
}

//! Shortest paths and exact minimum-weight perfect matching.

pub mod blossom;
pub mod graph;

pub use graph::{all_pairs_min_paths, MinPaths, ShortestPaths, WeightedGraph};

use crate::error::{Error, Result};

/// A set of disjoint vertex pairs, each stored as (smaller, larger) and the
/// list sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Total weight under a dense symmetric weight table.
    pub fn weight(&self, weights: &[Vec<f64>]) -> f64 {
        self.pairs.iter().map(|&(i, j)| weights[i][j]).sum()
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(i, j)| {
            if i == v {
                Some(j)
            } else if j == v {
                Some(i)
            } else {
                None
            }
        })
    }
}

/// Resolution of the integer weights handed to the blossom solver: the
/// largest finite weight maps to 2⁴⁰.
const INTEGER_SCALE: f64 = (1u64 << 40) as f64;

/// Exact minimum-weight perfect matching of the complete graph whose weights
/// are `weights[i][j]` (symmetric; infinite entries mean "no edge").
pub fn min_weight_perfect_matching(weights: &[Vec<f64>]) -> Result<Matching> {
    let n = weights.len();
    if n % 2 != 0 {
        return Err(Error::Invalid(format!(
            "perfect matching needs an even vertex count, got {n}"
        )));
    }
    if weights.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("weight table must be square".into()));
    }
    if n == 0 {
        return Ok(Matching::default());
    }
    let mut max_w = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let w = weights[i][j];
            if w.is_nan() || w < 0.0 {
                return Err(Error::Domain(format!("invalid weight {w} on ({i}, {j})")));
            }
            if w.is_finite() {
                max_w = max_w.max(w);
            }
        }
    }
    let scale = if max_w > 0.0 {
        INTEGER_SCALE / max_w
    } else {
        1.0
    };
    let top = (max_w * scale).round() as i64 + 1;
    // Maximum-weight maximum-cardinality matching on C − w minimises Σw over
    // perfect matchings; weights are doubled to keep the dual updates integral.
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let w = weights[i][j];
            if w.is_finite() {
                edges.push((i, j, 2 * (top - (w * scale).round() as i64)));
            }
        }
    }
    let mate = blossom::max_weight_matching(&edges, true);
    if mate.len() < n || mate.iter().any(|&m| m < 0) {
        return Err(Error::Invalid("graph has no perfect matching".into()));
    }
    let pairs = (0..n)
        .filter(|&i| (mate[i] as usize) > i)
        .map(|i| (i, mate[i] as usize))
        .collect();
    Ok(Matching { pairs })
}

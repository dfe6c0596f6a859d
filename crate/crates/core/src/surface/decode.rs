//! Matching-based correction and logical-error classification.

use serde::{Deserialize, Serialize};

use super::graph::{DecodingGraph, EdgeKind, SpaceTimeGraph};
use super::sim::{integer_total, NoiseState};
use crate::error::{Error, Result};
use crate::matching::{min_weight_perfect_matching, ShortestPaths};
use crate::{Pauli, SQRT_PI};

/// Outcome of one Monte Carlo trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub label: Pauli,
    /// Σ_k ξ_q^(D_k)/√π after correction.
    pub total_q: i64,
    /// Σ_k ξ_p^(D_k)/√π after correction.
    pub total_p: i64,
}

/// Relative tolerance separating genuinely shorter pair paths from
/// rounding-level ties with the route through the boundary.
const RADIUS_SLACK: f64 = 1e-9;

/// Matches the highlighted vertices of one graph and returns, for each data
/// qubit (0-based), whether it needs a √π correction.
pub fn correction_for(g: &DecodingGraph, data_count: usize) -> Result<Vec<bool>> {
    let mut flip = vec![false; data_count];
    let hl = &g.highlighted;
    let h = hl.len();
    if h == 0 {
        return Ok(flip);
    }
    let mut targets = hl.clone();
    if !targets.contains(&g.boundary) {
        targets.push(g.boundary);
    }
    // Distances to the boundary bound every useful search: a pair (i, j)
    // only matters if d(i, j) < d(i, B) + d(j, B).
    let from_boundary = g.graph.shortest_paths(g.boundary, None);
    let to_boundary: Vec<f64> = hl.iter().map(|&v| from_boundary.distance(v)).collect();
    let far = to_boundary.iter().copied().fold(0.0, f64::max);
    // Path sums differ by rounding depending on the direction they are
    // accumulated in, so the search radius gets a little slack. A pair path
    // through the boundary is never shorter than both boundary routes, so
    // the searches do not continue past the boundary vertex.
    let trees: Vec<ShortestPaths> = hl
        .iter()
        .zip(&to_boundary)
        .map(|(&v, &db)| {
            g.graph.shortest_paths_excluding(
                v,
                Some(&targets),
                (db + far) * (1.0 + RADIUS_SLACK),
                Some(g.boundary),
            )
        })
        .collect();

    let mut pair = vec![vec![f64::INFINITY; h]; h];
    for i in 0..h {
        for j in (i + 1)..h {
            let dij = trees[i].distance(hl[j]);
            // A pair that costs at least as much as sending both ends to the
            // boundary can never improve a matching; leaving it out keeps the
            // solver's edge count small. Near-ties go to the boundary route,
            // which costs the same.
            if dij < (to_boundary[i] + to_boundary[j]) * (1.0 - RADIUS_SLACK) {
                pair[i][j] = dij;
                pair[j][i] = dij;
            }
        }
    }

    // The boundary absorbs any number of vertices, so groups of highlighted
    // vertices with no pair edge between them are matched independently.
    for component in pair_components(&pair) {
        let s = component.len();
        // Local vertices 0..s are the highlighted ones; s..2s are their
        // private boundary copies, joined to each other at zero cost.
        let mut w = vec![vec![f64::INFINITY; 2 * s]; 2 * s];
        for (a, &i) in component.iter().enumerate() {
            for (b, &j) in component.iter().enumerate().skip(a + 1) {
                w[a][b] = pair[i][j];
                w[b][a] = pair[i][j];
                w[s + a][s + b] = 0.0;
                w[s + b][s + a] = 0.0;
            }
            let db = trees[i].distance(g.boundary);
            w[a][s + a] = db;
            w[s + a][a] = db;
        }
        let matching = min_weight_perfect_matching(&w)?;
        for &(a, b) in &matching.pairs {
            let path = if b < s {
                g.graph
                    .path_to_source(hl[component[a]], &trees[component[b]])
            } else if b == s + a {
                g.graph.path_to_source(g.boundary, &trees[component[a]])
            } else {
                continue;
            };
            let path =
                path.ok_or_else(|| Error::Numeric("matched pair has no connecting path".into()))?;
            for e in path.windows(2) {
                let key = (e[0].min(e[1]), e[0].max(e[1]));
                if let Some(EdgeKind::Horizontal { data, .. }) = g.provenance.get(&key) {
                    flip[*data] ^= true;
                }
            }
        }
    }
    Ok(flip)
}

/// Connected components of the graph whose finite entries of `pair` are
/// edges, each as a sorted list of vertex indices.
fn pair_components(pair: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let h = pair.len();
    let mut seen = vec![false; h];
    let mut components = Vec::new();
    for start in 0..h {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut members = Vec::new();
        while let Some(v) = stack.pop() {
            members.push(v);
            for u in 0..h {
                if !seen[u] && pair[v][u].is_finite() {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

/// Applies the matching corrections to the data shifts and classifies the
/// residual logical error from the parities of the total shifts.
pub fn decode_and_score(graph: &SpaceTimeGraph, state: &mut NoiseState) -> Result<TrialResult> {
    let n = state.xi_q_d.len();
    let fz = correction_for(&graph.z, n)?;
    let fx = correction_for(&graph.x, n)?;
    for i in 0..n {
        if fz[i] {
            state.xi_q_d[i] += SQRT_PI;
        }
        if fx[i] {
            state.xi_p_d[i] += SQRT_PI;
        }
    }
    let total_q = integer_total(&state.xi_q_d).ok_or_else(|| {
        Error::Numeric("position total is not an integer; final round was not ideal".into())
    })?;
    let total_p = integer_total(&state.xi_p_d).ok_or_else(|| {
        Error::Numeric("momentum total is not an integer; final round was not ideal".into())
    })?;
    Ok(TrialResult {
        label: Pauli::from_parities(total_q.rem_euclid(2) == 1, total_p.rem_euclid(2) == 1),
        total_q,
        total_p,
    })
}

//! Space-time syndrome graphs with analog-information edge weights.
//!
//! Each graph has d+1 layers (one per round) of check vertices plus a single
//! boundary vertex that stands for all boundary vertices merged together —
//! boundary-to-boundary edges have weight zero, so merging them changes no
//! path length.
//!
//! * Horizontal edges in layer r join the checks that share a data qubit
//!   (or a check and the boundary) and stand for a Pauli error left by that
//!   data qubit's GKP correction in round r.
//! * Vertical edges join check l in layers r and r+1 (r ≤ d) and stand for
//!   a wrong syndrome readout in round r.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::layout::Layout;
use super::sigma::{horizontal_coeffs, vertical_coeffs, CheckType};
use super::sim::RoundRecord;
use crate::error::{Error, Result};
use crate::matching::WeightedGraph;
use crate::noise::{ln_conditional_pauli_prob, p_err, NoiseParams};

/// Weight assigned to edges whose error probability is zero or underflows.
pub const WEIGHT_CAP: f64 = 1.0e4;

/// Where an edge of the space-time graph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Pauli error on data qubit `data` (0-based) in round `round` (1-based).
    Horizontal { round: usize, data: usize },
    /// Wrong readout of check `check` (0-based) in round `round` (1-based).
    Vertical { round: usize, check: usize },
}

/// One syndrome graph (Z-type or X-type).
#[derive(Debug, Clone)]
pub struct DecodingGraph {
    pub kind: CheckType,
    pub graph: WeightedGraph,
    /// Provenance of the (lightest) edge between each adjacent vertex pair,
    /// keyed by (smaller, larger) vertex index.
    pub provenance: HashMap<(usize, usize), EdgeKind>,
    /// Highlighted vertices, ascending; includes the boundary vertex when it
    /// was needed to make the count even.
    pub highlighted: Vec<usize>,
    pub boundary: usize,
    pub checks: usize,
}

impl DecodingGraph {
    /// Vertex index of check `l` (0-based) in round `r` (1-based).
    pub fn vertex(&self, r: usize, l: usize) -> usize {
        (r - 1) * self.checks + l
    }

    fn add(&mut self, u: usize, v: usize, w: f64, kind: EdgeKind) -> Result<()> {
        let key = (u.min(v), u.max(v));
        let lighter = match self.graph.weight(u, v) {
            Some(old) => w < old,
            None => true,
        };
        self.graph.add_edge(u, v, w)?;
        if lighter {
            self.provenance.insert(key, kind);
        }
        Ok(())
    }
}

/// The pair of syndrome graphs for one trial.
#[derive(Debug, Clone)]
pub struct SpaceTimeGraph {
    pub z: DecodingGraph,
    pub x: DecodingGraph,
}

/// −log₂ of the probability that an edge with effective noise `sigma_eff`
/// and analog remainder `z` carries an error.
pub fn edge_weight(sigma_eff: f64, z: f64, use_analog: bool) -> f64 {
    let w = if use_analog {
        if sigma_eff <= 0.0 {
            return WEIGHT_CAP;
        }
        match ln_conditional_pauli_prob(sigma_eff, z) {
            Ok(l) => -l / std::f64::consts::LN_2,
            Err(_) => WEIGHT_CAP,
        }
    } else {
        match p_err(sigma_eff) {
            Ok(p) if p > 0.0 => -p.log2(),
            _ => WEIGHT_CAP,
        }
    };
    w.clamp(0.0, WEIGHT_CAP)
}

/// Builds both syndrome graphs from the per-round records of a run whose
/// last record is the ideal round.
pub fn build_graph(
    layout: &Layout,
    noise: &NoiseParams,
    use_analog: bool,
    records: &[RoundRecord],
) -> Result<SpaceTimeGraph> {
    if records.len() < 2 {
        return Err(Error::Invalid(format!(
            "need at least one noisy and one ideal round, got {}",
            records.len()
        )));
    }
    Ok(SpaceTimeGraph {
        z: build_one(layout, noise, use_analog, records, CheckType::Z)?,
        x: build_one(layout, noise, use_analog, records, CheckType::X)?,
    })
}

fn build_one(
    layout: &Layout,
    noise: &NoiseParams,
    use_analog: bool,
    records: &[RoundRecord],
    kind: CheckType,
) -> Result<DecodingGraph> {
    let d = layout.d;
    let m = layout.check_count();
    let rounds = records.len();
    let boundary = rounds * m;
    let mut g = DecodingGraph {
        kind,
        graph: WeightedGraph::new(boundary + 1),
        provenance: HashMap::new(),
        highlighted: Vec::new(),
        boundary,
        checks: m,
    };
    g.graph.set_boundary(boundary, true);
    let of_data = match kind {
        CheckType::Z => &layout.z_of_data,
        CheckType::X => &layout.x_of_data,
    };
    for r in 1..=rounds {
        let rec = &records[r - 1];
        for (i, checks) in of_data.iter().enumerate() {
            let sigma_eff = horizontal_coeffs(kind, r, rounds, i + 1, d)
                .variance(noise)
                .sqrt();
            let analog = match kind {
                CheckType::Z => rec.analog_q[i],
                CheckType::X => rec.analog_p[i],
            };
            let w = edge_weight(sigma_eff, analog, use_analog);
            let (u, v) = match checks.as_slice() {
                [a] => (g.vertex(r, *a), boundary),
                [a, b] => (g.vertex(r, *a), g.vertex(r, *b)),
                _ => {
                    return Err(Error::Invalid(format!(
                        "data qubit {} has {} checks",
                        i + 1,
                        checks.len()
                    )))
                }
            };
            g.add(u, v, w, EdgeKind::Horizontal { round: r, data: i })?;
        }
        if r < rounds {
            for l in 0..m {
                let sigma_eff = vertical_coeffs(kind, l + 1, d).variance(noise).sqrt();
                let analog = match kind {
                    CheckType::Z => rec.z_analog[l],
                    CheckType::X => rec.x_analog[l],
                };
                let w = edge_weight(sigma_eff, analog, use_analog);
                g.add(
                    g.vertex(r, l),
                    g.vertex(r + 1, l),
                    w,
                    EdgeKind::Vertical { round: r, check: l },
                )?;
            }
        }
    }
    // A vertex lights up when its check value differs from the previous round
    // (the value before round 1 is +1).
    for r in 1..=rounds {
        for l in 0..m {
            let flipped = |rr: usize| -> bool {
                if rr == 0 {
                    false
                } else {
                    match kind {
                        CheckType::Z => records[rr - 1].z_flipped[l],
                        CheckType::X => records[rr - 1].x_flipped[l],
                    }
                }
            };
            if flipped(r) != flipped(r - 1) {
                g.highlighted.push(g.vertex(r, l));
            }
        }
    }
    if g.highlighted.len() % 2 == 1 {
        g.highlighted.push(boundary);
    }
    Ok(g)
}

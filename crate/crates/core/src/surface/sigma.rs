//! Effective noise variances used as matching weights.
//!
//! Each variance has the form a·σ_gkp² + b·σ², where the coefficients depend
//! on where a data qubit or syndrome qubit sits in the lattice. The tables
//! below give the steady-state (bulk-round) values; the first round and the
//! final ideal round use the reduced forms in [`horizontal_coeffs`].

use serde::{Deserialize, Serialize};

use crate::noise::NoiseParams;

/// Coefficients (a, b) of a·σ_gkp² + b·σ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceCoeffs {
    pub gkp: f64,
    pub circuit: f64,
}

impl VarianceCoeffs {
    pub const fn new(gkp: f64, circuit: f64) -> Self {
        Self { gkp, circuit }
    }

    pub fn variance(&self, noise: &NoiseParams) -> f64 {
        (self.gkp * noise.sigma_gkp * noise.sigma_gkp + self.circuit * noise.sigma * noise.sigma)
            .max(0.0)
    }

    pub fn sub(self, other: Self) -> Self {
        Self {
            gkp: self.gkp - other.gkp,
            circuit: self.circuit - other.circuit,
        }
    }
}

/// Which stabilizer type a quantity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckType {
    /// Z-type checks, detecting position shifts.
    Z,
    /// X-type checks, detecting momentum shifts.
    X,
}

const BULK_H: VarianceCoeffs = VarianceCoeffs::new(5.0, 59.0 / 3.0);

/// Data-qubit position-readout variance for Z-type horizontal edges (k is 1-based).
pub fn z_horizontal(k: usize, d: usize) -> VarianceCoeffs {
    if k % d == 1 {
        // Left column.
        VarianceCoeffs::new(
            4.0,
            if ((k - 1) / d) % 2 == 0 {
                52.0 / 3.0
            } else {
                58.0 / 3.0
            },
        )
    } else if k % d == 0 {
        // Right column.
        VarianceCoeffs::new(
            4.0,
            if (k / d) % 2 == 1 {
                55.0 / 3.0
            } else {
                49.0 / 3.0
            },
        )
    } else {
        BULK_H
    }
}

/// Data-qubit momentum-readout variance for X-type horizontal edges (k is 1-based).
pub fn x_horizontal(k: usize, d: usize) -> VarianceCoeffs {
    if (1..=d).contains(&k) {
        // Top row.
        VarianceCoeffs::new(4.0, if k % 2 == 1 { 49.0 / 3.0 } else { 55.0 / 3.0 })
    } else if (d * d - d + 1..=d * d).contains(&k) {
        // Bottom row.
        VarianceCoeffs::new(4.0, if k % 2 == 1 { 58.0 / 3.0 } else { 52.0 / 3.0 })
    } else {
        BULK_H
    }
}

/// Half-row length of the syndrome lattice, (d+1)/2.
fn half(d: usize) -> usize {
    (d + 1) / 2
}

/// Z-type syndrome readout variance for vertical edges (l is 1-based).
pub fn z_vertical(l: usize, d: usize) -> VarianceCoeffs {
    let h = half(d);
    let r = l % (2 * h);
    if r == 1 % (2 * h) {
        VarianceCoeffs::new(4.0, 56.0 / 3.0)
    } else if r == (h + 1) % (2 * h) {
        VarianceCoeffs::new(7.0, 107.0 / 3.0)
    } else if r == 0 {
        VarianceCoeffs::new(4.0, 73.0 / 3.0)
    } else {
        VarianceCoeffs::new(7.0, 116.0 / 3.0)
    }
}

/// X-type syndrome readout variance for vertical edges (l is 1-based).
pub fn x_vertical(l: usize, d: usize) -> VarianceCoeffs {
    let h = half(d);
    let r = l % (2 * h);
    if r == h % (2 * h) {
        VarianceCoeffs::new(4.0, 56.0 / 3.0)
    } else if r == (h + 1) % (2 * h) {
        VarianceCoeffs::new(4.0, 73.0 / 3.0)
    } else if r == 0 {
        VarianceCoeffs::new(7.0, 107.0 / 3.0)
    } else {
        VarianceCoeffs::new(7.0, 116.0 / 3.0)
    }
}

/// Gate step (1 or 2) of the GKP round in which the given quadrature of data
/// qubit k is measured: position on odd k in step 1, on even k in step 2, and
/// the reverse for momentum.
pub fn measurement_step(kind: CheckType, k: usize) -> usize {
    let odd = k % 2 == 1;
    match (kind, odd) {
        (CheckType::Z, true) | (CheckType::X, false) => 1,
        _ => 2,
    }
}

/// Noise accumulated by a data readout within its own round: one GKP step
/// contributes σ_gkp² + (10/3)σ², two steps twice that.
fn within_round(step: usize) -> VarianceCoeffs {
    VarianceCoeffs::new(step as f64, step as f64 * 10.0 / 3.0)
}

/// Horizontal-edge variance coefficients for data qubit k in round `round`
/// (1-based), where `final_round` is the closing ideal round.
pub fn horizontal_coeffs(
    kind: CheckType,
    round: usize,
    final_round: usize,
    k: usize,
    d: usize,
) -> VarianceCoeffs {
    let step = measurement_step(kind, k);
    let table = match kind {
        CheckType::Z => z_horizontal(k, d),
        CheckType::X => x_horizontal(k, d),
    };
    if round == 1 {
        within_round(step)
    } else if round == final_round {
        table.sub(within_round(step))
    } else {
        table
    }
}

/// Vertical-edge variance coefficients for check l (1-based).
pub fn vertical_coeffs(kind: CheckType, l: usize, d: usize) -> VarianceCoeffs {
    match kind {
        CheckType::Z => z_vertical(l, d),
        CheckType::X => x_vertical(l, d),
    }
}

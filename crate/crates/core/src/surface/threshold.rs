//! Threshold scans: logical error rate versus noise strength for several
//! code distances, and the noise level where the curves cross.

use serde::{Deserialize, Serialize};

use super::monte_carlo::{monte_carlo, MonteCarloResult, SurfaceGkpConfig};
use crate::error::{domain, Error, Result};
use crate::noise::NoiseParams;
use crate::rng::derive_seed;

/// The three noise families of a threshold scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdCase {
    /// Only finite GKP squeezing: σ = 0, σ_gkp = x.
    I,
    /// Only circuit noise: σ = x, σ_gkp = 0.
    II,
    /// Both, equal: σ = σ_gkp = x.
    III,
}

impl ThresholdCase {
    pub fn noise(self, x: f64) -> Result<NoiseParams> {
        match self {
            ThresholdCase::I => NoiseParams::new(0.0, x),
            ThresholdCase::II => NoiseParams::new(x, 0.0),
            ThresholdCase::III => NoiseParams::new(x, x),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Self::I),
            "II" | "2" => Ok(Self::II),
            "III" | "3" => Ok(Self::III),
            other => Err(Error::Parse(format!(
                "unknown threshold case {other:?} (expected I, II or III)"
            ))),
        }
    }
}

/// Crossing between the curves of two adjacent distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCrossing {
    pub d_small: usize,
    pub d_large: usize,
    /// Noise level of the crossing, or `None` when the curves do not cross
    /// inside the grid.
    pub crossing: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub case: ThresholdCase,
    pub distances: Vec<usize>,
    pub grid: Vec<f64>,
    /// `points[i][j]`: distance i, grid point j.
    pub points: Vec<Vec<MonteCarloResult>>,
    pub crossings: Vec<PairCrossing>,
}

impl ThresholdReport {
    /// Mean of the pairwise crossings, if every pair crossed.
    pub fn estimate(&self) -> Option<f64> {
        let xs: Option<Vec<f64>> = self.crossings.iter().map(|c| c.crossing).collect();
        let xs = xs?;
        if xs.is_empty() {
            return None;
        }
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }

    /// Max − min of the pairwise crossings, if every pair crossed.
    pub fn spread(&self) -> Option<f64> {
        let xs: Option<Vec<f64>> = self.crossings.iter().map(|c| c.crossing).collect();
        let xs = xs?;
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(hi - lo)
    }
}

/// Rate used for the crossing: the mean of the X and Z logical rates, which
/// are equal by the symmetry of the code and noise.
pub fn scan_rate(r: &MonteCarloResult) -> f64 {
    0.5 * (r.p_x.p + r.p_z.p)
}

/// Noise level where log-rate curves `a` (smaller code) and `b` (larger code)
/// cross, by linear interpolation of ln(a) − ln(b) between grid points.
///
/// Zero rates are floored at half a count. If sampling noise produces several
/// downward crossings, the median one is reported.
pub fn crossing(grid: &[f64], a: &[f64], b: &[f64], trials: u64) -> Option<f64> {
    let floor = 0.5 / trials as f64;
    let diff: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| x.max(floor).ln() - y.max(floor).ln())
        .collect();
    let mut found = Vec::new();
    for j in 0..grid.len().saturating_sub(1) {
        let (f0, f1) = (diff[j], diff[j + 1]);
        if f0 > 0.0 && f1 <= 0.0 {
            let t = f0 / (f0 - f1);
            found.push(grid[j] + t * (grid[j + 1] - grid[j]));
        }
    }
    if found.is_empty() {
        return None;
    }
    Some(found[(found.len() - 1) / 2])
}

/// Grid a:b:step inclusive of b (within rounding).
pub fn grid_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) {
        return domain(format!("bad grid {start}:{stop}:{step}"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

/// Runs the Monte Carlo at every (distance, grid point) and locates the
/// crossings between adjacent distances.
pub fn threshold_scan(
    case: ThresholdCase,
    distances: &[usize],
    grid: &[f64],
    trials: u64,
    master_seed: u64,
    use_analog_info: bool,
) -> Result<ThresholdReport> {
    if distances.len() < 2 {
        return domain("a threshold scan needs at least two distances");
    }
    if grid.len() < 2 {
        return domain("a threshold scan needs at least two grid points");
    }
    let mut points = Vec::with_capacity(distances.len());
    for &d in distances {
        let mut row = Vec::with_capacity(grid.len());
        for (j, &x) in grid.iter().enumerate() {
            let seed = derive_seed(master_seed, &[d as u64, j as u64]);
            let cfg = SurfaceGkpConfig::new(d, case.noise(x)?, use_analog_info, seed);
            row.push(monte_carlo(cfg, trials)?);
        }
        points.push(row);
    }
    let crossings = (0..distances.len() - 1)
        .map(|i| {
            let a: Vec<f64> = points[i].iter().map(scan_rate).collect();
            let b: Vec<f64> = points[i + 1].iter().map(scan_rate).collect();
            PairCrossing {
                d_small: distances[i],
                d_large: distances[i + 1],
                crossing: crossing(grid, &a, &b, trials),
            }
        })
        .collect();
    Ok(ThresholdReport {
        case,
        distances: distances.to_vec(),
        grid: grid.to_vec(),
        points,
        crossings,
    })
}

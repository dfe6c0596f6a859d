//! Trial orchestration and logical-error statistics.

use serde::{Deserialize, Serialize};

use super::decode::{decode_and_score, TrialResult};
use super::graph::build_graph;
use super::layout::Layout;
use super::sim::{simulate_rounds, Samplers};
use crate::error::{domain, Result};
use crate::noise::NoiseParams;
use crate::rng::trial_rng;
use crate::Pauli;

/// Parameters of a surface-GKP Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGkpConfig {
    /// Odd code distance, at least 3.
    pub d: usize,
    pub noise: NoiseParams,
    /// Weight edges with the conditional error probability of each analog
    /// readout instead of the average error probability.
    pub use_analog_info: bool,
    /// Noisy rounds before the closing ideal round; normally d.
    pub noisy_rounds: usize,
    pub master_seed: u64,
}

impl SurfaceGkpConfig {
    pub fn new(d: usize, noise: NoiseParams, use_analog_info: bool, master_seed: u64) -> Self {
        Self {
            d,
            noise,
            use_analog_info,
            noisy_rounds: d,
            master_seed,
        }
    }
}

/// Per-configuration state reused across trials.
#[derive(Debug, Clone)]
pub struct SurfaceSimulator {
    pub config: SurfaceGkpConfig,
    pub layout: Layout,
    samplers: Samplers,
}

impl SurfaceSimulator {
    pub fn new(config: SurfaceGkpConfig) -> Result<Self> {
        if config.noisy_rounds == 0 {
            return domain("at least one noisy round is required");
        }
        let layout = Layout::new(config.d)?;
        let noise = NoiseParams::new(config.noise.sigma, config.noise.sigma_gkp)?;
        Ok(Self {
            config,
            layout,
            samplers: Samplers::new(noise),
        })
    }

    /// Runs trial number `trial`; the result depends only on the
    /// configuration and the trial index.
    pub fn run_trial(&self, trial: u64) -> Result<TrialResult> {
        let mut rng = trial_rng(self.config.master_seed, trial);
        let (records, mut state) = simulate_rounds(
            &self.layout,
            &self.samplers,
            self.config.noisy_rounds,
            &mut rng,
        );
        let graph = build_graph(
            &self.layout,
            &self.config.noise,
            self.config.use_analog_info,
            &records,
        )?;
        decode_and_score(&graph, &mut state)
    }

    /// Tallies trials `range` sequentially.
    pub fn tally(&self, range: std::ops::Range<u64>) -> Result<LogicalCounts> {
        let mut c = LogicalCounts::default();
        for t in range {
            c.add(self.run_trial(t)?.label);
        }
        Ok(c)
    }
}

/// Counts of logical labels; merging is associative and commutative.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalCounts {
    pub i: u64,
    pub x: u64,
    pub z: u64,
    pub y: u64,
}

impl LogicalCounts {
    pub fn add(&mut self, p: Pauli) {
        match p {
            Pauli::I => self.i += 1,
            Pauli::X => self.x += 1,
            Pauli::Z => self.z += 1,
            Pauli::Y => self.y += 1,
        }
    }

    pub fn merge(self, o: Self) -> Self {
        Self {
            i: self.i + o.i,
            x: self.x + o.x,
            z: self.z + o.z,
            y: self.y + o.y,
        }
    }

    pub fn total(&self) -> u64 {
        self.i + self.x + self.z + self.y
    }
}

/// A binomial rate estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub p: f64,
    pub std_err: f64,
}

impl Rate {
    pub fn from_counts(k: u64, n: u64) -> Self {
        let p = k as f64 / n as f64;
        Self {
            p,
            std_err: (p * (1.0 - p) / n as f64).sqrt(),
        }
    }
}

/// Logical error rates of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub config: SurfaceGkpConfig,
    pub trials: u64,
    pub counts: LogicalCounts,
    pub p_x: Rate,
    pub p_z: Rate,
    pub p_y: Rate,
}

impl MonteCarloResult {
    pub fn from_counts(config: SurfaceGkpConfig, counts: LogicalCounts) -> Self {
        let n = counts.total();
        Self {
            config,
            trials: n,
            counts,
            p_x: Rate::from_counts(counts.x, n),
            p_z: Rate::from_counts(counts.z, n),
            p_y: Rate::from_counts(counts.y, n),
        }
    }
}

/// Runs `trials` trials (indices 0..trials) and returns the logical rates.
///
/// With the `parallel` feature the trials are spread over the rayon pool;
/// the result is identical either way.
pub fn monte_carlo(config: SurfaceGkpConfig, trials: u64) -> Result<MonteCarloResult> {
    if trials == 0 {
        return domain("at least one trial is required");
    }
    let sim = SurfaceSimulator::new(config)?;
    let counts = tally_trials(&sim, trials)?;
    Ok(MonteCarloResult::from_counts(config, counts))
}

#[cfg(feature = "parallel")]
fn tally_trials(sim: &SurfaceSimulator, trials: u64) -> Result<LogicalCounts> {
    use rayon::prelude::*;
    const CHUNK: u64 = 256;
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| sim.tally(c * CHUNK..((c + 1) * CHUNK).min(trials)))
        .try_reduce(LogicalCounts::default, |a, b| Ok(a.merge(b)))
}

#[cfg(not(feature = "parallel"))]
fn tally_trials(sim: &SurfaceSimulator, trials: u64) -> Result<LogicalCounts> {
    sim.tally(0..trials)
}

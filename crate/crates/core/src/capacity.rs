//! Quantum-capacity bounds for bosonic thermal-loss channels and achievable
//! rates of GKP codes. All rates are in qubits (bits) per channel use.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::{bisect, grid_then_golden_max};

/// A thermal-loss channel with transmissivity η and thermal photon number
/// n̄_th, optionally with an input energy constraint n̄ (`None` = unconstrained).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub eta: f64,
    pub n_th: f64,
    pub n_bar: Option<f64>,
}

impl ChannelParams {
    pub fn new(eta: f64, n_th: f64, n_bar: Option<f64>) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return domain(format!("transmissivity must be in [0, 1], got {eta}"));
        }
        if !(n_th >= 0.0 && n_th.is_finite()) {
            return domain(format!("thermal photon number must be >= 0, got {n_th}"));
        }
        if let Some(n) = n_bar {
            if !(n > 0.0) {
                return domain(format!("energy constraint must be positive, got {n}"));
            }
        }
        // An infinite constraint means unconstrained.
        let n_bar = n_bar.filter(|n| n.is_finite());
        Ok(Self { eta, n_th, n_bar })
    }

    pub fn gamma(&self) -> f64 {
        1.0 - self.eta
    }
}

/// Entropy of a thermal state with mean photon number x:
/// g(x) = (x+1)·log₂(x+1) − x·log₂(x).
pub fn g_entropy(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("g(x) needs x >= 0, got {x}"));
    }
    Ok(g(x))
}

fn g(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (x + 1.0) * (x + 1.0).log2() - x * x.log2()
    }
}

fn log2_ratio_floor(num: f64, den: f64) -> f64 {
    if num <= 0.0 {
        0.0
    } else if den <= 0.0 {
        f64::INFINITY
    } else {
        (num / den).log2().max(0.0)
    }
}

/// Capacity of the pure-loss channel of transmissivity `eta` with input
/// energy `n_bar` (`None` = unconstrained).
fn pure_loss(eta: f64, n_bar: Option<f64>) -> f64 {
    match n_bar {
        Some(n) => (g(eta * n) - g((1.0 - eta) * n)).max(0.0),
        None => log2_ratio_floor(eta, 1.0 - eta),
    }
}

/// Quantum capacity of a pure-loss channel (n̄_th must be 0).
pub fn pure_loss_capacity(params: &ChannelParams) -> Result<f64> {
    if params.n_th != 0.0 {
        return Err(Error::Invalid(
            "pure-loss capacity requires n_th = 0".into(),
        ));
    }
    Ok(pure_loss(params.eta, params.n_bar))
}

/// Data-processing upper bound: the channel is a pure loss of
/// η' = η/((1−η)n̄_th + 1) followed by a quantum-limited amplifier.
pub fn q_dp(params: &ChannelParams) -> f64 {
    let eta_p = params.eta / ((1.0 - params.eta) * params.n_th + 1.0);
    pure_loss(eta_p, params.n_bar)
}

/// Improved data-processing upper bound: a quantum-limited amplifier of gain
/// G̃' = η/η̃' followed by a pure loss of η̃' = η − (1−η)n̄_th. Zero when the
/// channel is entanglement-breaking (η̃' ≤ 0).
pub fn q_idp(params: &ChannelParams) -> f64 {
    let eta = params.eta;
    let eta_t = eta - (1.0 - eta) * params.n_th;
    if eta_t <= 0.0 {
        return 0.0;
    }
    let gain = eta / eta_t;
    pure_loss(eta_t, params.n_bar.map(|n| gain * n + (gain - 1.0)))
}

/// Optimized data-processing bound, defined as the maximum of [`q_dp`] and
/// [`q_idp`].
pub fn q_odp(params: &ChannelParams) -> f64 {
    q_dp(params).max(q_idp(params))
}

/// Coherent information of the channel for a thermal input of mean photon
/// number n̄ (may be negative). Unconstrained: log₂(η/(1−η)) − g(n̄_th).
pub fn lower_bound_thermal_input(params: &ChannelParams) -> f64 {
    coherent_info_thermal(params.eta, params.n_th, params.n_bar)
}

fn coherent_info_thermal(eta: f64, n_th: f64, n_bar: Option<f64>) -> f64 {
    match n_bar {
        None => {
            if eta >= 1.0 {
                f64::INFINITY
            } else if eta <= 0.0 {
                f64::NEG_INFINITY
            } else {
                (eta / (1.0 - eta)).log2() - g(n_th)
            }
        }
        Some(n) => {
            let a = (1.0 + eta) * n + (1.0 - eta) * n_th + 1.0;
            let dd = (a * a - 4.0 * eta * n * (n + 1.0)).max(0.0).sqrt();
            let s = (1.0 - eta) * (n - n_th);
            g(eta * n + (1.0 - eta) * n_th)
                - g(((dd + s - 1.0) / 2.0).max(0.0))
                - g(((dd - s - 1.0) / 2.0).max(0.0))
        }
    }
}

/// Lower bound from correlated multimode thermal inputs: the maximum over
/// x ∈ (0, 1] of x·I_c(η, n̄_th, n̄/x). Returns (rate, x*).
pub fn lower_bound_correlated(params: &ChannelParams) -> (f64, f64) {
    let Some(n) = params.n_bar else {
        return (lower_bound_thermal_input(params), 1.0);
    };
    let f = |x: f64| x * coherent_info_thermal(params.eta, params.n_th, Some(n / x));
    let (x, v) = grid_then_golden_max(f, 1e-3, 1.0, 1000, 3, 1e-6);
    // The x = 1 endpoint is the thermal-input bound; never report less.
    let at_one = f(1.0);
    if at_one >= v {
        (at_one, 1.0)
    } else {
        (v, x)
    }
}

/// Block structure of a correlated thermal state: `block_sizes[k]` modes each
/// holding `block_photons[k]` photons, mixed by the N-mode discrete Fourier
/// transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelatedThermalSpec {
    pub block_sizes: Vec<usize>,
    pub block_photons: Vec<f64>,
}

impl CorrelatedThermalSpec {
    /// The (1, N−1) family with photon numbers (N·n̄, 0).
    pub fn one_hot(modes: usize, n_bar: f64) -> Self {
        Self {
            block_sizes: vec![1, modes - 1],
            block_photons: vec![modes as f64 * n_bar, 0.0],
        }
    }

    pub fn total_modes(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn mean_photons(&self) -> f64 {
        let n = self.total_modes() as f64;
        self.block_sizes
            .iter()
            .zip(&self.block_photons)
            .map(|(&k, &p)| k as f64 * p)
            .sum::<f64>()
            / n
    }
}

/// Covariance matrix (mode-interleaved ordering q₁, p₁, q₂, p₂, …) of the
/// correlated thermal state described by `spec`.
pub fn correlated_thermal_covariance(spec: &CorrelatedThermalSpec) -> Result<DMatrix<f64>> {
    if spec.block_sizes.len() != spec.block_photons.len() || spec.block_sizes.is_empty() {
        return Err(Error::Invalid(
            "block sizes and photon numbers must be non-empty and match".into(),
        ));
    }
    if spec
        .block_photons
        .iter()
        .any(|&p| !(p >= 0.0 && p.is_finite()))
    {
        return domain("block photon numbers must be finite and nonnegative");
    }
    let n: usize = spec.total_modes();
    if n == 0 {
        return Err(Error::Invalid("state has no modes".into()));
    }
    let photons: Vec<f64> = spec
        .block_sizes
        .iter()
        .zip(&spec.block_photons)
        .flat_map(|(&k, &p)| std::iter::repeat(p).take(k))
        .collect();
    // M = U·diag(n)·U† for the unitary DFT U_jk = e^{2πi jk/N}/√N.
    let mut v = DMatrix::zeros(2 * n, 2 * n);
    let nf = n as f64;
    for j in 0..n {
        for k in 0..n {
            let (mut re, mut im) = (0.0, 0.0);
            for (l, &p) in photons.iter().enumerate() {
                let phase = 2.0 * std::f64::consts::PI * ((j * l) as f64 - (k * l) as f64) / nf;
                re += p * phase.cos() / nf;
                im += p * phase.sin() / nf;
            }
            let diag = if j == k { 0.5 } else { 0.0 };
            v[(2 * j, 2 * k)] = re + diag;
            v[(2 * j, 2 * k + 1)] = -im;
            v[(2 * j + 1, 2 * k)] = im;
            v[(2 * j + 1, 2 * k + 1)] = re + diag;
        }
    }
    Ok(v)
}

/// Whether V + (i/2)Ω ⪰ 0 (mode-interleaved ordering), via the real
/// embedding [[V, −Ω/2], [Ω/2, V]].
pub fn satisfies_uncertainty(v: &DMatrix<f64>, tol: f64) -> bool {
    let dim = v.nrows();
    let mut omega = DMatrix::zeros(dim, dim);
    for j in 0..dim / 2 {
        omega[(2 * j, 2 * j + 1)] = 1.0;
        omega[(2 * j + 1, 2 * j)] = -1.0;
    }
    let mut big = DMatrix::zeros(2 * dim, 2 * dim);
    big.view_mut((0, 0), (dim, dim)).copy_from(v);
    big.view_mut((dim, dim), (dim, dim)).copy_from(v);
    big.view_mut((0, dim), (dim, dim))
        .copy_from(&(&omega * -0.5));
    big.view_mut((dim, 0), (dim, dim))
        .copy_from(&(&omega * 0.5));
    big.symmetric_eigen().eigenvalues.iter().all(|&l| l >= -tol)
}

/// Achievable rate of GKP codes over the thermal-loss channel:
/// max(log₂⌊1/(e(1−η)(n̄_th+1))⌋, 0).
pub fn gkp_achievable_rate(params: &ChannelParams) -> f64 {
    let denom = std::f64::consts::E * (1.0 - params.eta) * (params.n_th + 1.0);
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    let f = (1.0 / denom).floor();
    if f < 2.0 {
        0.0
    } else {
        f.log2()
    }
}

/// Transmissivity where the two data-processing bounds are equal (the
/// switch point of [`q_odp`]), searched on (lo, hi).
pub fn odp_switch_point(n_th: f64, n_bar: Option<f64>, lo: f64, hi: f64) -> Result<f64> {
    let diff = |eta: f64| {
        let p = ChannelParams { eta, n_th, n_bar };
        q_dp(&p) - q_idp(&p)
    };
    bisect(diff, lo, hi, 1e-12)
}

/// All bounds at one channel, in the order of the sweep CSV columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityRow {
    pub eta: f64,
    pub gamma: f64,
    pub n_th: f64,
    pub n_bar: Option<f64>,
    pub q_dp: f64,
    pub q_idp: f64,
    pub q_odp: f64,
    pub lb_thermal: f64,
    pub lb_correlated: f64,
    pub x_star: f64,
    pub gkp_rate: f64,
}

pub fn capacity_row(params: &ChannelParams) -> CapacityRow {
    let (lb_correlated, x_star) = lower_bound_correlated(params);
    CapacityRow {
        eta: params.eta,
        gamma: params.gamma(),
        n_th: params.n_th,
        n_bar: params.n_bar,
        q_dp: q_dp(params),
        q_idp: q_idp(params),
        q_odp: q_odp(params),
        lb_thermal: lower_bound_thermal_input(params),
        lb_correlated,
        x_star,
        gkp_rate: gkp_achievable_rate(params),
    }
}

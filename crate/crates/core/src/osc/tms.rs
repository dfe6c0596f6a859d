//! The GKP two-mode-squeezing code: one data oscillator protected by one GKP
//! ancilla through a two-mode squeezing gate of gain G.
//!
//! Quadratures are ordered (q₁, p₁, q₂, p₂); mode 1 is the data mode and
//! mode 2 the ancilla.

use nalgebra::Matrix4;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{domain, Result};
use crate::noise::{normal, remainder_unchecked};
use crate::numeric::{adaptive_integrate, bisect, golden_section_min};
use crate::rng::trial_rng;
use crate::SQRT_2PI;

/// Parameters of one instance of the code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TmsCodeConfig {
    pub gain: f64,
    pub sigma: f64,
    pub sigma_gkp: f64,
}

impl TmsCodeConfig {
    pub fn new(gain: f64, sigma: f64, sigma_gkp: f64) -> Result<Self> {
        check_gain(gain)?;
        if !(sigma > 0.0 && sigma.is_finite()) {
            return domain(format!("sigma must be positive, got {sigma}"));
        }
        if !(sigma_gkp >= 0.0 && sigma_gkp.is_finite()) {
            return domain(format!("sigma_gkp must be >= 0, got {sigma_gkp}"));
        }
        Ok(Self {
            gain,
            sigma,
            sigma_gkp,
        })
    }

    /// Single-mode squeezing needed to build the two-mode squeezer, in dB:
    /// 20·log₁₀(√G + √(G−1)).
    pub fn squeezing_db(&self) -> f64 {
        gain_to_squeezing_db(self.gain)
    }
}

pub fn gain_to_squeezing_db(gain: f64) -> f64 {
    20.0 * (gain.sqrt() + (gain - 1.0).max(0.0).sqrt()).log10()
}

fn check_gain(gain: f64) -> Result<()> {
    if !(gain >= 1.0 && gain.is_finite()) {
        return domain(format!("gain must be >= 1, got {gain}"));
    }
    Ok(())
}

fn tms_matrix(gain: f64, sign: f64) -> Matrix4<f64> {
    let a = gain.sqrt();
    let b = sign * (gain - 1.0).max(0.0).sqrt();
    Matrix4::new(
        a, 0.0, b, 0.0, //
        0.0, a, 0.0, -b, //
        b, 0.0, a, 0.0, //
        0.0, -b, 0.0, a,
    )
}

/// Symplectic matrix of the two-mode squeezing gate of gain G.
pub fn s_ts(gain: f64) -> Result<Matrix4<f64>> {
    check_gain(gain)?;
    Ok(tms_matrix(gain, 1.0))
}

/// Inverse of [`s_ts`]: the same matrix with √(G−1) negated.
pub fn s_ts_inverse(gain: f64) -> Result<Matrix4<f64>> {
    check_gain(gain)?;
    Ok(tms_matrix(gain, -1.0))
}

/// Reshaped noise z = S_TS(G)⁻¹ξ seen after the decoding gate.
pub fn reshape_noise(gain: f64, xi: [f64; 4]) -> Result<[f64; 4]> {
    check_gain(gain)?;
    let a = gain.sqrt();
    let b = (gain - 1.0).max(0.0).sqrt();
    Ok([
        a * xi[0] - b * xi[2],
        a * xi[1] + b * xi[3],
        a * xi[2] - b * xi[0],
        a * xi[3] + b * xi[1],
    ])
}

/// Probability that N(0, sd²) falls in cell n = [(n−½)√(2π), (n+½)√(2π)], n ≥ 1.
fn upper_cell_mass(n: i64, sd: f64) -> f64 {
    let s = 1.0 / (sd * std::f64::consts::SQRT_2);
    let a = (n as f64 - 0.5) * SQRT_2PI;
    0.5 * (erfc(a * s) - erfc((a + SQRT_2PI) * s))
}

/// Σₙ 2πn²·qₙ over all cells for a centred Gaussian of standard deviation `sd`.
fn cell_second_moment(sd: f64) -> f64 {
    if sd == 0.0 {
        return 0.0;
    }
    let n_max = (12.0 * sd / SQRT_2PI).ceil() as i64 + 2;
    let mut total = 0.0;
    for n in (1..=n_max).rev() {
        total += (n * n) as f64 * upper_cell_mass(n, sd);
    }
    2.0 * 2.0 * std::f64::consts::PI * total
}

/// Variance of the logical quadrature noise with ideal GKP ancillas:
/// σ²/(2G−1) + 4G(G−1)/(2G−1)² · Σₙ 2πn²·qₙ, where qₙ is the mass of cell n
/// of N(0, (2G−1)σ²).
pub fn tms_logical_variance(sigma: f64, gain: f64) -> Result<f64> {
    tms_logical_variance_finite_gkp(sigma, 0.0, gain)
}

/// Variance of the logical quadrature noise when the ancilla readout carries
/// extra GKP noise ξ_gkp ~ N(0, 2σ_gkp²).
///
/// With u = z₂ + ξ_gkp the logical noise is z₁ + c·(u − √(2π)n) on cell n of
/// u. Conditioning on u, the linear part cancels exactly against the mean of
/// z₁ given u, leaving
///
/// σ²/(2G−1) + a²·s² + c²·Σₙ 2πn²·P(u ∈ cell n),
///
/// with a = 2√(G(G−1))/(2G−1), c = a·V_z/(V_z+V_g), s² = V_zV_g/(V_z+V_g),
/// V_z = (2G−1)σ² and V_g = 2σ_gkp².
pub fn tms_logical_variance_finite_gkp(sigma: f64, sigma_gkp: f64, gain: f64) -> Result<f64> {
    TmsCodeConfig::new(gain, sigma, sigma_gkp)?;
    Ok(finite_variance(sigma, sigma_gkp, gain))
}

fn finite_variance(sigma: f64, sigma_gkp: f64, gain: f64) -> f64 {
    let two_g = 2.0 * gain - 1.0;
    let a = 2.0 * (gain * (gain - 1.0)).sqrt() / two_g;
    let vz = two_g * sigma * sigma;
    let vg = 2.0 * sigma_gkp * sigma_gkp;
    let c = a * vz / (vz + vg);
    let s2 = vz * vg / (vz + vg);
    sigma * sigma / two_g + a * a * s2 + c * c * cell_second_moment((vz + vg).sqrt())
}

/// The same variance as [`tms_logical_variance_finite_gkp`], evaluated by
/// direct two-dimensional quadrature over (z₂, ξ_gkp) cell by cell. Slower;
/// kept as an independent check of the closed form.
pub fn tms_logical_variance_finite_gkp_quadrature(
    sigma: f64,
    sigma_gkp: f64,
    gain: f64,
    tol: f64,
) -> Result<f64> {
    TmsCodeConfig::new(gain, sigma, sigma_gkp)?;
    let two_g = 2.0 * gain - 1.0;
    let vz = two_g * sigma * sigma;
    let vg = 2.0 * sigma_gkp * sigma_gkp;
    if vg == 0.0 {
        return Ok(finite_variance(sigma, 0.0, gain));
    }
    let root = 2.0 * (gain * (gain - 1.0)).sqrt();
    let c = root * sigma * sigma / (two_g * sigma * sigma + vg);
    let c_prime = root * vg / (two_g * (two_g * sigma * sigma + vg));
    let vu = vz + vg;
    let su = vu.sqrt();
    // Integrate over u = z₂ + ξ_gkp (outer) and z₂ given u (inner).
    let cond_mean = vz / vu;
    let cond_sd = (vz * vg / vu).sqrt();
    let gauss =
        |x: f64, v: f64| (-(x * x) / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
    let n_max = (12.0 * su / SQRT_2PI).ceil() as i64 + 1;
    let mut total = sigma * sigma / two_g;
    for n in -n_max..=n_max {
        let lo = ((n as f64 - 0.5) * SQRT_2PI).max(-12.0 * su);
        let hi = ((n as f64 + 0.5) * SQRT_2PI).min(12.0 * su);
        if lo >= hi {
            continue;
        }
        let shift = SQRT_2PI * n as f64;
        let outer = |u: f64| {
            let m = cond_mean * u;
            let inner = |z: f64| {
                let xg = u - z;
                let t = c * (xg - shift) - c_prime * z;
                gauss(z - m, cond_sd * cond_sd) * t * t
            };
            let v = adaptive_integrate(&inner, m - 10.0 * cond_sd, m + 10.0 * cond_sd, tol)
                .unwrap_or(f64::NAN);
            gauss(u, vu) * v
        };
        let part = adaptive_integrate(&outer, lo, hi, tol)?;
        total += part;
    }
    if !total.is_finite() {
        return Err(crate::Error::Numeric("quadrature did not converge".into()));
    }
    Ok(total)
}

const GAIN_GRID: usize = 200;

/// Minimises σ_L² over G ∈ [1, 10/σ²]. Returns (G*, σ_L*); G* = 1 and
/// σ_L* = σ when no gain improves on leaving the code out.
pub fn tms_optimize_gain(sigma: f64) -> Result<(f64, f64)> {
    tms_optimize_gain_finite_gkp(sigma, 0.0)
}

/// [`tms_optimize_gain`] with finite-squeezing GKP ancillas.
pub fn tms_optimize_gain_finite_gkp(sigma: f64, sigma_gkp: f64) -> Result<(f64, f64)> {
    TmsCodeConfig::new(1.0, sigma, sigma_gkp)?;
    let g_max = 10.0 / (sigma * sigma);
    let baseline = sigma * sigma;
    if g_max <= 1.0 {
        return Ok((1.0, sigma));
    }
    // Search in x = ln G on a log-spaced grid, then golden-section refine.
    let f = |x: f64| finite_variance(sigma, sigma_gkp, x.exp());
    let x_max = g_max.ln();
    let h = x_max / (GAIN_GRID - 1) as f64;
    let (mut best_i, mut best_v) = (0, f64::INFINITY);
    for i in 0..GAIN_GRID {
        let v = f(h * i as f64);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = h * (best_i as f64 - 1.0).max(0.0);
    let hi = (h * (best_i as f64 + 1.0)).min(x_max);
    let (x, v) = golden_section_min(f, lo, hi, 1e-10);
    let (x, v) = if v < best_v {
        (x, v)
    } else {
        (h * best_i as f64, best_v)
    };
    if v < baseline * (1.0 - 1e-12) {
        Ok((x.exp(), v.sqrt()))
    } else {
        Ok((1.0, sigma))
    }
}

/// Largest σ for which the code (ideal ancillas) reduces the noise, found by
/// bisection on [lo, hi].
pub fn critical_sigma(lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let helps = |s: f64| match tms_optimize_gain(s) {
        Ok((g, _)) if g > 1.0 => -1.0,
        _ => 1.0,
    };
    bisect(helps, lo, hi, tol)
}

/// Maximum QEC gain σ²/(σ_L*)² over σ ∈ [lo, hi] for ancillas with GKP noise
/// σ_gkp. Returns (σ at the maximum, gain).
pub fn max_qec_gain(sigma_gkp: f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    if !(lo > 0.0 && hi > lo) {
        return domain(format!("need 0 < lo < hi, got [{lo}, {hi}]"));
    }
    let gain_at = |ls: f64| {
        let s = ls.exp();
        match tms_optimize_gain_finite_gkp(s, sigma_gkp) {
            Ok((_, sl)) => s * s / (sl * sl),
            Err(_) => 0.0,
        }
    };
    let (a, b) = (lo.ln(), hi.ln());
    let grid = 60;
    let h = (b - a) / (grid - 1) as f64;
    let (mut best_i, mut best_v) = (0, f64::NEG_INFINITY);
    for i in 0..grid {
        let v = gain_at(a + h * i as f64);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let l = (a + h * (best_i as f64 - 1.0)).max(a);
    let r = (a + h * (best_i as f64 + 1.0)).min(b);
    let (x, neg) = golden_section_min(|x| -gain_at(x), l, r, 1e-8);
    if -neg > best_v {
        Ok((x.exp(), -neg))
    } else {
        Ok(((a + h * best_i as f64).exp(), best_v))
    }
}

/// GKP squeezing (dB) below which no σ admits a QEC gain above 1, found by
/// bisection on [lo_db, hi_db].
pub fn critical_gkp_squeezing_db(lo_db: f64, hi_db: f64, tol: f64) -> Result<f64> {
    let f = |db: f64| {
        let sg = crate::noise::sigma_gkp_from_squeezing_db(db);
        match max_qec_gain(sg, 0.01, 0.6) {
            Ok((_, g)) if g > 1.0 + 1e-9 => 1.0,
            _ => -1.0,
        }
    };
    bisect(f, lo_db, hi_db, tol)
}

/// Summary of a Monte Carlo run of the code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TmsMonteCarlo {
    pub trials: u64,
    pub var_q: f64,
    pub var_q_err: f64,
    pub var_p: f64,
    pub var_p_err: f64,
}

/// Draws the logical noise (ξ_q, ξ_p) of one use of the code.
pub fn sample_logical_noise<R: Rng + ?Sized>(config: &TmsCodeConfig, rng: &mut R) -> (f64, f64) {
    let xi = [
        normal(rng, config.sigma),
        normal(rng, config.sigma),
        normal(rng, config.sigma),
        normal(rng, config.sigma),
    ];
    let g_sd = std::f64::consts::SQRT_2 * config.sigma_gkp;
    let (gq, gp) = (normal(rng, g_sd), normal(rng, g_sd));
    let gain = config.gain;
    let z = reshape_noise(gain, xi).expect("config gain already validated");
    let two_g = 2.0 * gain - 1.0;
    let s2 = config.sigma * config.sigma;
    let coeff = 2.0 * (gain * (gain - 1.0)).sqrt() * s2
        / (two_g * s2 + 2.0 * config.sigma_gkp * config.sigma_gkp);
    let eq = z[0] + coeff * remainder_unchecked(z[2] + gq, SQRT_2PI);
    let ep = z[1] - coeff * remainder_unchecked(z[3] + gp, SQRT_2PI);
    (eq, ep)
}

/// Sample variances (with standard errors) of the logical noise over
/// `trials` independent uses; trial t uses stream t of `seed`.
pub fn tms_monte_carlo(config: &TmsCodeConfig, trials: u64, seed: u64) -> Result<TmsMonteCarlo> {
    if trials < 2 {
        return domain("need at least two trials");
    }
    let mut acc = [[0.0f64; 4]; 2];
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let (eq, ep) = sample_logical_noise(config, &mut rng);
        for (a, e) in acc.iter_mut().zip([eq, ep]) {
            a[0] += e;
            a[1] += e * e;
            a[2] += e * e * e;
            a[3] += e * e * e * e;
        }
    }
    let n = trials as f64;
    let stat = |a: &[f64; 4]| {
        let m = a[0] / n;
        let m2 = a[1] / n;
        let var = m2 - m * m;
        // Fourth central moment for the standard error of the variance.
        let m4 = a[3] / n - 4.0 * m * a[2] / n + 6.0 * m * m * m2 - 3.0 * m.powi(4);
        let var_unbiased = var * n / (n - 1.0);
        (var_unbiased, ((m4 - var * var).max(0.0) / n).sqrt())
    };
    let (var_q, var_q_err) = stat(&acc[0]);
    let (var_p, var_p_err) = stat(&acc[1]);
    Ok(TmsMonteCarlo {
        trials,
        var_q,
        var_q_err,
        var_p,
        var_p_err,
    })
}

/// Small-σ asymptotes (G*, σ_L*) of the optimal gain and logical noise.
pub fn asymptotic_optimum(sigma: f64) -> (f64, f64) {
    let pi = std::f64::consts::PI;
    let l = (pi.powf(1.5) / (2.0 * sigma.powi(4))).ln();
    (
        pi / (8.0 * sigma * sigma) / l + 0.5,
        2.0 * sigma * sigma / pi.sqrt() * l.sqrt(),
    )
}

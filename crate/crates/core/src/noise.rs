//! Shift-noise primitives: modular remainders, Gaussian-comb probabilities,
//! loss-to-shift conversions and correlated Gaussian sampling.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{domain, Error, Result};
use crate::SQRT_PI;

/// Position and momentum shifts of a collection of modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftVector {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl ShiftVector {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() || q.is_empty() {
            return Err(Error::Dimension(format!(
                "q has {} entries, p has {}",
                q.len(),
                p.len()
            )));
        }
        if q.iter().chain(p.iter()).any(|x| !x.is_finite()) {
            return domain("shift entries must be finite");
        }
        Ok(Self { q, p })
    }

    pub fn zeros(modes: usize) -> Self {
        Self {
            q: vec![0.0; modes],
            p: vec![0.0; modes],
        }
    }

    pub fn mode_count(&self) -> usize {
        self.q.len()
    }

    /// Interleaved (q₁, p₁, q₂, p₂, …) representation.
    pub fn interleaved(&self) -> Vec<f64> {
        self.q
            .iter()
            .zip(&self.p)
            .flat_map(|(&q, &p)| [q, p])
            .collect()
    }

    pub fn from_interleaved(x: &[f64]) -> Result<Self> {
        if x.len() % 2 != 0 {
            return Err(Error::Dimension("interleaved vector has odd length".into()));
        }
        Self::new(
            x.iter().step_by(2).copied().collect(),
            x.iter().skip(1).step_by(2).copied().collect(),
        )
    }
}

/// Circuit-level noise strengths: `sigma` for gate/idle/measurement shifts and
/// `sigma_gkp` for the finite width of freshly prepared GKP states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub sigma: f64,
    pub sigma_gkp: f64,
}

impl NoiseParams {
    pub fn new(sigma: f64, sigma_gkp: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) || !(sigma_gkp >= 0.0 && sigma_gkp.is_finite()) {
            return domain(format!(
                "noise parameters must be finite and nonnegative, got ({sigma}, {sigma_gkp})"
            ));
        }
        Ok(Self { sigma, sigma_gkp })
    }

    /// GKP squeezing in dB, −10·log₁₀(2σ_gkp²); infinite for ideal states.
    pub fn gkp_squeezing_db(&self) -> f64 {
        squeezing_db_from_sigma_gkp(self.sigma_gkp)
    }
}

pub fn squeezing_db_from_sigma_gkp(sigma_gkp: f64) -> f64 {
    -10.0 * (2.0 * sigma_gkp * sigma_gkp).log10()
}

pub fn sigma_gkp_from_squeezing_db(db: f64) -> f64 {
    (10f64.powf(-db / 10.0) / 2.0).sqrt()
}

/// Remainder of `z` modulo `s`, centred on zero: z − s·⌊z/s + 1/2⌋.
///
/// The result lies in [−s/2, s/2); the tie z = s/2 maps to −s/2.
pub fn remainder(z: f64, s: f64) -> Result<f64> {
    if !z.is_finite() || !s.is_finite() || s <= 0.0 {
        return domain(format!(
            "remainder needs finite z and positive s, got ({z}, {s})"
        ));
    }
    Ok(remainder_unchecked(z, s))
}

/// [`remainder`] without argument validation, for hot loops.
#[inline]
pub fn remainder_unchecked(z: f64, s: f64) -> f64 {
    z - s * (z / s + 0.5).floor()
}

/// Index n of the comb cell containing z, i.e. the integer with z − n·s = R_s(z).
#[inline]
pub fn nearest_multiple(z: f64, s: f64) -> i64 {
    (z / s + 0.5).floor() as i64
}

/// Number of comb terms kept on each side for a Gaussian of width `sigma`.
pub fn comb_window(sigma: f64) -> i64 {
    (8.0 * sigma / SQRT_PI).ceil() as i64 + 2
}

/// Probability that a Gaussian shift of standard deviation `sigma_eff` lands
/// in an odd cell of the √π comb, i.e. that rounding to the nearest multiple of
/// √π leaves a residual Pauli error.
pub fn p_err(sigma_eff: f64) -> Result<f64> {
    if !(sigma_eff >= 0.0) || sigma_eff.is_nan() {
        return domain(format!("p_err needs sigma >= 0, got {sigma_eff}"));
    }
    if sigma_eff == 0.0 {
        return Ok(0.0);
    }
    if sigma_eff.is_infinite() {
        return Ok(0.5);
    }
    let scale = 1.0 / (sigma_eff * std::f64::consts::SQRT_2);
    let w = comb_window(sigma_eff);
    // The odd cells are symmetric about zero; sum the positive half and double.
    let mut total = 0.0;
    for n in 0..=w {
        let a = (2 * n) as f64 * SQRT_PI + 0.5 * SQRT_PI;
        let b = a + SQRT_PI;
        total += erfc(a * scale) - erfc(b * scale);
    }
    Ok(total.clamp(0.0, 0.5))
}

/// Small-σ asymptote of [`p_err`]: (√8·σ/π)·exp(−π/(8σ²)).
pub fn p_err_asymptotic(sigma: f64) -> f64 {
    (8f64.sqrt() * sigma / std::f64::consts::PI)
        * (-std::f64::consts::PI / (8.0 * sigma * sigma)).exp()
}

/// Natural log of the conditional Pauli-error probability p[σ](z).
///
/// Evaluated as a ratio of log-sum-exp combs so that very confident
/// measurements (tiny p) stay finite.
pub fn ln_conditional_pauli_prob(sigma_eff: f64, z: f64) -> Result<f64> {
    if !(sigma_eff > 0.0) || !sigma_eff.is_finite() {
        return domain(format!(
            "conditional probability needs sigma > 0, got {sigma_eff}"
        ));
    }
    if !z.is_finite() {
        return domain("conditional probability needs finite z");
    }
    let m = comb_window(sigma_eff) + 1;
    let inv = 1.0 / (2.0 * sigma_eff * sigma_eff);
    // Separate log-sum-exp for the odd terms and for all terms, each shifted
    // by its own largest exponent, so tiny probabilities stay finite.
    let centre = nearest_multiple(z, SQRT_PI);
    let exponent = |n: i64| -(z - n as f64 * SQRT_PI).powi(2) * inv;
    let odd_peak = if centre.rem_euclid(2) == 1 {
        centre
    } else if z >= centre as f64 * SQRT_PI {
        centre + 1
    } else {
        centre - 1
    };
    let e_all = exponent(centre);
    let e_odd = exponent(odd_peak);
    let mut odd = 0.0;
    let mut all = 0.0;
    for n in (centre - m)..=(centre + m) {
        let e = exponent(n);
        all += (e - e_all).exp();
        if n.rem_euclid(2) == 1 {
            odd += (e - e_odd).exp();
        }
    }
    Ok((e_odd + odd.ln()) - (e_all + all.ln()))
}

/// Conditional Pauli-error probability p[σ](z) given the analog remainder z.
pub fn conditional_pauli_prob(sigma_eff: f64, z: f64) -> Result<f64> {
    Ok(ln_conditional_pauli_prob(sigma_eff, z)?.exp())
}

/// Post-amplification shift variance of a pure-loss channel: (1−η)/η.
pub fn loss_to_shift_post_amp(eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return domain(format!("transmissivity must be in (0, 1], got {eta}"));
    }
    Ok((1.0 - eta) / eta)
}

/// Pre-amplification shift variance of a thermal-loss channel: (1−η)(n̄_th+1).
pub fn thermal_loss_to_shift_pre_amp(eta: f64, n_th: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) || !(n_th >= 0.0) {
        return domain(format!(
            "need eta in [0, 1] and n_th >= 0, got ({eta}, {n_th})"
        ));
    }
    Ok((1.0 - eta) * (n_th + 1.0))
}

/// Symmetric square root of a PSD matrix, validating symmetry and the spectrum.
pub fn psd_sqrt(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if cov.nrows() != cov.ncols() {
        return Err(Error::Dimension("covariance must be square".into()));
    }
    let scale = cov.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    for i in 0..cov.nrows() {
        for j in 0..i {
            if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::Invalid("covariance is not symmetric".into()));
            }
        }
    }
    let eig = SymmetricEigen::new(cov.clone());
    if eig.eigenvalues.iter().any(|&l| l < -1e-12 * scale) {
        return Err(Error::Invalid(
            "covariance is not positive semidefinite".into(),
        ));
    }
    let root = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose())
}

/// Draws one sample of N(0, cov).
pub fn sample_gaussian<R: Rng + ?Sized>(rng: &mut R, cov: &DMatrix<f64>) -> Result<DVector<f64>> {
    Ok(GaussianSampler::new(cov)?.sample(rng))
}

/// Reusable sampler holding the square root of a fixed covariance.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    root: DMatrix<f64>,
}

impl GaussianSampler {
    pub fn new(cov: &DMatrix<f64>) -> Result<Self> {
        Ok(Self {
            root: psd_sqrt(cov)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.root.nrows()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let z = DVector::from_fn(self.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
        &self.root * z
    }
}

/// Two-dimensional correlated sampler used in the inner simulation loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSampler {
    root: [f64; 4],
}

impl PairSampler {
    /// Sampler for variance·[[a, b], [b, c]].
    pub fn new(variance: f64, a: f64, b: f64, c: f64) -> Self {
        let m = Matrix2::new(a, b, b, c) * variance;
        let eig = m.symmetric_eigen();
        let root = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let r = eig.eigenvectors * Matrix2::from_diagonal(&root) * eig.eigenvectors.transpose();
        Self {
            root: [r[(0, 0)], r[(0, 1)], r[(1, 0)], r[(1, 1)]],
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        (
            self.root[0] * x + self.root[1] * y,
            self.root[2] * x + self.root[3] * y,
        )
    }
}

/// Draws from N(0, sigma²). A draw is consumed even when sigma is zero so the
/// stream position never depends on the noise strength.
#[inline]
pub fn normal<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    sigma * rng.sample::<f64, _>(StandardNormal)
}

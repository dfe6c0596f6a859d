//! Gaussian channels in (T, N, d) form: x̄ → T x̄ + d, V → T V Tᵀ + N.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannelSpec {
    pub t: DMatrix<f64>,
    pub n: DMatrix<f64>,
    pub d: DVector<f64>,
}

/// The named single-mode channel families, with their parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChannelKind {
    ThermalLoss { eta: f64, n_th: f64 },
    PureLoss { eta: f64 },
    NoisyAmp { gain: f64, n_th: f64 },
    QuantumLimitedAmp { gain: f64 },
    AdditiveNoise { sigma: f64 },
}

impl GaussianChannelSpec {
    pub fn new(t: DMatrix<f64>, n: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        let dim = t.nrows();
        if dim == 0 || dim % 2 != 0 || t.ncols() != dim || n.shape() != (dim, dim) || d.len() != dim
        {
            return Err(Error::Dimension(
                "T, N must be 2N×2N and d of length 2N".into(),
            ));
        }
        for i in 0..dim {
            for j in 0..i {
                if (n[(i, j)] - n[(j, i)]).abs() > 1e-12 {
                    return Err(Error::Invalid("noise matrix is not symmetric".into()));
                }
            }
        }
        if SymmetricEigen::new(n.clone())
            .eigenvalues
            .iter()
            .any(|&l| l < -1e-12)
        {
            return Err(Error::Invalid(
                "noise matrix is not positive semidefinite".into(),
            ));
        }
        Ok(Self { t, n, d })
    }

    pub fn identity(modes: usize) -> Self {
        let dim = 2 * modes;
        Self {
            t: DMatrix::identity(dim, dim),
            n: DMatrix::zeros(dim, dim),
            d: DVector::zeros(dim),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.t.nrows() / 2
    }

    /// Applies the channel to first and second moments.
    pub fn apply(
        &self,
        mean: &DVector<f64>,
        cov: &DMatrix<f64>,
    ) -> Result<(DVector<f64>, DMatrix<f64>)> {
        if mean.len() != self.d.len() || cov.shape() != self.n.shape() {
            return Err(Error::Dimension("moments do not match channel size".into()));
        }
        Ok((
            &self.t * mean + &self.d,
            &self.t * cov * self.t.transpose() + &self.n,
        ))
    }

    /// Largest absolute elementwise difference between two channels.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let dt = (&self.t - &other.t).amax();
        let dn = (&self.n - &other.n).amax();
        let dd = (&self.d - &other.d).amax();
        dt.max(dn).max(dd)
    }
}

/// Channel that applies `a` first and then `b`.
pub fn compose_gaussian_channels(
    a: &GaussianChannelSpec,
    b: &GaussianChannelSpec,
) -> Result<GaussianChannelSpec> {
    if a.t.shape() != b.t.shape() {
        return Err(Error::Dimension(format!(
            "cannot compose {}-mode and {}-mode channels",
            a.mode_count(),
            b.mode_count()
        )));
    }
    Ok(GaussianChannelSpec {
        t: &b.t * &a.t,
        n: &b.t * &a.n * b.t.transpose() + &b.n,
        d: &b.t * &a.d + &b.d,
    })
}

/// The single-mode channel of the given family.
pub fn named_channel(kind: ChannelKind) -> Result<GaussianChannelSpec> {
    let (t, n) = match kind {
        ChannelKind::ThermalLoss { eta, n_th } => {
            check_eta(eta)?;
            check_nth(n_th)?;
            (eta.sqrt(), (1.0 - eta) * (n_th + 0.5))
        }
        ChannelKind::PureLoss { eta } => {
            check_eta(eta)?;
            (eta.sqrt(), 0.5 * (1.0 - eta))
        }
        ChannelKind::NoisyAmp { gain, n_th } => {
            check_gain(gain)?;
            check_nth(n_th)?;
            (gain.sqrt(), (gain - 1.0) * (n_th + 0.5))
        }
        ChannelKind::QuantumLimitedAmp { gain } => {
            check_gain(gain)?;
            (gain.sqrt(), 0.5 * (gain - 1.0))
        }
        ChannelKind::AdditiveNoise { sigma } => {
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return domain(format!("additive noise needs sigma >= 0, got {sigma}"));
            }
            (1.0, sigma * sigma)
        }
    };
    Ok(GaussianChannelSpec {
        t: DMatrix::identity(2, 2) * t,
        n: DMatrix::identity(2, 2) * n,
        d: DVector::zeros(2),
    })
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        domain(format!("transmissivity must be in [0, 1], got {eta}"))
    }
}

fn check_nth(n_th: f64) -> Result<()> {
    if n_th >= 0.0 && n_th.is_finite() {
        Ok(())
    } else {
        domain(format!("thermal photon number must be >= 0, got {n_th}"))
    }
}

fn check_gain(gain: f64) -> Result<()> {
    if gain >= 1.0 && gain.is_finite() {
        Ok(())
    } else {
        domain(format!("amplifier gain must be >= 1, got {gain}"))
    }
}

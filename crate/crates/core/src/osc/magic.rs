//! Magic variance of single-mode Gaussian states with respect to the
//! displaced cubic-phase basis e^{iγq̂³}|p̂ = p⟩.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// First and second moments of a single-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianStateMoments {
    pub q_bar: f64,
    pub p_bar: f64,
    pub v_qq: f64,
    pub v_pp: f64,
    pub v_qp: f64,
}

impl GaussianStateMoments {
    /// Validates V_qq·V_pp − V_qp² ≥ 1/4 (up to 1e-12) and positivity.
    pub fn new(q_bar: f64, p_bar: f64, v_qq: f64, v_pp: f64, v_qp: f64) -> Result<Self> {
        let all = [q_bar, p_bar, v_qq, v_pp, v_qp];
        if all.iter().any(|x| !x.is_finite()) {
            return domain("moments must be finite");
        }
        if !(v_qq > 0.0 && v_pp > 0.0) {
            return domain("variances must be positive");
        }
        if v_qq * v_pp - v_qp * v_qp < 0.25 - 1e-12 {
            return domain(format!(
                "moments violate the uncertainty relation: det = {}",
                v_qq * v_pp - v_qp * v_qp
            ));
        }
        Ok(Self {
            q_bar,
            p_bar,
            v_qq,
            v_pp,
            v_qp,
        })
    }

    pub fn vacuum() -> Self {
        Self {
            q_bar: 0.0,
            p_bar: 0.0,
            v_qq: 0.5,
            v_pp: 0.5,
            v_qp: 0.0,
        }
    }
}

/// ⟨(p̂ − 3γq̂²)²⟩ − ⟨p̂ − 3γq̂²⟩², expanded through Gaussian moments as
/// V_pp + 18γ²V_qq² + 36γ²V_qq(q̄ − V_qp/(6γV_qq))² − V_qp²/V_qq.
pub fn magic_variance(state: &GaussianStateMoments, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return domain(format!("gamma must be positive, got {gamma}"));
    }
    let s =
        GaussianStateMoments::new(state.q_bar, state.p_bar, state.v_qq, state.v_pp, state.v_qp)?;
    let shift = s.q_bar - s.v_qp / (6.0 * gamma * s.v_qq);
    Ok(s.v_pp
        + 18.0 * gamma * gamma * s.v_qq * s.v_qq
        + 36.0 * gamma * gamma * s.v_qq * shift * shift
        - s.v_qp * s.v_qp / s.v_qq)
}

/// Lower bound (3/2)(3γ/2)^{2/3} on the magic variance of Gaussian states.
pub fn magic_variance_bound(gamma: f64) -> f64 {
    1.5 * (1.5 * gamma).powf(2.0 / 3.0)
}

/// A pure Gaussian state attaining [`magic_variance_bound`]: V_qp = 0,
/// q̄ = 0, V_qq = (1/(144γ²))^{1/3} (where 1/(8V_qq) = 18γ²V_qq²) and
/// V_pp = 1/(4V_qq).
pub fn saturating_state(gamma: f64) -> Result<GaussianStateMoments> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return domain(format!("gamma must be positive, got {gamma}"));
    }
    let v_qq = (1.0 / (144.0 * gamma * gamma)).cbrt();
    GaussianStateMoments::new(0.0, 0.0, v_qq, 0.25 / v_qq, 0.0)
}

//! Browser bindings for three quick bqec-core calculations: square GKP
//! failure probability, thermal-loss capacity bounds and the optimal
//! two-mode-squeezing code.
//!
//! Each export returns a flat `Float64Array`; the plain-Rust functions in
//! [`calc`] do the work so they can be tested off the web.

use wasm_bindgen::prelude::*;

pub mod calc {
    use bqec_core::capacity::{capacity_row, ChannelParams};
    use bqec_core::lattice::square_failure_probability;
    use bqec_core::noise::sigma_gkp_from_squeezing_db;
    use bqec_core::osc::tms::gain_to_squeezing_db;
    use bqec_core::osc::{tms_optimize_gain, tms_optimize_gain_finite_gkp};
    use bqec_core::Result;

    /// [exact, asymptotic] failure probability of the square qubit code.
    pub fn gkp_failure(sigma: f64) -> Result<Vec<f64>> {
        Ok(vec![
            square_failure_probability(sigma, true)?,
            square_failure_probability(sigma, false)?,
        ])
    }

    /// [q_dp, q_idp, q_odp, lb_thermal, lb_correlated, x_star, gkp_rate];
    /// `n_bar = None` means no energy constraint.
    pub fn capacity_bounds(eta: f64, n_th: f64, n_bar: Option<f64>) -> Result<Vec<f64>> {
        let r = capacity_row(&ChannelParams::new(eta, n_th, n_bar)?);
        Ok(vec![
            r.q_dp,
            r.q_idp,
            r.q_odp,
            r.lb_thermal,
            r.lb_correlated,
            r.x_star,
            r.gkp_rate,
        ])
    }

    /// [G*, squeezing in dB, σ_L*, QEC gain σ²/σ_L*²]; `gkp_db = None` means
    /// ideal GKP ancillas.
    pub fn tms_optimum(sigma: f64, gkp_db: Option<f64>) -> Result<Vec<f64>> {
        let (g, sl) = match gkp_db {
            None => tms_optimize_gain(sigma)?,
            Some(db) => tms_optimize_gain_finite_gkp(sigma, sigma_gkp_from_squeezing_db(db))?,
        };
        Ok(vec![
            g,
            gain_to_squeezing_db(g),
            sl,
            sigma * sigma / (sl * sl),
        ])
    }
}

fn js_err(e: bqec_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = gkpFailure)]
pub fn gkp_failure(sigma: f64) -> Result<Vec<f64>, JsError> {
    calc::gkp_failure(sigma).map_err(js_err)
}

#[wasm_bindgen(js_name = capacityBounds)]
pub fn capacity_bounds(eta: f64, n_th: f64, n_bar: Option<f64>) -> Result<Vec<f64>, JsError> {
    calc::capacity_bounds(eta, n_th, n_bar).map_err(js_err)
}

#[wasm_bindgen(js_name = tmsOptimum)]
pub fn tms_optimum(sigma: f64, gkp_db: Option<f64>) -> Result<Vec<f64>, JsError> {
    calc::tms_optimum(sigma, gkp_db).map_err(js_err)
}

//! Shift-noise propagation through GKP error-correction steps and surface
//! stabilizer rounds.
//!
//! Only quadrature shifts are tracked: every gate is a linear map on the
//! shift vector, and every noise source adds Gaussian shifts. Indices in
//! this module are 0-based; data qubit k of [`Layout`] is entry k−1.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::layout::{x_gate_is_sum, Layout};
use crate::noise::{nearest_multiple, normal, remainder_unchecked, NoiseParams, PairSampler};
use crate::SQRT_PI;

/// Quadrature shifts of every mode in the code block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseState {
    pub xi_q_d: Vec<f64>,
    pub xi_p_d: Vec<f64>,
    pub xi_q_a: Vec<f64>,
    pub xi_p_a: Vec<f64>,
    pub xi_q_z: Vec<f64>,
    pub xi_p_z: Vec<f64>,
    pub xi_q_x: Vec<f64>,
    pub xi_p_x: Vec<f64>,
}

impl NoiseState {
    pub fn zeros(d: usize) -> Self {
        let n = d * d;
        let m = (n - 1) / 2;
        Self {
            xi_q_d: vec![0.0; n],
            xi_p_d: vec![0.0; n],
            xi_q_a: vec![0.0; n],
            xi_p_a: vec![0.0; n],
            xi_q_z: vec![0.0; m],
            xi_p_z: vec![0.0; m],
            xi_q_x: vec![0.0; m],
            xi_p_x: vec![0.0; m],
        }
    }

    pub fn all_finite(&self) -> bool {
        [
            &self.xi_q_d,
            &self.xi_p_d,
            &self.xi_q_a,
            &self.xi_p_a,
            &self.xi_q_z,
            &self.xi_p_z,
            &self.xi_q_x,
            &self.xi_p_x,
        ]
        .iter()
        .all(|v| v.iter().all(|x| x.is_finite()))
    }
}

/// Pre-factored gate-noise samplers for one noise setting.
#[derive(Debug, Clone, Copy)]
pub struct Samplers {
    pub noise: NoiseParams,
    /// σ²[[1, 1/2], [1/2, 4/3]] on (data, target) of a SUM whose target gains the data shift.
    fwd: PairSampler,
    /// σ²[[4/3, −1/2], [−1/2, 1]], the mirror image.
    bwd: PairSampler,
    /// σ²[[4/3, 1/2], [1/2, 1]] on the position pair of an X-type SUM.
    xsum_q: PairSampler,
    /// σ²[[1, −1/2], [−1/2, 4/3]] on the momentum pair of an X-type SUM.
    xsum_p: PairSampler,
}

impl Samplers {
    pub fn new(noise: NoiseParams) -> Self {
        let v = noise.sigma * noise.sigma;
        Self {
            noise,
            fwd: PairSampler::new(v, 1.0, 0.5, 4.0 / 3.0),
            bwd: PairSampler::new(v, 4.0 / 3.0, -0.5, 1.0),
            xsum_q: PairSampler::new(v, 4.0 / 3.0, 0.5, 1.0),
            xsum_p: PairSampler::new(v, 1.0, -0.5, 4.0 / 3.0),
        }
    }
}

/// Everything measured in one round (two GKP steps plus one stabilizer round).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// R_√π of each data qubit's position readout (via its GKP ancilla).
    pub analog_q: Vec<f64>,
    /// R_√π of each data qubit's momentum readout.
    pub analog_p: Vec<f64>,
    /// Lattice index the position correction snapped each data qubit to.
    pub frame_q: Vec<i64>,
    /// Lattice index the momentum correction snapped each data qubit to.
    pub frame_p: Vec<i64>,
    /// Z-type stabilizer values; true means −1.
    pub z_flipped: Vec<bool>,
    /// R_√π of each Z-type syndrome readout.
    pub z_analog: Vec<f64>,
    /// X-type stabilizer values; true means −1.
    pub x_flipped: Vec<bool>,
    /// R_√π of each X-type syndrome readout.
    pub x_analog: Vec<f64>,
}

impl RoundRecord {
    pub fn new(n: usize, m: usize) -> Self {
        Self {
            analog_q: vec![0.0; n],
            analog_p: vec![0.0; n],
            frame_q: vec![0; n],
            frame_p: vec![0; n],
            z_flipped: vec![false; m],
            z_analog: vec![0.0; m],
            x_flipped: vec![false; m],
            x_analog: vec![0.0; m],
        }
    }
}

/// Whether GKP step `step` (1 or 2) measures the position stabilizer of data
/// qubit with 0-based index `i` (odd 1-based k in step 1, even k in step 2).
#[inline]
pub fn measures_position(step: usize, i: usize) -> bool {
    (i % 2 == 0) == (step == 1)
}

/// Stabilizer value from a syndrome readout: −1 (true) unless the readout is
/// within √π/2 of an even multiple of √π.
#[inline]
pub fn stabilizer_flipped(readout: f64) -> bool {
    remainder_unchecked(readout, 2.0 * SQRT_PI).abs() > 0.5 * SQRT_PI
}

/// One GKP error-correction step on every data qubit.
///
/// Each data qubit receives preparation noise, couples to a fresh GKP
/// ancilla through a SUM (position measurement) or inverse-SUM (momentum
/// measurement), both modes receive gate and measurement noise, and the data
/// is displaced back by R_√π of the ancilla readout. With `ideal`, no noise is
/// added and ancillas are perfect.
pub fn gkp_round<R: Rng + ?Sized>(
    state: &mut NoiseState,
    samplers: &Samplers,
    rng: &mut R,
    step: usize,
    ideal: bool,
    record: &mut RoundRecord,
) {
    let n = state.xi_q_d.len();
    let s = samplers.noise.sigma;
    let sg = samplers.noise.sigma_gkp;
    for i in 0..n {
        let measq = measures_position(step, i);
        if ideal {
            state.xi_q_a[i] = 0.0;
            state.xi_p_a[i] = 0.0;
        } else {
            state.xi_q_d[i] += normal(rng, s);
            state.xi_p_d[i] += normal(rng, s);
            state.xi_q_a[i] = normal(rng, sg);
            state.xi_p_a[i] = normal(rng, sg);
        }
        if measq {
            state.xi_q_a[i] += state.xi_q_d[i];
            state.xi_p_d[i] -= state.xi_p_a[i];
        } else {
            state.xi_q_d[i] -= state.xi_q_a[i];
            state.xi_p_a[i] += state.xi_p_d[i];
        }
        if !ideal {
            let (gq, gp) = if measq {
                (&samplers.fwd, &samplers.bwd)
            } else {
                (&samplers.bwd, &samplers.fwd)
            };
            let (a, b) = gq.sample(rng);
            state.xi_q_d[i] += a;
            state.xi_q_a[i] += b;
            let (a, b) = gp.sample(rng);
            state.xi_p_d[i] += a;
            state.xi_p_a[i] += b;
            state.xi_q_d[i] += normal(rng, s);
            state.xi_p_d[i] += normal(rng, s);
            state.xi_q_a[i] += normal(rng, s);
            state.xi_p_a[i] += normal(rng, s);
        }
        if measq {
            let r = remainder_unchecked(state.xi_q_a[i], SQRT_PI);
            state.xi_q_d[i] -= r;
            record.analog_q[i] = r;
            record.frame_q[i] = nearest_multiple(state.xi_q_a[i], SQRT_PI);
        } else {
            let r = remainder_unchecked(state.xi_p_a[i], SQRT_PI);
            state.xi_p_d[i] -= r;
            record.analog_p[i] = r;
            record.frame_p[i] = nearest_multiple(state.xi_p_a[i], SQRT_PI);
        }
    }
}

/// The noiseless shift update of gate step `t` (0-based) of a stabilizer
/// round: Z checks gather data position shifts through SUM gates and kick
/// data momenta back; X checks do the conjugate through SUM or inverse-SUM.
/// `busy[i]` is set for every data qubit touched in this step.
pub fn apply_gate_step(state: &mut NoiseState, layout: &Layout, t: usize, busy: &mut [bool]) {
    let sum = x_gate_is_sum(t);
    busy.iter_mut().for_each(|b| *b = false);
    for l in 0..state.xi_q_z.len() {
        let k = layout.z_steps[t][l];
        if k != 0 {
            let i = k - 1;
            state.xi_q_z[l] += state.xi_q_d[i];
            state.xi_p_d[i] -= state.xi_p_z[l];
            busy[i] = true;
        }
        let k = layout.x_steps[t][l];
        if k != 0 {
            let i = k - 1;
            if sum {
                state.xi_q_d[i] += state.xi_q_x[l];
                state.xi_p_x[l] -= state.xi_p_d[i];
            } else {
                state.xi_q_d[i] -= state.xi_q_x[l];
                state.xi_p_x[l] += state.xi_p_d[i];
            }
            busy[i] = true;
        }
    }
}

/// One round of surface-code stabilizer measurements (four gate steps).
///
/// Syndrome modes are freshly prepared GKP states; Z-type checks gather data
/// position shifts via SUM gates, X-type checks gather data momentum shifts
/// via SUM / inverse-SUM gates. Idle modes receive σ² per step, and every
/// mode receives measurement noise at the end.
pub fn surface_round<R: Rng + ?Sized>(
    state: &mut NoiseState,
    samplers: &Samplers,
    layout: &Layout,
    rng: &mut R,
    ideal: bool,
    record: &mut RoundRecord,
) {
    let n = state.xi_q_d.len();
    let m = state.xi_q_z.len();
    let s = samplers.noise.sigma;
    let sg = samplers.noise.sigma_gkp;
    if ideal {
        for l in 0..m {
            state.xi_q_z[l] = 0.0;
            state.xi_p_z[l] = 0.0;
            state.xi_q_x[l] = 0.0;
            state.xi_p_x[l] = 0.0;
        }
    } else {
        for i in 0..n {
            state.xi_q_d[i] += normal(rng, s);
            state.xi_p_d[i] += normal(rng, s);
        }
        for l in 0..m {
            state.xi_q_z[l] = normal(rng, sg);
            state.xi_p_z[l] = normal(rng, sg);
            state.xi_q_x[l] = normal(rng, sg);
            state.xi_p_x[l] = normal(rng, sg);
        }
    }
    let mut busy = vec![false; n];
    for t in 0..4 {
        let sum = x_gate_is_sum(t);
        apply_gate_step(state, layout, t, &mut busy);
        if ideal {
            continue;
        }
        for l in 0..m {
            let k = layout.z_steps[t][l];
            if k != 0 {
                let i = k - 1;
                let (a, b) = samplers.fwd.sample(rng);
                state.xi_q_d[i] += a;
                state.xi_q_z[l] += b;
                let (a, b) = samplers.bwd.sample(rng);
                state.xi_p_d[i] += a;
                state.xi_p_z[l] += b;
            } else {
                state.xi_q_z[l] += normal(rng, s);
                state.xi_p_z[l] += normal(rng, s);
            }
            let k = layout.x_steps[t][l];
            if k != 0 {
                let i = k - 1;
                let (gq, gp) = if sum {
                    (&samplers.xsum_q, &samplers.xsum_p)
                } else {
                    (&samplers.bwd, &samplers.fwd)
                };
                let (a, b) = gq.sample(rng);
                state.xi_q_d[i] += a;
                state.xi_q_x[l] += b;
                let (a, b) = gp.sample(rng);
                state.xi_p_d[i] += a;
                state.xi_p_x[l] += b;
            } else {
                state.xi_q_x[l] += normal(rng, s);
                state.xi_p_x[l] += normal(rng, s);
            }
        }
        for i in 0..n {
            if !busy[i] {
                state.xi_q_d[i] += normal(rng, s);
                state.xi_p_d[i] += normal(rng, s);
            }
        }
    }
    if !ideal {
        for i in 0..n {
            state.xi_q_d[i] += normal(rng, s);
            state.xi_p_d[i] += normal(rng, s);
        }
        for l in 0..m {
            state.xi_q_z[l] += normal(rng, s);
            state.xi_p_z[l] += normal(rng, s);
            state.xi_q_x[l] += normal(rng, s);
            state.xi_p_x[l] += normal(rng, s);
        }
    }
    for l in 0..m {
        let qz = state.xi_q_z[l];
        record.z_flipped[l] = stabilizer_flipped(qz);
        record.z_analog[l] = remainder_unchecked(qz, SQRT_PI);
        let px = state.xi_p_x[l];
        record.x_flipped[l] = stabilizer_flipped(px);
        record.x_analog[l] = remainder_unchecked(px, SQRT_PI);
    }
}

/// Runs `noisy_rounds` noisy rounds followed by one ideal round from a
/// noiseless start, returning the per-round records and the final state.
pub fn simulate_rounds<R: Rng + ?Sized>(
    layout: &Layout,
    samplers: &Samplers,
    noisy_rounds: usize,
    rng: &mut R,
) -> (Vec<RoundRecord>, NoiseState) {
    let n = layout.data_count();
    let m = layout.check_count();
    let mut state = NoiseState::zeros(layout.d);
    let mut records = Vec::with_capacity(noisy_rounds + 1);
    for r in 0..=noisy_rounds {
        let ideal = r == noisy_rounds;
        let mut rec = RoundRecord::new(n, m);
        gkp_round(&mut state, samplers, rng, 1, ideal, &mut rec);
        gkp_round(&mut state, samplers, rng, 2, ideal, &mut rec);
        surface_round(&mut state, samplers, layout, rng, ideal, &mut rec);
        records.push(rec);
    }
    (records, state)
}

/// Σ_k ξ_k/√π rounded to an integer, or `None` if it is not within 1e-6 of one.
pub fn integer_total(shifts: &[f64]) -> Option<i64> {
    let t: f64 = shifts.iter().sum::<f64>() / SQRT_PI;
    let r = t.round();
    if (t - r).abs() <= 1e-6 {
        Some(r as i64)
    } else {
        None
    }
}

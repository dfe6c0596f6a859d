//! Oscillator-into-oscillators encoding with GKP ancillas, and the linear
//! algebra of cubic-phase-state distillation.

pub mod distill;
pub mod magic;
pub mod tms;

pub use distill::{
    check_triorthogonal, distillation_output_variance, nogo_witness, DistillationResult,
    TriorthogonalMatrix, TriorthogonalityReport, TripleViolation,
};
pub use magic::{magic_variance, magic_variance_bound, saturating_state, GaussianStateMoments};
pub use tms::{
    critical_gkp_squeezing_db, critical_sigma, max_qec_gain, reshape_noise, s_ts, s_ts_inverse,
    tms_logical_variance, tms_logical_variance_finite_gkp,
    tms_logical_variance_finite_gkp_quadrature, tms_monte_carlo, tms_optimize_gain,
    tms_optimize_gain_finite_gkp, TmsCodeConfig, TmsMonteCarlo,
};

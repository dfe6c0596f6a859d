//! Circuit-level Monte Carlo of the surface-GKP code.
//!
//! A trial runs d noisy rounds and one ideal round. Each round corrects
//! every data GKP qubit (position and momentum, in two checkerboard steps)
//! and then measures all surface-code stabilizers. The records feed two
//! space-time graphs whose edges are weighted by the likelihood of a Pauli
//! error given the analog GKP readouts; minimum-weight perfect matching
//! yields the correction, and the parities of the total data shifts give
//! the logical error.

pub mod decode;
pub mod graph;
pub mod layout;
pub mod monte_carlo;
pub mod sigma;
pub mod sim;
pub mod threshold;

pub use decode::{correction_for, decode_and_score, TrialResult};
pub use graph::{build_graph, edge_weight, DecodingGraph, EdgeKind, SpaceTimeGraph};
pub use layout::Layout;
pub use monte_carlo::{
    monte_carlo, LogicalCounts, MonteCarloResult, Rate, SurfaceGkpConfig, SurfaceSimulator,
};
pub use sigma::{CheckType, VarianceCoeffs};
pub use sim::{
    apply_gate_step, gkp_round, simulate_rounds, surface_round, NoiseState, RoundRecord, Samplers,
};
pub use threshold::{threshold_scan, PairCrossing, ThresholdCase, ThresholdReport};

//! Numerical toolkit for Gottesman-Kitaev-Preskill (GKP) bosonic error correction.
//!
//! The crate is organised by topic:
//!
//! * [`noise`] and [`channel`] — shift-noise primitives, comb probabilities and
//!   Gaussian-channel moment bookkeeping shared by everything else.
//! * [`lattice`] — single- and two-mode GKP lattice codes, closest-vector
//!   decoding and analytic failure probabilities.
//! * [`matching`] — shortest paths and exact minimum-weight perfect matching.
//! * [`surface`] — circuit-level Monte Carlo of the surface-GKP code with
//!   analog-information-weighted matching, plus threshold scans.
//! * [`capacity`] — closed-form quantum-capacity bounds for thermal-loss
//!   channels and achievable GKP rates.
//! * [`osc`] — the GKP two-mode-squeezing oscillator code and cubic-phase
//!   distillation algebra.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod lattice;
pub mod matching;
pub mod noise;
pub mod numeric;
pub mod osc;
pub mod rng;
pub mod surface;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};

/// A single-qubit Pauli label, used for logical-error classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Z,
    Y,
}

impl Pauli {
    /// Label from the parities of the position (X) and momentum (Z) shifts.
    pub fn from_parities(x_odd: bool, z_odd: bool) -> Self {
        match (x_odd, z_odd) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }
}

impl std::fmt::Display for Pauli {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Z => "Z",
            Pauli::Y => "Y",
        };
        f.write_str(s)
    }
}

/// √π, the GKP qubit lattice spacing.
pub const SQRT_PI: f64 = 1.772_453_850_905_516;
/// √(2π), the period of the canonical GKP stabilizers.
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

//! Geometry of the rotated distance-d surface code and the four-step
//! schedule of syndrome-extraction gates.
//!
//! Data qubits sit on a d×d grid and are numbered row-major from 1:
//! k = (r−1)·d + c. A plaquette P(i, j), 0 ≤ i, j ≤ d, touches the data at
//! grid corners a = (i, j), b = (i, j+1), c = (i+1, j), d = (i+1, j+1), with
//! corners outside the grid absent.
//!
//! * Z-type checks are the plaquettes with 1 ≤ i ≤ d−1 and i+j odd,
//!   numbered row-major. They couple to corners in the order (b, d, a, c).
//! * X-type checks are the plaquettes with 1 ≤ j ≤ d−1 and i+j even,
//!   numbered column-major. They couple in the order (b, a, d, c), using SUM
//!   gates in the first and last step and inverse-SUM gates in the middle two.
//!
//! With these orders no data qubit is touched twice in one step, and a shift
//! on an X-type syndrome mode cancels out of every Z-type readout.

use crate::error::{domain, Result};

/// Connectivity of one syndrome-extraction cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub d: usize,
    /// Data qubits touched by each Z-type check, as corners (a, b, c, d); 0 = absent.
    pub z_checks: Vec<[usize; 4]>,
    /// Data qubits touched by each X-type check, as corners (a, b, c, d); 0 = absent.
    pub x_checks: Vec<[usize; 4]>,
    /// `z_steps[t][l]`: data coupled to Z check l in gate step t (0 = idle).
    pub z_steps: [Vec<usize>; 4],
    /// `x_steps[t][l]`: data coupled to X check l in gate step t (0 = idle).
    pub x_steps: [Vec<usize>; 4],
    /// Z checks (0-based) containing each data qubit (index k−1).
    pub z_of_data: Vec<Vec<usize>>,
    /// X checks (0-based) containing each data qubit (index k−1).
    pub x_of_data: Vec<Vec<usize>>,
}

/// Corner indices into [a, b, c, d] for each gate step.
const Z_ORDER: [usize; 4] = [1, 3, 0, 2];
const X_ORDER: [usize; 4] = [1, 0, 3, 2];

/// Whether the X-type gate in step t (0-based) is a SUM (true) or an
/// inverse-SUM (false).
pub fn x_gate_is_sum(t: usize) -> bool {
    t == 0 || t == 3
}

impl Layout {
    pub fn new(d: usize) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return domain(format!("code distance must be odd and >= 3, got {d}"));
        }
        let idx = |r: usize, c: usize| {
            if (1..=d).contains(&r) && (1..=d).contains(&c) {
                (r - 1) * d + c
            } else {
                0
            }
        };
        let corners =
            |i: usize, j: usize| [idx(i, j), idx(i, j + 1), idx(i + 1, j), idx(i + 1, j + 1)];
        let mut z_checks = Vec::new();
        for i in 1..d {
            for j in 0..=d {
                if (i + j) % 2 == 1 {
                    z_checks.push(corners(i, j));
                }
            }
        }
        let mut x_checks = Vec::new();
        for j in 1..d {
            for i in 0..=d {
                if (i + j) % 2 == 0 {
                    x_checks.push(corners(i, j));
                }
            }
        }
        let steps = |checks: &[[usize; 4]], order: &[usize; 4]| -> [Vec<usize>; 4] {
            std::array::from_fn(|t| checks.iter().map(|c| c[order[t]]).collect())
        };
        let z_steps = steps(&z_checks, &Z_ORDER);
        let x_steps = steps(&x_checks, &X_ORDER);
        let membership = |checks: &[[usize; 4]]| {
            let mut of = vec![Vec::new(); d * d];
            for (l, c) in checks.iter().enumerate() {
                for &k in c.iter().filter(|&&k| k != 0) {
                    of[k - 1].push(l);
                }
            }
            of
        };
        let z_of_data = membership(&z_checks);
        let x_of_data = membership(&x_checks);
        Ok(Self {
            d,
            z_checks,
            x_checks,
            z_steps,
            x_steps,
            z_of_data,
            x_of_data,
        })
    }

    pub fn data_count(&self) -> usize {
        self.d * self.d
    }

    /// Number of checks of each type, (d²−1)/2.
    pub fn check_count(&self) -> usize {
        (self.d * self.d - 1) / 2
    }

    /// Data qubit coupled to Z check `l` (1-based) in gate step `t` (1..=4); 0 if idle.
    pub fn z_coupling(&self, t: usize, l: usize) -> usize {
        self.z_steps[t - 1][l - 1]
    }

    /// Data qubit coupled to X check `l` (1-based) in gate step `t` (1..=4); 0 if idle.
    pub fn x_coupling(&self, t: usize, l: usize) -> usize {
        self.x_steps[t - 1][l - 1]
    }

    /// Data qubits (1-based) of Z check `l` (0-based).
    pub fn z_support(&self, l: usize) -> Vec<usize> {
        self.z_checks[l]
            .iter()
            .copied()
            .filter(|&k| k != 0)
            .collect()
    }

    /// Data qubits (1-based) of X check `l` (0-based).
    pub fn x_support(&self, l: usize) -> Vec<usize> {
        self.x_checks[l]
            .iter()
            .copied()
            .filter(|&k| k != 0)
            .collect()
    }
}

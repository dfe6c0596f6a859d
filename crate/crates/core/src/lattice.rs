//! GKP codes defined by a lattice of stabilizer displacements.
//!
//! Quadratures are ordered in blocks, x = (q₁…q_N, p₁…p_N), with the
//! symplectic form Ω = [[0, I], [−I, 0]]. A code is given by its generator
//! matrix S: a shift ξ produces the syndrome Sξ mod √(2π), and the shifts
//! that commute with every stabilizer form the decoding lattice √(2π)·S⁻¹ℤ²ᴺ.
//! In lattice coordinates n the stabilizer sublattice is A·ℤ²ᴺ with
//! A = SΩSᵀ, so logical classes are residues of n modulo A.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::noise::{p_err, p_err_asymptotic, ShiftVector};
use crate::{Pauli, SQRT_2PI};

const INTEGER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GkpLatticeCode {
    s: DMatrix<f64>,
    s_inv: DMatrix<f64>,
    decoding_lattice: DMatrix<f64>,
    logical_dims: Vec<u64>,
}

/// Logical action of a residual lattice displacement on one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogicalResidual {
    Qubit(Pauli),
    /// (n_q mod d, n_p mod d) for a qudit of dimension d.
    Qudit(u64, u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    /// Shift estimated by the closest-vector decoder.
    pub estimated_shift: ShiftVector,
    /// Integer coordinates n* of the residual lattice displacement.
    pub lattice_coords: Vec<i64>,
    pub residual_logical: Vec<LogicalResidual>,
}

/// Block-ordered symplectic form for `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut o = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        o[(k, modes + k)] = 1.0;
        o[(modes + k, k)] = -1.0;
    }
    o
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() <= INTEGER_TOL
}

impl GkpLatticeCode {
    /// Builds and validates a code from its stabilizer generator matrix.
    pub fn new(s: DMatrix<f64>) -> Result<Self> {
        let dim = s.nrows();
        if dim == 0 || dim % 2 != 0 || s.ncols() != dim {
            return Err(Error::Dimension("generator matrix must be 2N×2N".into()));
        }
        if s.iter().any(|x| !x.is_finite()) {
            return domain("generator matrix entries must be finite");
        }
        let modes = dim / 2;
        let a = &s * symplectic_form(modes) * s.transpose();
        let mut dims = Vec::with_capacity(modes);
        if modes == 1 {
            let det = s.determinant();
            if !is_integer(det) {
                return Err(Error::Invalid(format!("det(S) = {det} is not an integer")));
            }
            if det.round() < 1.0 {
                return Err(Error::Invalid(format!(
                    "det(S) = {det} must be a positive integer"
                )));
            }
            dims.push(det.round() as u64);
        } else {
            if let Some(x) = a.iter().find(|x| !is_integer(**x)) {
                return Err(Error::Invalid(format!("S·Ω·Sᵀ has non-integer entry {x}")));
            }
            // Only the standard form [[0, D], [−D, 0]] with D diagonal is accepted.
            for i in 0..dim {
                for j in 0..dim {
                    let expected_nonzero =
                        (i < modes && j == i + modes) || (i >= modes && j + modes == i);
                    if !expected_nonzero && a[(i, j)].abs() > INTEGER_TOL {
                        return Err(Error::Unsupported(
                            "S·Ω·Sᵀ is not in standard form [[0, D], [−D, 0]]".into(),
                        ));
                    }
                }
            }
            for k in 0..modes {
                let d = a[(k, modes + k)].round();
                if d < 1.0 {
                    return Err(Error::Invalid(format!(
                        "logical dimension of mode {k} is {d}"
                    )));
                }
                dims.push(d as u64);
            }
        }
        let s_inv = s
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Invalid("generator matrix is singular".into()))?;
        let decoding_lattice = &s_inv * SQRT_2PI;
        Ok(Self {
            s,
            s_inv,
            decoding_lattice,
            logical_dims: dims,
        })
    }

    /// Square-lattice code of logical dimension d: S = √d·I₂.
    pub fn square(d: u64) -> Result<Self> {
        if d < 1 {
            return domain("logical dimension must be >= 1");
        }
        Self::new(DMatrix::identity(2, 2) * (d as f64).sqrt())
    }

    /// Hexagonal-lattice code of logical dimension d.
    pub fn hexagonal(d: u64) -> Result<Self> {
        if d < 1 {
            return domain("logical dimension must be >= 1");
        }
        let c = (d as f64).sqrt() * (2.0 / 3f64.sqrt()).sqrt();
        Self::new(DMatrix::from_row_slice(
            2,
            2,
            &[c, 0.0, 0.5 * c, 0.5 * 3f64.sqrt() * c],
        ))
    }

    /// Parses a code from text: one whitespace-separated row of S per line,
    /// optional `dims = d1 d2 …` line checked against the derived dimensions,
    /// `#` comments.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut dims: Option<Vec<u64>> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("dims") {
                let rest = rest.trim_start().trim_start_matches('=').trim();
                let parsed: std::result::Result<Vec<u64>, _> =
                    rest.split_whitespace().map(str::parse).collect();
                dims = Some(parsed.map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?);
                continue;
            }
            let row: std::result::Result<Vec<f64>, _> =
                line.split_whitespace().map(str::parse).collect();
            rows.push(row.map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?);
        }
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(
                "generator matrix must be square and non-empty".into(),
            ));
        }
        let code = Self::new(DMatrix::from_row_slice(n, n, &rows.concat()))?;
        if let Some(d) = dims {
            if d != code.logical_dims {
                return Err(Error::Invalid(format!(
                    "declared dims {d:?} differ from derived dims {:?}",
                    code.logical_dims
                )));
            }
        }
        Ok(code)
    }

    pub fn mode_count(&self) -> usize {
        self.s.nrows() / 2
    }

    pub fn logical_dims(&self) -> &[u64] {
        &self.logical_dims
    }

    pub fn generator(&self) -> &DMatrix<f64> {
        &self.s
    }

    /// √(2π)·S⁻¹; its columns generate the undetectable shifts.
    pub fn decoding_lattice(&self) -> &DMatrix<f64> {
        &self.decoding_lattice
    }

    /// Syndrome value S·ξ (not reduced modulo √(2π)).
    pub fn syndrome(&self, shift: &ShiftVector) -> Result<Vec<f64>> {
        let x = self.block_vector(shift)?;
        Ok((&self.s * x).iter().copied().collect())
    }

    fn block_vector(&self, shift: &ShiftVector) -> Result<nalgebra::DVector<f64>> {
        if shift.mode_count() != self.mode_count() {
            return Err(Error::Dimension("shift and code mode counts differ".into()));
        }
        Ok(nalgebra::DVector::from_iterator(
            2 * self.mode_count(),
            shift.q.iter().chain(shift.p.iter()).copied(),
        ))
    }

    /// Half the length of the shortest nonzero decoding-lattice vector.
    pub fn correctable_radius(&self) -> Result<f64> {
        let dim = self.s.nrows();
        let width: i64 = match self.mode_count() {
            1 | 2 => 5,
            3 | 4 => 2,
            _ => {
                return Err(Error::Unsupported(
                    "radius enumeration supports at most 4 modes".into(),
                ))
            }
        };
        let mut best = f64::INFINITY;
        for_each_in_box(&vec![0; dim], width, |n| {
            if n.iter().all(|&x| x == 0) {
                return;
            }
            let v = &self.decoding_lattice * int_vector(n);
            best = best.min(v.norm());
        });
        Ok(0.5 * best)
    }

    /// Closest-vector decoding of a syndrome value.
    ///
    /// Given z = S·ξ, returns the estimate ξ̄ = S⁻¹z − √(2π)S⁻¹n* for the
    /// integer vector n* minimising |ξ̄|. When z is the unreduced value, ξ − ξ̄
    /// is the lattice displacement √(2π)S⁻¹n* and the logical labels describe
    /// the residual error; for a syndrome already reduced modulo √(2π) only
    /// the estimate is physically meaningful.
    pub fn closest_vector_decode(&self, syndrome_z: &[f64]) -> Result<DecodeOutcome> {
        if self.mode_count() > 2 {
            return Err(Error::Unsupported(
                "closest-vector search supports at most 2 modes".into(),
            ));
        }
        self.decode_with_window(syndrome_z, 3)
    }

    /// Exhaustive search over the integer box of half-width `width` around the
    /// rounded target; exposed for brute-force cross-checks.
    pub fn decode_with_window(&self, syndrome_z: &[f64], width: i64) -> Result<DecodeOutcome> {
        let dim = self.s.nrows();
        if syndrome_z.len() != dim {
            return Err(Error::Dimension(format!(
                "syndrome has {} entries, need {dim}",
                syndrome_z.len()
            )));
        }
        if syndrome_z.iter().any(|x| !x.is_finite()) {
            return domain("syndrome entries must be finite");
        }
        let t: Vec<f64> = syndrome_z.iter().map(|z| z / SQRT_2PI).collect();
        let centre: Vec<i64> = t.iter().map(|x| x.round() as i64).collect();
        let mut best = (f64::INFINITY, centre.clone());
        for_each_in_box(&centre, width, |n| {
            let diff = nalgebra::DVector::from_iterator(
                dim,
                t.iter().zip(n).map(|(&ti, &ni)| ti - ni as f64),
            );
            let len = (&self.decoding_lattice * diff).norm_squared();
            if len < best.0 {
                best = (len, n.to_vec());
            }
        });
        let n_star = best.1;
        let z = nalgebra::DVector::from_column_slice(syndrome_z);
        let est = &self.s_inv * z - &self.decoding_lattice * int_vector(&n_star);
        let modes = self.mode_count();
        let estimated_shift = ShiftVector {
            q: est.iter().take(modes).copied().collect(),
            p: est.iter().skip(modes).copied().collect(),
        };
        Ok(DecodeOutcome {
            estimated_shift,
            residual_logical: self.classify(&n_star),
            lattice_coords: n_star,
        })
    }

    /// Logical label per mode of the lattice displacement √(2π)S⁻¹n.
    pub fn classify(&self, n: &[i64]) -> Vec<LogicalResidual> {
        let modes = self.mode_count();
        (0..modes)
            .map(|k| {
                let d = self.logical_dims[k];
                let nq = n[k].rem_euclid(d as i64) as u64;
                let np = n[modes + k].rem_euclid(d as i64) as u64;
                if d == 2 {
                    LogicalResidual::Qubit(Pauli::from_parities(nq == 1, np == 1))
                } else {
                    LogicalResidual::Qudit(nq, np)
                }
            })
            .collect()
    }
}

fn int_vector(n: &[i64]) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_iterator(n.len(), n.iter().map(|&x| x as f64))
}

/// Calls `f` on every integer vector within `width` of `centre` (max norm).
fn for_each_in_box<F: FnMut(&[i64])>(centre: &[i64], width: i64, mut f: F) {
    let dim = centre.len();
    let mut offset = vec![-width; dim];
    let mut n = vec![0i64; dim];
    loop {
        for i in 0..dim {
            n[i] = centre[i] + offset[i];
        }
        f(&n);
        let mut i = 0;
        loop {
            if i == dim {
                return;
            }
            offset[i] += 1;
            if offset[i] <= width {
                break;
            }
            offset[i] = -width;
            i += 1;
        }
    }
}

/// Failure probability of the square qubit code under independent Gaussian
/// shifts of standard deviation `sigma` in both quadratures.
///
/// `exact` sums the odd-cell Gaussian mass; otherwise the small-σ asymptote
/// (√32·σ/π)·exp(−π/(8σ²)) is returned.
pub fn square_failure_probability(sigma: f64, exact: bool) -> Result<f64> {
    if !(sigma > 0.0) {
        return domain(format!("sigma must be positive, got {sigma}"));
    }
    if exact {
        let p = p_err(sigma)?;
        Ok(p * (2.0 - p))
    } else {
        Ok(2.0 * p_err_asymptotic(sigma))
    }
}

/// Upper bound exp(−r_c²/(2σ²)) on the failure probability of `code`.
pub fn failure_bound(code: &GkpLatticeCode, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return domain(format!("sigma must be positive, got {sigma}"));
    }
    let r = code.correctable_radius()?;
    Ok((-r * r / (2.0 * sigma * sigma)).exp())
}

/// [`failure_bound`] for loss probability γ after amplification decoding,
/// i.e. at σ² = γ/(1−γ).
pub fn loss_error_bound(code: &GkpLatticeCode, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return domain(format!("loss probability must be in (0, 1), got {gamma}"));
    }
    failure_bound(code, (gamma / (1.0 - gamma)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_integer_determinant_is_rejected() {
        assert!(GkpLatticeCode::new(DMatrix::identity(2, 2) * 1.3).is_err());
    }

    #[test]
    fn two_mode_square_code_has_qubit_dims() {
        let code = GkpLatticeCode::new(DMatrix::identity(4, 4) * 2f64.sqrt()).unwrap();
        assert_eq!(code.logical_dims(), &[2, 2]);
    }

    #[test]
    fn non_standard_form_is_rejected() {
        // Mixing q₁ into q₂ gives a valid lattice that is not in standard form.
        let mut s = DMatrix::identity(4, 4) * 2f64.sqrt();
        s[(1, 0)] = 2f64.sqrt();
        assert!(matches!(GkpLatticeCode::new(s), Err(Error::Unsupported(_))));
    }

    #[test]
    fn text_loader_validates_dims() {
        let txt = "# square qubit\n1.4142135623730951 0\n0 1.4142135623730951\ndims = 2\n";
        assert!(GkpLatticeCode::from_text(txt).is_ok());
        assert!(GkpLatticeCode::from_text(&txt.replace("dims = 2", "dims = 3")).is_err());
        assert!(GkpLatticeCode::from_text("1 2 3\n4 5\n").is_err());
    }
}

//! Linear algebra of cubic-phase-state distillation through a Gaussian
//! encoder: triorthogonality checks, the optimal output variance and the
//! single-protected-mode no-go witness.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const TOL: f64 = 1e-9;

/// A violated triple sum Σⱼ A_ja·A_jb·A_jc (0-based column indices).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleViolation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub value: f64,
    pub expected: f64,
}

/// Outcome of a triorthogonality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriorthogonalityReport {
    pub rows: usize,
    pub cols: usize,
    pub k: usize,
    pub full_rank: bool,
    pub violations: Vec<TripleViolation>,
}

impl TriorthogonalityReport {
    pub fn is_valid(&self) -> bool {
        self.full_rank && self.violations.is_empty()
    }
}

/// Checks all m³ triple sums of an n×m matrix and its column rank: the sum
/// must be 1 on (a, a, a) for a < k and 0 everywhere else.
pub fn check_triorthogonal(a_bar: &DMatrix<f64>, k: usize) -> Result<TriorthogonalityReport> {
    let (n, m) = a_bar.shape();
    if !(n >= m && m >= k && k >= 1) {
        return Err(Error::Dimension(format!(
            "need n >= m >= k >= 1, got n={n}, m={m}, k={k}"
        )));
    }
    if a_bar.iter().any(|x| !x.is_finite()) {
        return domain("matrix entries must be finite");
    }
    let mut violations = Vec::new();
    for a in 0..m {
        for b in a..m {
            for c in b..m {
                let value: f64 = (0..n)
                    .map(|j| a_bar[(j, a)] * a_bar[(j, b)] * a_bar[(j, c)])
                    .sum();
                let expected = if a == b && b == c && a < k { 1.0 } else { 0.0 };
                if (value - expected).abs() > TOL {
                    violations.push(TripleViolation {
                        a,
                        b,
                        c,
                        value,
                        expected,
                    });
                }
            }
        }
    }
    let full_rank = a_bar.clone().svd(false, false).rank(TOL) == m;
    Ok(TriorthogonalityReport {
        rows: n,
        cols: m,
        k,
        full_rank,
        violations,
    })
}

/// A validated (n, m, k)-triorthogonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TriorthogonalMatrix {
    a_bar: DMatrix<f64>,
    k: usize,
}

impl TriorthogonalMatrix {
    pub fn new(a_bar: DMatrix<f64>, k: usize) -> Result<Self> {
        let report = check_triorthogonal(&a_bar, k)?;
        if !report.full_rank {
            return Err(Error::Invalid("matrix is not full column rank".into()));
        }
        if let Some(v) = report.violations.first() {
            return Err(Error::Invalid(format!(
                "triple ({}, {}, {}) sums to {} instead of {} ({} violations)",
                v.a + 1,
                v.b + 1,
                v.c + 1,
                v.value,
                v.expected,
                report.violations.len()
            )));
        }
        Ok(Self { a_bar, k })
    }

    /// The (15, 5, 1) matrix obtained from the punctured Reed-Muller code by
    /// assigning signs to its rows.
    pub fn reed_muller_15() -> Self {
        #[rustfmt::skip]
        let rows: [[f64; 5]; 15] = [
            [1., 1., 0., 0., 0.],
            [1., 0., 1., 0., 0.],
            [-1., -1., -1., 0., 0.],
            [1., 0., 0., 1., 0.],
            [-1., -1., 0., -1., 0.],
            [-1., 0., -1., -1., 0.],
            [1., 1., 1., 1., 0.],
            [1., 0., 0., 0., 1.],
            [-1., -1., 0., 0., -1.],
            [-1., 0., -1., 0., -1.],
            [1., 1., 1., 0., 1.],
            [-1., 0., 0., -1., -1.],
            [1., 1., 0., 1., 1.],
            [1., 0., 1., 1., 1.],
            [-1., -1., -1., -1., -1.],
        ];
        let a = DMatrix::from_fn(15, 5, |i, j| rows[i][j]);
        Self::new(a, 1).expect("the signed Reed-Muller matrix is triorthogonal")
    }

    /// Parses whitespace- or comma-separated rows. Blank lines and text after
    /// `#` are ignored; an optional `k = <int>` line sets the protected count
    /// (default 1).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut k = 1usize;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((key, val)) = line.split_once('=') {
                if key.trim() == "k" {
                    k = val
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad k value: {val:?}")))?;
                    continue;
                }
                return Err(Error::Parse(format!("unknown setting: {line:?}")));
            }
            let row = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad matrix entry: {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse("matrix has no rows".into()));
        }
        let m = rows[0].len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Parse("rows have different lengths".into()));
        }
        let n = rows.len();
        Self::new(DMatrix::from_fn(n, m, |i, j| rows[i][j]), k)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a_bar
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn shape(&self) -> (usize, usize) {
        self.a_bar.shape()
    }
}

/// Optimal output variance and the coefficients that achieve it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistillationResult {
    pub sigma_sq: f64,
    pub coefficients: Vec<f64>,
}

/// Output variance Σ² = V_ul − V_llᵀ·V_lr⁻¹·V_ll of the best linear
/// correction of the protected mode, where V = σ²·ĀᵀĀ is split into the
/// protected (first) index and the rest. Only k = 1 is supported.
pub fn distillation_output_variance(
    code: &TriorthogonalMatrix,
    sigma: f64,
) -> Result<DistillationResult> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return domain(format!("sigma must be positive, got {sigma}"));
    }
    if code.k != 1 {
        return Err(Error::Unsupported(format!(
            "output variance needs k = 1, got k = {}",
            code.k
        )));
    }
    let v = code.a_bar.transpose() * &code.a_bar * (sigma * sigma);
    let m = v.nrows();
    let v_ul = v[(0, 0)];
    if m == 1 {
        return Ok(DistillationResult {
            sigma_sq: v_ul,
            coefficients: Vec::new(),
        });
    }
    let v_ll: DVector<f64> = v.view((1, 0), (m - 1, 1)).column(0).into_owned();
    let v_lr = v.view((1, 1), (m - 1, m - 1)).into_owned();
    let chol = v_lr
        .cholesky()
        .ok_or_else(|| Error::Numeric("lower-right covariance block is singular".into()))?;
    let c = chol.solve(&v_ll);
    let sigma_sq = v_ul - v_ll.dot(&c);
    Ok(DistillationResult {
        sigma_sq,
        coefficients: c.iter().copied().collect(),
    })
}

/// Σᵢvᵢ² for a vector normalised to Σᵢvᵢ³ = 1; always ≥ 1, which rules out
/// variance reduction with a single protected mode.
pub fn nogo_witness(v: &[f64]) -> Result<f64> {
    let cubes: f64 = v.iter().map(|x| x * x * x).sum();
    if (cubes - 1.0).abs() >= TOL || v.iter().any(|x| !x.is_finite()) {
        return domain(format!("vector must satisfy sum of cubes = 1, got {cubes}"));
    }
    Ok(v.iter().map(|x| x * x).sum())
}

//! Small numerical helpers: golden-section search and Gauss-Legendre quadrature.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimises a unimodal `f` on [a, b] to within `tol` in the argument.
/// Returns (x_min, f(x_min)).
pub fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Maximises `f` on [a, b]: scan `grid` points, then refine around the best
/// `starts` grid maxima with golden section. Returns (x_max, f(x_max)).
pub fn grid_then_golden_max<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    grid: usize,
    starts: usize,
    tol: f64,
) -> (f64, f64) {
    let h = (b - a) / (grid - 1) as f64;
    let mut vals: Vec<(usize, f64)> = (0..grid).map(|i| (i, f(a + h * i as f64))).collect();
    // Local maxima of the sampled curve, best first.
    let mut peaks: Vec<(usize, f64)> = vals
        .iter()
        .copied()
        .filter(|&(i, v)| (i == 0 || vals[i - 1].1 <= v) && (i + 1 == grid || vals[i + 1].1 <= v))
        .collect();
    if peaks.is_empty() {
        vals.sort_by(|x, y| y.1.total_cmp(&x.1));
        peaks.push(vals[0]);
    }
    peaks.sort_by(|x, y| y.1.total_cmp(&x.1));
    let mut best = (a + h * peaks[0].0 as f64, peaks[0].1);
    for &(i, _) in peaks.iter().take(starts) {
        let lo = (a + h * (i as f64 - 1.0)).max(a);
        let hi = (a + h * (i as f64 + 1.0)).min(b);
        let (x, fx) = golden_section_min(|x| -f(x), lo, hi, tol);
        if -fx > best.1 {
            best = (x, -fx);
        }
    }
    best
}

/// Finds a root of `f` in [a, b] by bisection; f(a) and f(b) must differ in sign.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Numeric(format!("no sign change on [{a}, {b}]")));
    }
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Gauss-Legendre nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `n` points, nodes found by Newton iteration on Pₙ.
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// ∫ₐᵇ f.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Adaptive Gauss-Legendre: bisect until a panel's 20-point and 40-point
/// estimates agree within `tol` (scaled by the panel's share of the interval).
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let coarse = GaussLegendre::new(20);
    let fine = GaussLegendre::new(40);
    // Start from a few panels so a narrow feature cannot hide between the
    // nodes of both rules on the first pass.
    const PANELS: usize = 8;
    let h = (b - a) / PANELS as f64;
    let mut total = 0.0;
    for i in 0..PANELS {
        let lo = a + h * i as f64;
        let hi = if i + 1 == PANELS { b } else { lo + h };
        total += adaptive_inner(f, lo, hi, tol / PANELS as f64, &coarse, &fine, 0)?;
    }
    Ok(total)
}

fn adaptive_inner<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    coarse: &GaussLegendre,
    fine: &GaussLegendre,
    depth: usize,
) -> Result<f64> {
    let i1 = coarse.integrate(f, a, b);
    let i2 = fine.integrate(f, a, b);
    if !i2.is_finite() {
        return Err(Error::Numeric(
            "integrand produced a non-finite value".into(),
        ));
    }
    if (i1 - i2).abs() <= tol {
        return Ok(i2);
    }
    if depth >= 40 {
        return Err(Error::Numeric(format!(
            "quadrature failed to converge on [{a}, {b}]"
        )));
    }
    let m = 0.5 * (a + b);
    Ok(adaptive_inner(f, a, m, 0.5 * tol, coarse, fine, depth + 1)?
        + adaptive_inner(f, m, b, 0.5 * tol, coarse, fine, depth + 1)?)
}

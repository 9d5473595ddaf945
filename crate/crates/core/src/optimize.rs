//! One-dimensional maximisation and limit extrapolation.

use rayon::prelude::*;

use crate::error::{domain, Result};

/// Location and value of a maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `x_tol`. Endpoints are
/// included in the comparison, so boundary maxima are returned as such.
pub fn golden_max<F>(f: F, lo: f64, hi: f64, x_tol: f64) -> Result<Maximum>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(lo <= hi) {
        return domain(format!("empty interval [{lo}, {hi}]"));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iterations = 0;
    while (b - a) > x_tol && iterations < 200 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        iterations += 1;
    }
    let mut best = if fc >= fd {
        Maximum { x: c, value: fc }
    } else {
        Maximum { x: d, value: fd }
    };
    for x in [lo, hi] {
        let v = f(x)?;
        if v > best.value {
            best = Maximum { x, value: v };
        }
    }
    Ok(best)
}

/// `n` Chebyshev points of the first kind on `[lo, hi]`, increasing.
pub fn chebyshev_nodes(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (0..n)
        .map(|k| {
            let theta = std::f64::consts::PI * (2 * (n - k) - 1) as f64 / (2 * n) as f64;
            mid + half * theta.cos()
        })
        .collect()
}

/// Maximum of `f` over a grid, evaluated in parallel, followed (when
/// `refine` is set) by golden-section refinement between the neighbours of
/// the best `local_maxima` grid points.
pub fn grid_max<F>(f: F, grid: &[f64], refine: bool, local_maxima: usize) -> Result<Maximum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if grid.is_empty() {
        return domain("empty grid");
    }
    let values = grid.par_iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    let mut order: Vec<usize> = (0..grid.len())
        .filter(|&i| {
            let left = i == 0 || values[i] >= values[i - 1];
            let right = i + 1 == grid.len() || values[i] >= values[i + 1];
            left && right
        })
        .collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut best = Maximum {
        x: grid[order[0]],
        value: values[order[0]],
    };
    if refine {
        for &i in order.iter().take(local_maxima.max(1)) {
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(grid.len() - 1)];
            let tol = 1e-10 * (1.0 + lo.abs().max(hi.abs()));
            let m = golden_max(&f, lo, hi, tol)?;
            if m.value > best.value {
                best = m;
            }
        }
    }
    Ok(best)
}

fn neville_at_zero(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len();
    let mut p = ys.to_vec();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            if xi == xj {
                return domain("extrapolation abscissae must be distinct");
            }
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    Ok(p[0])
}

/// Polynomial extrapolation of samples `(x_i, y_i)` to `x = 0` (Neville).
/// Returns the value and, as an error estimate, its distance from the
/// extrapolation that drops the first sample.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.is_empty() {
        return domain("extrapolation needs matching, non-empty samples");
    }
    let value = neville_at_zero(xs, ys)?;
    let error = if xs.len() == 1 {
        f64::INFINITY
    } else {
        (value - neville_at_zero(&xs[1..], &ys[1..])?).abs()
    };
    Ok((value, error))
}

//! Tanh–sinh (double-exponential) rule.
//!
//! With `s = (π/2) sinh u`, the map `y = 1/(1 + e^(−2s))` sends ℝ onto
//! `(0, 1)`; its complement `1 − y = 1/(1 + e^(2s))` is evaluated directly so
//! both ends keep full relative precision. The trapezoidal sum in `u` is
//! refined by halving the step; the change between levels is the error
//! estimate.

use std::cell::Cell;
use std::f64::consts::PI;

use super::{check_value, Node, QuadResult, QuadValue, Scale, Segment, SegmentJob};
use crate::error::{Error, Result};

const MIN_LEVEL: u32 = 4;
const MAX_LEVEL: u32 = 12;
/// Smallest distance from an endpoint of `[0, 1]` that is sampled; keeps
/// `t` and `1 − t` normal floating-point numbers.
const TINY: f64 = 1e-305;

struct Abscissa {
    y: f64,
    yc: f64,
    dy_du: f64,
}

fn abscissa(u: f64) -> Abscissa {
    let s = 0.5 * PI * u.sinh();
    let e = (-2.0 * s.abs()).exp();
    let (near_one, near_zero) = (1.0 / (1.0 + e), e / (1.0 + e));
    let (y, yc) = if u >= 0.0 {
        (near_one, near_zero)
    } else {
        (near_zero, near_one)
    };
    Abscissa {
        y,
        yc,
        dy_du: PI * u.cosh() * y * yc,
    }
}

/// Largest |u| for which the sampled point stays at least `TINY` away from
/// the segment ends. Segments narrower than about `1e−302` lose a fraction of
/// order `e^(−6)` of their (negligible) width.
fn u_max(seg: &Segment) -> f64 {
    let width = match seg.scale {
        Scale::Linear => seg.width(),
        Scale::Logarithmic => seg.hi.ln() - seg.lo.ln(),
        Scale::LogComplement => seg.lo_c.ln() - seg.hi_c.ln(),
    };
    // y ≈ e^(−2s) near the ends
    let s_max = (0.5 * (width / TINY).ln()).clamp(3.0, 350.0);
    (2.0 * s_max / PI).asinh()
}

/// Node and Jacobian `dt/du` for the abscissa on the given segment.
fn place(a: &Abscissa, seg: &Segment) -> (Node, f64) {
    match seg.scale {
        Scale::Linear => {
            let w = seg.width();
            let node = if a.y <= 0.5 {
                Node {
                    t: seg.lo + w * a.y,
                    tc: seg.lo_c - w * a.y,
                }
            } else {
                Node {
                    t: seg.hi - w * a.yc,
                    tc: seg.hi_c + w * a.yc,
                }
            };
            (node, w * a.dy_du)
        }
        Scale::Logarithmic => {
            let (l0, l1) = (seg.lo.ln(), seg.hi.ln());
            let w = l1 - l0;
            let x = if a.y <= 0.5 { l0 + w * a.y } else { l1 - w * a.yc };
            let t = x.exp();
            (Node { t, tc: -x.exp_m1() }, w * a.dy_du * t)
        }
        Scale::LogComplement => {
            // x = ln(1 − t) runs from ln lo_c down to ln hi_c
            let (l0, l1) = (seg.lo_c.ln(), seg.hi_c.ln());
            let w = l0 - l1;
            let x = if a.y <= 0.5 { l0 - w * a.y } else { l1 + w * a.yc };
            let tc = x.exp();
            (Node { t: -x.exp_m1(), tc }, w * a.dy_du * tc)
        }
    }
}

pub(crate) fn integrate_segment<T: QuadValue>(job: &SegmentJob<'_, T>) -> Result<QuadResult<T>> {
    let seg = job.segment;
    let umax = u_max(&seg);
    let evaluations = Cell::new(0usize);

    let term = |u: f64| -> Result<(T, f64)> {
        let a = abscissa(u);
        let (node, jac) = place(&a, &seg);
        let w = jac * job.weight(node);
        if w == 0.0 {
            return Ok((T::zero(), 0.0));
        }
        evaluations.set(evaluations.get() + 1);
        let v = check_value((job.f)(node)?, node)? * w;
        let v = check_value(v, node)?;
        Ok((v, v.magnitude()))
    };

    // level 0: step 1, all integer u in [−umax, umax]
    let mut sum = T::zero();
    let mut abs_sum = 0.0;
    let n0 = umax.floor() as i64;
    for j in -n0..=n0 {
        let (v, m) = term(j as f64)?;
        sum = sum + v;
        abs_sum += m;
    }
    let mut h = 1.0;
    let mut estimate = sum * h;
    let mut best_error = f64::INFINITY;
    let mut best = estimate;

    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        // new points are the odd multiples of h
        let n = (umax / h).floor() as i64;
        let mut j = -n + if n % 2 == 0 { 1 } else { 0 };
        while j <= n {
            let (v, m) = term(j as f64 * h)?;
            sum = sum + v;
            abs_sum += m;
            j += 2;
        }
        let next = sum * h;
        let floor = 64.0 * f64::EPSILON * abs_sum * h;
        let err = (next - estimate).magnitude().max(floor);
        estimate = next;
        if err <= best_error {
            best_error = err;
            best = estimate;
        }
        let tol = job.tol_abs.max(job.tol_rel * best.magnitude()).max(floor);
        if level >= MIN_LEVEL && best_error <= tol {
            return Ok(QuadResult {
                value: best,
                abs_error: best_error,
                evaluations: evaluations.get(),
            });
        }
        if evaluations.get() >= job.max_evaluations {
            break;
        }
    }
    Err(Error::Convergence {
        best: best.magnitude(),
        abs_error: best_error,
        evaluations: evaluations.get(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abscissa_complements_are_exact() {
        for &u in &[-6.0, -3.2, -0.7, 0.0, 0.4, 2.9, 6.0] {
            let a = abscissa(u);
            assert!((a.y + a.yc - 1.0).abs() < 1e-15);
            assert!(a.y > 0.0 && a.yc > 0.0);
        }
        let far = abscissa(6.0);
        assert!(far.yc < 1e-200 && far.yc > 0.0);
    }

    #[test]
    fn log_scale_nodes_keep_complement() {
        let a = abscissa(-5.0);
        let (n, jac) = place(&a, &Segment::logarithmic(1e-200, 0.5));
        assert!(n.t > 0.99e-200 && n.t < 1e-150);
        assert_eq!(n.tc, 1.0);
        assert!(jac > 0.0);
        let (n, jac) = place(&a, &Segment::log_complement(0.5, 1e-200));
        assert!(n.tc <= 0.5 && n.tc > 0.49);
        let b = abscissa(5.0);
        let (m, _) = place(&b, &Segment::log_complement(0.5, 1e-200));
        assert!(m.tc > 0.99e-200 && m.tc < 1e-150);
        assert_eq!(m.t, 1.0);
        assert!(jac > 0.0);
    }
}

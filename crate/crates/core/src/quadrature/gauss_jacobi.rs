//! Composite Gauss rules on a geometrically graded mesh.
//!
//! Each segment is split at its midpoint and each half is divided into
//! panels `[2^(−k−1), 2^(−k)]` (relative to the half width) towards its
//! endpoint. At an endpoint of `[0, 1]` carrying an algebraic singularity
//! the innermost panel uses a Gauss–Jacobi rule that integrates the power
//! exactly; the grading depth is chosen so that the neglected mass below the
//! innermost panel is under `1e−14` relative. Interior panels use
//! Gauss–Legendre. The rule is run with `n` and `n + 8` points per panel and
//! the difference is the error estimate.

use super::{check_value, Node, QuadResult, QuadValue, Segment, SegmentJob};
use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Nodes on `[−1, 1]` and weights for the weight `(1−x)^a (1+x)^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Eigenvalues of a symmetric tridiagonal matrix (implicit QL with Wilkinson
/// shifts). `off[i]` couples entries `i` and `i + 1`.
fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    d
}

/// Jacobi polynomial P_n^(a,b)(x) and its derivative, by the three-term
/// recurrence.
fn jacobi_eval(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let ab = a + b;
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b + (2.0 + ab) * x);
    if n == 0 {
        return (p0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (a * a - b * b);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let c = 2.0 * nf + ab;
    let dp = (nf * (a - b - c * x) * p1 + 2.0 * (nf + a) * (nf + b) * p0) / (c * (1.0 - x * x));
    (p1, dp)
}

/// n-point Gauss–Jacobi rule for `(1−x)^a (1+x)^b` on `[−1, 1]`, `a, b > −1`.
pub fn gauss_jacobi_rule(n: usize, a: f64, b: f64) -> GaussRule {
    assert!(n >= 1 && a > -1.0 && b > -1.0);
    let ab = a + b;
    // Jacobi matrix of the monic orthogonal polynomials
    let diag: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                let c = 2.0 * k as f64 + ab;
                (b * b - a * a) / (c * (c + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let kf = k as f64;
            let c = 2.0 * kf + ab;
            let num = if k == 1 {
                4.0 * (1.0 + a) * (1.0 + b)
            } else {
                4.0 * kf * (kf + a) * (kf + b) * (kf + ab)
            };
            let den = if k == 1 {
                c * c * (c + 1.0)
            } else {
                c * c * (c + 1.0) * (c - 1.0)
            };
            (num / den).sqrt()
        })
        .collect();
    let mut nodes = tridiagonal_eigenvalues(&diag, &off);

    let nf = n as f64;
    // Γ(n+a+1)Γ(n+b+1) / (Γ(n+1)Γ(n+a+b+1)) · 2^(a+b+1)
    let scale = (ln_gamma(nf + a + 1.0).unwrap() + ln_gamma(nf + b + 1.0).unwrap()
        - ln_gamma(nf + 1.0).unwrap()
        - ln_gamma(nf + ab + 1.0).unwrap()
        + (ab + 1.0) * 2f64.ln())
    .exp();
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        // Newton polish of the eigenvalue
        for _ in 0..3 {
            let (p, dp) = jacobi_eval(n, a, b, *x);
            let step = p / dp;
            let next = *x - step;
            if next > -1.0 && next < 1.0 {
                *x = next;
            }
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = jacobi_eval(n, a, b, *x);
        weights.push(scale / ((1.0 - *x) * (1.0 + *x) * dp * dp));
    }
    GaussRule { nodes, weights }
}

const BASE_POINTS: usize = 12;
const EXTRA_POINTS: usize = 8;
const MAX_POINTS: usize = 60;
const INTERIOR_DEPTH: u32 = 60;
const MAX_DEPTH: u32 = 1000;

/// Grading depth that pushes the neglected end mass `ε^(1+e)/(1+e)` under
/// `1e−14`, with `ε = 2^(−depth)`.
fn depth_for(exponent: f64) -> u32 {
    let p = 1.0 + exponent;
    let need = ((1e-14 * p).ln() / p) / (0.5f64).ln();
    (need.ceil().max(1.0) as u32 + 2).clamp(INTERIOR_DEPTH, MAX_DEPTH)
}

struct Panel {
    lo: f64,
    hi: f64,
    /// complements `1 − lo`, `1 − hi`
    lo_c: f64,
    hi_c: f64,
    kind: PanelKind,
}

impl Panel {
    /// Half width, taken from whichever coordinate keeps it accurate.
    fn half_width(&self) -> f64 {
        if self.lo >= 0.5 {
            0.5 * (self.lo_c - self.hi_c)
        } else {
            0.5 * (self.hi - self.lo)
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum PanelKind {
    Legendre,
    LeftSingular,
    RightSingular,
}

fn build_panels(seg: &Segment, left_singular: bool, right_singular: bool, a: f64, b: f64) -> Vec<Panel> {
    let (lo, hi, lo_c, hi_c) = (seg.lo, seg.hi, seg.lo_c, seg.hi_c);
    let half = 0.5 * seg.width();
    let mut panels = Vec::new();

    // left half: breakpoints lo + half·2^(−k)
    let dl = if left_singular { depth_for(a) } else { INTERIOR_DEPTH };
    // breakpoints are formed in whichever of t, 1 − t is resolved near the end
    let upper = lo >= 0.5;
    let mut inner: Vec<(f64, f64)> = (0..=dl)
        .map(|k| {
            let off = half * 0.5f64.powi(k as i32);
            if upper {
                (1.0 - (lo_c - off), lo_c - off)
            } else {
                (lo + off, lo_c - off)
            }
        })
        .filter(|&(x, c)| if upper { c < lo_c } else { x > lo })
        .collect();
    inner.push((lo, lo_c));
    inner.reverse();
    inner.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    for (i, w) in inner.windows(2).enumerate() {
        let kind = if i == 0 && left_singular {
            PanelKind::LeftSingular
        } else {
            PanelKind::Legendre
        };
        panels.push(Panel {
            lo: w[0].0,
            hi: w[1].0,
            lo_c: w[0].1,
            hi_c: w[1].1,
            kind,
        });
    }
    // right half: breakpoints hi − half·2^(−k), complement (1−hi) + half·2^(−k)
    let dr = if right_singular { depth_for(b) } else { INTERIOR_DEPTH };
    let lower = hi <= 0.5;
    let mut outer: Vec<(f64, f64)> = (0..=dr)
        .map(|k| {
            let off = half * 0.5f64.powi(k as i32);
            if lower {
                (hi - off, 1.0 - (hi - off))
            } else {
                (hi - off, hi_c + off)
            }
        })
        .filter(|&(x, c)| if lower { x < hi } else { c > hi_c })
        .collect();
    outer.push((hi, hi_c));
    outer.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    let last = outer.len() - 2;
    for (i, w) in outer.windows(2).enumerate() {
        let kind = if i == last && right_singular {
            PanelKind::RightSingular
        } else {
            PanelKind::Legendre
        };
        panels.push(Panel {
            lo: w[0].0,
            hi: w[1].0,
            lo_c: w[0].1,
            hi_c: w[1].1,
            kind,
        });
    }
    panels
}

struct Rules {
    legendre: GaussRule,
    left: Option<GaussRule>,
    right: Option<GaussRule>,
}

fn panel_sum<T: QuadValue>(
    job: &SegmentJob<'_, T>,
    panels: &[Panel],
    rules: &Rules,
    evaluations: &mut usize,
) -> Result<T> {
    let mut total = T::zero();
    for p in panels {
        let half = p.half_width();
        let mut acc = T::zero();
        match p.kind {
            PanelKind::Legendre => {
                for (&x, &w) in rules.legendre.nodes.iter().zip(&rules.legendre.weights) {
                    let node = if x <= 0.0 {
                        Node { t: p.lo + half * (1.0 + x), tc: p.lo_c - half * (1.0 + x) }
                    } else {
                        Node { t: p.hi - half * (1.0 - x), tc: p.hi_c + half * (1.0 - x) }
                    };
                    let v = check_value((job.f)(node)?, node)?;
                    acc = acc + v * (w * job.weight(node));
                    *evaluations += 1;
                }
                total = total + acc * half;
            }
            PanelKind::LeftSingular => {
                // t − lo = half·(1 + x): the rule carries (1 + x)^a
                let rule = rules.left.as_ref().expect("left rule");
                for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let t = p.lo + half * (1.0 + x);
                    let node = Node { t, tc: p.lo_c - half * (1.0 + x) };
                    let v = check_value((job.f)(node)?, node)?;
                    let rest = if job.right_exponent != 0.0 {
                        node.tc.powf(job.right_exponent)
                    } else {
                        1.0
                    };
                    acc = acc + v * (w * rest);
                    *evaluations += 1;
                }
                total = total + acc * half.powf(1.0 + job.left_exponent);
            }
            PanelKind::RightSingular => {
                let rule = rules.right.as_ref().expect("right rule");
                for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let tc = p.hi_c + half * (1.0 - x);
                    let node = Node { t: p.hi - half * (1.0 - x), tc };
                    let v = check_value((job.f)(node)?, node)?;
                    let rest = if job.left_exponent != 0.0 {
                        node.t.powf(job.left_exponent)
                    } else {
                        1.0
                    };
                    acc = acc + v * (w * rest);
                    *evaluations += 1;
                }
                total = total + acc * half.powf(1.0 + job.right_exponent);
            }
        }
    }
    check_value(total, Node::new(0.5))
}

pub(crate) fn integrate_segment<T: QuadValue>(job: &SegmentJob<'_, T>) -> Result<QuadResult<T>> {
    let seg = job.segment;
    let left_singular = seg.lo == 0.0 && job.left_exponent != 0.0;
    let right_singular = seg.hi_c == 0.0 && job.right_exponent != 0.0;
    let panels = build_panels(
        &seg,
        left_singular,
        right_singular,
        job.left_exponent,
        job.right_exponent,
    );
    let rules_for = |n: usize| Rules {
        legendre: gauss_jacobi_rule(n, 0.0, 0.0),
        left: left_singular.then(|| gauss_jacobi_rule(n, 0.0, job.left_exponent)),
        right: right_singular.then(|| gauss_jacobi_rule(n, job.right_exponent, 0.0)),
    };

    let mut evaluations = 0;
    let mut n = BASE_POINTS;
    let mut previous = panel_sum(job, &panels, &rules_for(n), &mut evaluations)?;
    let mut best = previous;
    let mut best_error = f64::INFINITY;
    while n + EXTRA_POINTS <= MAX_POINTS {
        n += EXTRA_POINTS;
        let current = panel_sum(job, &panels, &rules_for(n), &mut evaluations)?;
        let floor = 64.0 * f64::EPSILON * current.magnitude();
        let err = (current - previous).magnitude().max(floor);
        if err <= best_error {
            best_error = err;
            best = current;
        }
        let tol = job.tol_abs.max(job.tol_rel * best.magnitude()).max(floor);
        if best_error <= tol {
            return Ok(QuadResult {
                value: best,
                abs_error: best_error,
                evaluations,
            });
        }
        if evaluations >= job.max_evaluations {
            break;
        }
        previous = current;
    }
    Err(Error::Convergence {
        best: best.magnitude(),
        abs_error: best_error,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let r = gauss_jacobi_rule(10, 0.0, 0.0);
        let s: f64 = r.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let x18: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(18)).sum();
        assert!((x18 - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_weights_sum_to_weight_mass() {
        for &(a, b) in &[(-0.5, -0.5), (0.0, -0.9), (-0.75, 0.3), (0.4, 0.0)] {
            for n in [1usize, 5, 20, 44] {
                let r = gauss_jacobi_rule(n, a, b);
                let s: f64 = r.weights.iter().sum();
                let mass = 2f64.powf(a + b + 1.0) * beta(a + 1.0, b + 1.0).unwrap().value;
                assert!((s - mass).abs() / mass < 1e-12, "n={n} a={a} b={b}: {s} vs {mass}");
                assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
                // exact for x^(2n−1)
                let k = 2 * n as i32 - 1;
                let m: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * (1.0 + x).powi(k)).sum();
                // ∫ (1−x)^a (1+x)^(b+k) = 2^(a+b+k+1) B(a+1, b+k+1)
                let exact = 2f64.powf(a + b + k as f64 + 1.0) * beta(a + 1.0, b + k as f64 + 1.0).unwrap().value;
                assert!((m - exact).abs() / exact < 1e-11, "n={n}: {m} vs {exact}");
            }
        }
    }

    #[test]
    fn depth_grows_with_stronger_singularity() {
        assert!(depth_for(-0.9) > depth_for(-0.5));
        assert_eq!(depth_for(-0.999_999), MAX_DEPTH);
    }
}

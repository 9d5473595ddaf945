//! Brute-force supremum of
//! `|1−(1−t)z|^(2α−1) ((1−|z|²)/(|1−(1−t)z|² − t²))^α` over the disk.
//!
//! On the real axis, with `D = 1 − (1−t)x`, the expression equals
//! `E(x) = D^(2α−1) ((1+x)/((1−t)(D+t)))^α`, which extends continuously to
//! `x = 1`. It is maximised over a uniform grid of `10⁵` points on `(−1, 1]`
//! followed by golden-section refinement; a `64 × 256` polar grid of the
//! original expression checks that no off-axis point does better.

use serde::Serialize;

use super::CounterRng;
use crate::error::{domain, Result};
use crate::norm_formulas::{le32_sup, threshold};
use crate::optimize::golden_max;
use crate::Complex64;

/// Relative agreement required between formula and brute force.
pub const LEMMA_TOLERANCE: f64 = 1e-6;

const REAL_GRID: usize = 100_000;
const POLAR_RADII: usize = 64;
const POLAR_ANGLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaBranch {
    /// `t^(α−1)/(1−t)^α`.
    Boundary,
    /// The value at the interior critical point.
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub alpha: f64,
    pub t: f64,
    pub branch: LemmaBranch,
    pub formula: f64,
    pub real_axis_max: f64,
    pub real_axis_arg: f64,
    pub polar_max: f64,
    pub deviation: f64,
    pub passed: bool,
}

fn real_axis(alpha: f64, t: f64, x: f64) -> f64 {
    let tc = 1.0 - t;
    let d = 1.0 - tc * x;
    ((2.0 * alpha - 1.0) * d.ln() + alpha * ((1.0 + x).ln() - tc.ln() - (d + t).ln())).exp()
}

fn disk(alpha: f64, t: f64, z: Complex64) -> f64 {
    let w = (Complex64::new(1.0, 0.0) - z * (1.0 - t)).norm();
    w.powf(2.0 * alpha - 1.0) * ((1.0 - z.norm_sqr()) / (w * w - t * t)).powf(alpha)
}

pub fn lemma_bruteforce(alpha: f64, t: f64) -> Result<LemmaCheck> {
    let formula = le32_sup(alpha, t)?;
    let branch = if alpha > 2.0 / 3.0 && t < threshold(alpha)? {
        LemmaBranch::Critical
    } else {
        LemmaBranch::Boundary
    };
    let h = 2.0 / REAL_GRID as f64;
    let xs: Vec<f64> = (1..=REAL_GRID).map(|i| -1.0 + i as f64 * h).collect();
    let (i_best, mut best) = xs
        .iter()
        .map(|&x| real_axis(alpha, t, x))
        .enumerate()
        .fold((0, f64::MIN), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let mut arg = xs[i_best];
    let lo = (arg - h).max(-1.0 + 1e-300);
    let hi = (arg + h).min(1.0);
    let m = golden_max(|x| Ok(real_axis(alpha, t, x)), lo, hi, 1e-13)?;
    if m.value > best {
        best = m.value;
        arg = m.x;
    }

    let mut polar_max = f64::MIN;
    for i in 0..POLAR_RADII {
        let rho = i as f64 / POLAR_RADII as f64;
        for j in 0..POLAR_ANGLES {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / POLAR_ANGLES as f64;
            polar_max = polar_max.max(disk(alpha, t, Complex64::from_polar(rho, theta)));
        }
    }

    let deviation = (formula - best).abs() / formula.max(1.0);
    let passed = deviation <= LEMMA_TOLERANCE && polar_max <= formula * (1.0 + LEMMA_TOLERANCE);
    Ok(LemmaCheck {
        alpha,
        t,
        branch,
        formula,
        real_axis_max: best,
        real_axis_arg: arg,
        polar_max,
        deviation,
        passed,
    })
}

/// A sampled `(α, t)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaCase {
    pub alpha: f64,
    pub t: f64,
    pub branch: LemmaBranch,
    pub near_threshold: bool,
}

/// `per_branch` pairs for each branch, the last `near` of which lie within
/// `10⁻³` of the threshold. Boundary-branch pairs alternate between
/// `½ < α ≤ ⅔` (any `t`) and `⅔ < α < 1` with `t ≥ t*`; critical-branch
/// pairs take `0.7 ≤ α < 1`, `t < t*`. Stream 10 000 + k of the generator
/// feeds pair k.
pub fn lemma_cases(seed: u64, per_branch: usize, near: usize) -> Result<Vec<LemmaCase>> {
    if near > per_branch {
        return domain("near-threshold pairs cannot exceed the pairs per branch");
    }
    let rng = CounterRng::new(seed);
    let mut cases = Vec::with_capacity(2 * per_branch);
    for k in 0..2 * per_branch {
        let stream = 10_000 + k as u64;
        let (u, v, w) = (rng.uniform(stream, 0), rng.uniform(stream, 1), rng.uniform(stream, 2));
        let critical = k >= per_branch;
        let near_threshold = k % per_branch >= per_branch - near;
        let case = if critical {
            let alpha = 0.7 + 0.29 * u;
            let ts = threshold(alpha)?;
            let t = if near_threshold {
                ts - 1e-3 * (0.01 + 0.98 * v)
            } else {
                ts * (0.02 + 0.96 * v)
            };
            LemmaCase {
                alpha,
                t,
                branch: LemmaBranch::Critical,
                near_threshold,
            }
        } else if near_threshold || w < 0.5 {
            let alpha = 0.7 + 0.29 * u;
            let ts = threshold(alpha)?;
            let t = if near_threshold {
                ts + 1e-3 * (0.01 + 0.98 * v)
            } else {
                ts + (1.0 - ts) * (0.02 + 0.96 * v)
            };
            LemmaCase {
                alpha,
                t,
                branch: LemmaBranch::Boundary,
                near_threshold,
            }
        } else {
            LemmaCase {
                alpha: 0.51 + (2.0 / 3.0 - 0.51) * u,
                t: 0.02 + 0.96 * v,
                branch: LemmaBranch::Boundary,
                near_threshold: false,
            }
        };
        cases.push(case);
    }
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_axis_form_matches_disk_form() {
        for &(a, t, x) in &[(0.8, 0.2, 0.3), (0.6, 0.7, -0.5), (0.95, 0.05, 0.99)] {
            let e = real_axis(a, t, x);
            let d = disk(a, t, Complex64::new(x, 0.0));
            assert!((e - d).abs() < 1e-10 * d, "{e} {d}");
        }
        // the continuous extension at x = 1 is the boundary branch
        let (a, t): (f64, f64) = (0.8, 0.6);
        let boundary = t.powf(a - 1.0) / (1.0 - t).powf(a);
        assert!((real_axis(a, t, 1.0) - boundary).abs() < 1e-12 * boundary);
    }

    #[test]
    fn second_branch_example() {
        let c = lemma_bruteforce(0.8, 0.2).unwrap();
        assert_eq!(c.branch, LemmaBranch::Critical);
        assert!(c.passed, "{c:?}");
        let x0 = crate::norm_formulas::critical_point(0.8, 0.2).unwrap();
        assert!((c.real_axis_arg - x0 / 0.8).abs() < 1e-5);
    }

    #[test]
    fn cases_respect_their_branch() {
        let cases = lemma_cases(42, 20, 5).unwrap();
        assert_eq!(cases.len(), 40);
        for c in &cases {
            let crit = c.alpha > 2.0 / 3.0 && c.t < threshold(c.alpha).unwrap();
            assert_eq!(crit, c.branch == LemmaBranch::Critical, "{c:?}");
            assert!(c.t > 0.0 && c.t < 1.0);
            if c.near_threshold {
                assert!((c.t - threshold(c.alpha).unwrap()).abs() < 1e-3);
            }
        }
        assert_eq!(cases.iter().filter(|c| c.near_threshold).count(), 10);
    }
}

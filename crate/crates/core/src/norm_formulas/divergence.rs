//! Probes of the quantities that grow without bound in the unbounded
//! regimes, sampled along `r_k = 1 − 10^(−k)`, `k = 1..6`.

use std::fmt;

use serde::Serialize;

use super::korenblum::radial_segments;
use crate::error::{domain, Result};
use crate::quadrature::{Backend, Integrator, Node, Segment, SingularIntegrand};

pub const PROBE_COMPLEMENTS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

/// Last-to-first growth required for a numerical "diverges" verdict.
pub const DIVERGENCE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceCase {
    /// B^α → B^α, `0 < α ≤ 1`.
    BlochAlphaLe1,
    /// B^α → B^α, `α ≥ 2`.
    BlochAlphaGe2,
    /// B → B.
    BlochAlphaEq1,
    /// H∞_α → B^{α+1}, `α ≥ 1`.
    KorenblumToBlochAlphaGe1,
}

impl DivergenceCase {
    pub fn code(&self) -> &'static str {
        match self {
            DivergenceCase::BlochAlphaLe1 => "bloch_alpha_le1",
            DivergenceCase::BlochAlphaGe2 => "bloch_alpha_ge2",
            DivergenceCase::BlochAlphaEq1 => "bloch_alpha_eq1",
            DivergenceCase::KorenblumToBlochAlphaGe1 => "korenblum_to_bloch_alpha_ge1",
        }
    }

    pub fn parse(s: &str) -> Option<DivergenceCase> {
        [
            DivergenceCase::BlochAlphaLe1,
            DivergenceCase::BlochAlphaGe2,
            DivergenceCase::BlochAlphaEq1,
            DivergenceCase::KorenblumToBlochAlphaGe1,
        ]
        .into_iter()
        .find(|c| c.code().eq_ignore_ascii_case(s.trim()))
    }

    fn admits(&self, alpha: f64) -> bool {
        match self {
            DivergenceCase::BlochAlphaLe1 => alpha > 0.0 && alpha <= 1.0,
            DivergenceCase::BlochAlphaGe2 => alpha >= 2.0 && alpha.is_finite(),
            DivergenceCase::BlochAlphaEq1 => alpha == 1.0,
            DivergenceCase::KorenblumToBlochAlphaGe1 => alpha >= 1.0 && alpha.is_finite(),
        }
    }

    /// Case covering `α` on B^α → B^α, if unbounded there.
    pub fn for_bloch(alpha: f64) -> Option<DivergenceCase> {
        if alpha == 1.0 {
            Some(DivergenceCase::BlochAlphaEq1)
        } else if alpha > 0.0 && alpha < 1.0 {
            Some(DivergenceCase::BlochAlphaLe1)
        } else if alpha >= 2.0 {
            Some(DivergenceCase::BlochAlphaGe2)
        } else {
            None
        }
    }
}

impl fmt::Display for DivergenceCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Diverges,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictBasis {
    /// From the growth of the sampled sequence.
    Numerical,
    /// From a quantity that is infinite for every `r` (no sampling needed).
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub case: DivergenceCase,
    pub alpha: f64,
    pub complements: Vec<f64>,
    pub sequence: Vec<f64>,
    pub growth_ratio: f64,
    pub strictly_increasing: bool,
    pub verdict: Verdict,
    pub basis: VerdictBasis,
    pub note: String,
}

fn integrator() -> Integrator {
    Integrator::default().with_backend(Backend::Auto)
}

/// `(1 − r²)^α |A − B|` for the test function of B^α, `0 < α < 1`, with
/// `A` in closed form and `B` by quadrature.
fn bloch_le1_quantity(alpha: f64, rc: f64) -> Result<f64> {
    let r = 1.0 - rc;
    let a = (1.0 - rc / r * (-rc.ln())) / (rc * r);
    let smooth = |n: Node| {
        let d = rc + r * n.t;
        n.t * (d + n.t).powf(1.0 - alpha) * d.powf(2.0 * alpha - 3.0) * rc.powf(-alpha)
    };
    let integrand = SingularIntegrand::new(smooth, 0.0, 1.0 - alpha);
    let b = integrator().integrate_segments(&integrand, &radial_segments(rc))?.value;
    Ok((rc * (2.0 - rc)).powf(alpha) * (a - b).abs())
}

/// `(1+r) ∫₀¹ t/D · log(D / ((1−t)(1−r))) dt` with `D = 1 + (t−1)r`.
fn bloch_eq1_quantity(rc: f64) -> Result<f64> {
    let r = 1.0 - rc;
    let smooth = |n: Node| {
        let d = rc + r * n.t;
        n.t / d * (d.ln() - n.tc.ln() - rc.ln())
    };
    let integrand = SingularIntegrand::new(smooth, 0.0, 0.0);
    let i = integrator().integrate_segments(&integrand, &radial_segments(rc))?.value;
    Ok((2.0 - rc) * i)
}

fn tail_segments(rc: f64) -> Vec<Segment> {
    if rc < 0.5 {
        vec![Segment::logarithmic(rc, 0.5), Segment::linear(0.5, 1.0)]
    } else {
        vec![Segment::linear(rc, 1.0)]
    }
}

/// `(∫_rc^1 s^(1−α)(2−s)^(1−α) ds − 1)/(2(α−1)) + ∫_rc^1 s^(1−α)(1−s)^(α−1) ds/(α−1)`.
fn bloch_ge2_quantity(alpha: f64, rc: f64) -> Result<f64> {
    let e = 1.0 - alpha;
    let first = SingularIntegrand::new(|n: Node| (n.t * (1.0 + n.tc)).powf(e), 0.0, 0.0);
    let i1 = integrator().integrate_segments(&first, &tail_segments(rc))?.value;
    let second = SingularIntegrand::new(|n: Node| n.t.powf(e), 0.0, alpha - 1.0);
    let i2 = integrator().integrate_segments(&second, &tail_segments(rc))?.value;
    Ok((i1 - 1.0) / (2.0 * (alpha - 1.0)) + i2 / (alpha - 1.0))
}

/// `∫_rc^1 s^(−α)(2−s)^(−α) ds`, the truncation of `Hf(0)` for
/// `f(z) = (1−z²)^(−α)`.
fn korenblum_truncated(alpha: f64, rc: f64) -> Result<f64> {
    let integrand = SingularIntegrand::new(|n: Node| (n.t * (1.0 + n.tc)).powf(-alpha), 0.0, 0.0);
    Ok(integrator().integrate_segments(&integrand, &tail_segments(rc))?.value)
}

/// Samples the diverging quantity of `case` along [`PROBE_COMPLEMENTS`].
pub fn unboundedness_probe(case: DivergenceCase, alpha: f64) -> Result<DivergenceReport> {
    if !case.admits(alpha) {
        return domain(format!("case {case} does not cover α = {alpha}"));
    }
    let (quantity, note): (Box<dyn Fn(f64) -> Result<f64>>, &str) = match case {
        DivergenceCase::BlochAlphaLe1 if alpha == 1.0 => (
            Box::new(bloch_eq1_quantity),
            "α = 1 uses the log(1/(1−z)) test function",
        ),
        DivergenceCase::BlochAlphaLe1 => (
            Box::new(move |rc| bloch_le1_quantity(alpha, rc)),
            "weighted derivative of the image of ((1−z²)^(1−α) − 1)/(2(α−1)) at r",
        ),
        DivergenceCase::BlochAlphaEq1 => (
            Box::new(bloch_eq1_quantity),
            "weighted derivative of the image of log(1/(1−z)) at r",
        ),
        DivergenceCase::BlochAlphaGe2 => (
            Box::new(move |rc| bloch_ge2_quantity(alpha, rc)),
            "lower-bound quantity truncated at 1 − r",
        ),
        DivergenceCase::KorenblumToBlochAlphaGe1 => (
            Box::new(move |rc| korenblum_truncated(alpha, rc)),
            "Hf(0) = ∫₀¹ (1−t²)^(−α) dt is infinite for α ≥ 1; the sequence is its truncation at 1 − r",
        ),
    };
    let sequence = PROBE_COMPLEMENTS
        .iter()
        .map(|&rc| quantity(rc))
        .collect::<Result<Vec<f64>>>()?;
    let growth_ratio = sequence[sequence.len() - 1] / sequence[0];
    let strictly_increasing = sequence.windows(2).all(|w| w[1] > w[0]);
    let (verdict, basis) = if case == DivergenceCase::KorenblumToBlochAlphaGe1 {
        (Verdict::Diverges, VerdictBasis::Analytic)
    } else if growth_ratio >= DIVERGENCE_FACTOR {
        (Verdict::Diverges, VerdictBasis::Numerical)
    } else {
        (Verdict::Inconclusive, VerdictBasis::Numerical)
    };
    Ok(DivergenceReport {
        case,
        alpha,
        complements: PROBE_COMPLEMENTS.to_vec(),
        sequence,
        growth_ratio,
        strictly_increasing,
        verdict,
        basis,
        note: note.to_string(),
    })
}

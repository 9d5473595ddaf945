//! Norm expressions for the Hilbert operator between the spaces of
//! [`crate::spaces`]: sup-integral kernels and their sup searches, the
//! piecewise suprema of the weighted composition operators, closed-form
//! bounds, exact values and divergence probes.
//!
//! | id | setting | kind | α |
//! |----|---------|------|---|
//! | `TH31_EXACT`, `TH31_LOWER` | H∞_{α,log} → H∞_α | exact / lower | (0, 1) |
//! | `LE32_SUP` | sup of the `T_t` kernel | exact | (½, 1) |
//! | `LE33_TT` | ‖T_t‖ on H∞_{α,log} → H∞_α | upper | (0, 1) |
//! | `TH34_UPPER` | H∞_{α,log} → H∞_α | upper | (0, 1) |
//! | `TH41_EXACT`, `TH41_LOWER` | H∞_{α,log} → H∞_{α,log} | exact / lower | (0, 1) |
//! | `TH52_LOWER`, `TH53_UPPER` | B^α → B^α | lower / upper | (1, 2) |
//! | `TH61_EXACT` | H∞ → B | exact | none |
//! | `TH71_EXACT` | H∞_α → B^{α+1} | exact | (0, ⅔] |
//! | `TH71_LOWER`, `TH71_UPPER` | H∞_α → B^{α+1} | lower / upper | (⅔, 1) |

mod bloch;
mod divergence;
mod korenblum;

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::optimize::{chebyshev_nodes, grid_max};

pub use bloch::{
    th52_lower, th53_upper, th61_certificate, th61_lower_quantity, th61_upper_quantity, th61_value,
    th71_first_term, th71_premise_min_slope, th71_premise_slope, th71_radial_integral, th71_value,
    BoundReport, PremiseCheck, Th61Certificate,
};
pub use divergence::{
    unboundedness_probe, DivergenceCase, DivergenceReport, Verdict, VerdictBasis, DIVERGENCE_FACTOR,
    PROBE_COMPLEMENTS,
};
pub use korenblum::{
    critical_point, le32_g, le32_sup, le33_log_factor, le33_tt_bound, th31_at_complement, th31_kernel,
    th31_lower, th31_norm, th31_norm_with, th34_upper, th41_at_complement, th41_limit, th41_lower,
    th41_norm, th41_norm_with, threshold, Extrapolation, DEEP_COMPLEMENTS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FormulaId {
    Th31Exact,
    Th31Lower,
    Le32Sup,
    Le33Tt,
    Th34Upper,
    Th41Exact,
    Th41Lower,
    Th52Lower,
    Th53Upper,
    Th61Exact,
    Th71Exact,
    Th71Lower,
    Th71Upper,
}

impl FormulaId {
    pub const ALL: [FormulaId; 13] = [
        FormulaId::Th31Exact,
        FormulaId::Th31Lower,
        FormulaId::Le32Sup,
        FormulaId::Le33Tt,
        FormulaId::Th34Upper,
        FormulaId::Th41Exact,
        FormulaId::Th41Lower,
        FormulaId::Th52Lower,
        FormulaId::Th53Upper,
        FormulaId::Th61Exact,
        FormulaId::Th71Exact,
        FormulaId::Th71Lower,
        FormulaId::Th71Upper,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            FormulaId::Th31Exact => "TH31_EXACT",
            FormulaId::Th31Lower => "TH31_LOWER",
            FormulaId::Le32Sup => "LE32_SUP",
            FormulaId::Le33Tt => "LE33_TT",
            FormulaId::Th34Upper => "TH34_UPPER",
            FormulaId::Th41Exact => "TH41_EXACT",
            FormulaId::Th41Lower => "TH41_LOWER",
            FormulaId::Th52Lower => "TH52_LOWER",
            FormulaId::Th53Upper => "TH53_UPPER",
            FormulaId::Th61Exact => "TH61_EXACT",
            FormulaId::Th71Exact => "TH71_EXACT",
            FormulaId::Th71Lower => "TH71_LOWER",
            FormulaId::Th71Upper => "TH71_UPPER",
        }
    }

    pub fn parse(s: &str) -> Option<FormulaId> {
        FormulaId::ALL
            .into_iter()
            .find(|id| id.code().eq_ignore_ascii_case(s.trim()))
    }

    pub fn formula(&self) -> BoundFormula {
        use BoundKind::*;
        use FormulaId::*;
        let open01 = Some(AlphaDomain::open(0.0, 1.0));
        let (kind, alpha_domain, setting) = match self {
            Th31Exact => (Exact, open01, "H∞_{α,log} → H∞_α"),
            Th31Lower => (Lower, open01, "H∞_{α,log} → H∞_α"),
            Le32Sup => (Exact, Some(AlphaDomain::open(0.5, 1.0)), "sup of the T_t kernel"),
            Le33Tt => (Upper, open01, "T_t: H∞_{α,log} → H∞_α"),
            Th34Upper => (Upper, open01, "H∞_{α,log} → H∞_α"),
            Th41Exact => (Exact, open01, "H∞_{α,log} → H∞_{α,log}"),
            Th41Lower => (Lower, open01, "H∞_{α,log} → H∞_{α,log}"),
            Th52Lower => (Lower, Some(AlphaDomain::open(1.0, 2.0)), "B^α → B^α"),
            Th53Upper => (Upper, Some(AlphaDomain::open(1.0, 2.0)), "B^α → B^α"),
            Th61Exact => (Exact, None, "H∞ → B"),
            Th71Exact => (
                Exact,
                Some(AlphaDomain {
                    lo: 0.0,
                    hi: 2.0 / 3.0,
                    lo_closed: false,
                    hi_closed: true,
                }),
                "H∞_α → B^{α+1}",
            ),
            Th71Lower => (Lower, Some(AlphaDomain::open(2.0 / 3.0, 1.0)), "H∞_α → B^{α+1}"),
            Th71Upper => (Upper, Some(AlphaDomain::open(2.0 / 3.0, 1.0)), "H∞_α → B^{α+1}"),
        };
        BoundFormula {
            id: *self,
            kind,
            alpha_domain,
            setting,
        }
    }

    /// Domain error unless `alpha` satisfies the formula's hypotheses.
    pub fn check(&self, alpha: f64) -> Result<()> {
        match self.formula().alpha_domain {
            Some(d) if !d.contains(alpha) => {
                domain(format!("{} requires α ∈ {d}, got {alpha}", self.code()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
}

/// An interval of admissible α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaDomain {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl AlphaDomain {
    pub fn open(lo: f64, hi: f64) -> Self {
        AlphaDomain {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn contains(&self, a: f64) -> bool {
        let above = if self.lo_closed { a >= self.lo } else { a > self.lo };
        let below = if self.hi_closed { a <= self.hi } else { a < self.hi };
        above && below
    }
}

impl fmt::Display for AlphaDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundFormula {
    pub id: FormulaId,
    pub kind: BoundKind,
    /// `None` when the formula has no α parameter.
    pub alpha_domain: Option<AlphaDomain>,
    pub setting: &'static str,
}

/// Outcome of a supremum over `r ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupSearchResult {
    pub value: f64,
    pub arg_r: f64,
    /// `1 − arg_r`, exact even when `arg_r` rounds to 1.
    pub arg_complement: f64,
    /// The supremum is the `r → 1` limit rather than an interior maximum.
    pub boundary_attained: bool,
    pub samples_used: usize,
    /// The `r → 1` limit, when it was probed.
    pub limit: Option<f64>,
}

/// Settings of the sup search over `r`, parametrised by `u = −log₁₀(1 − r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupOptions {
    /// Chebyshev nodes in `u ∈ [0, u_max]` (both ends are added).
    pub nodes: usize,
    pub u_max: f64,
    pub refine: bool,
    pub local_maxima: usize,
}

impl Default for SupOptions {
    fn default() -> Self {
        SupOptions {
            nodes: 64,
            u_max: 300.0,
            refine: true,
            local_maxima: 3,
        }
    }
}

/// Maximises `f(1 − r)` over `1 − r = 10^(−u)`, `u ∈ [0, u_max]`.
pub(crate) fn sup_over_complement<F>(f: F, opts: &SupOptions) -> Result<(f64, f64, usize)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let mut grid = vec![0.0];
    grid.extend(chebyshev_nodes(opts.nodes, 0.0, opts.u_max));
    grid.push(opts.u_max);
    let g = |u: f64| f(10f64.powf(-u));
    let m = grid_max(g, &grid, opts.refine, opts.local_maxima)?;
    Ok((m.value, 10f64.powf(-m.x), grid.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FormulaId::ALL {
            assert_eq!(FormulaId::parse(id.code()), Some(id));
            assert_eq!(id.formula().id, id);
        }
        assert_eq!(FormulaId::parse("th71_exact"), Some(FormulaId::Th71Exact));
        assert_eq!(FormulaId::parse("nope"), None);
    }

    #[test]
    fn domains_match_hypotheses() {
        assert!(FormulaId::Th71Exact.check(2.0 / 3.0).is_ok());
        assert!(FormulaId::Th71Exact.check(0.7).is_err());
        assert!(FormulaId::Th71Upper.check(2.0 / 3.0).is_err());
        assert!(FormulaId::Th52Lower.check(1.0).is_err());
        assert!(FormulaId::Th52Lower.check(1.5).is_ok());
        assert!(FormulaId::Th53Upper.check(2.0).is_err());
        assert!(FormulaId::Le32Sup.check(0.5).is_err());
        assert!(FormulaId::Th61Exact.check(123.0).is_ok());
        assert_eq!(FormulaId::Th34Upper.formula().kind, BoundKind::Upper);
    }
}

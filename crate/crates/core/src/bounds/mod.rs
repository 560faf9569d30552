//! Explicit bounds, the dyadic proof replay, and per-instance reports.

mod checks;
mod closed;
mod plan;
mod replay;

pub use checks::{corollary_inequality_checks, InequalityCheck};
pub use closed::{
    convexity_bound, corollary_bound, imprimitive_lift, partial_summation_bound,
    principal_bound, rademacher_bound, theorem_bound, w_poly, z_poly, T0,
};
pub use plan::{dyadic_plan, DyadicPlan, Regime, Segment, RHO};
pub use replay::{nu_enclosure, proof_replay, proof_replay_with, BoundBreakdown};

use crate::arith::{factorize, modulus_profile};
use crate::characters::{postnikov_linear, postnikov_quadratic, DirichletCharacter};
use crate::error::Result;
use crate::lfunc::LValue;
use crate::numeric::Enclosure;
use serde::Serialize;

/// Which bound families a report evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundSelection {
    pub theorem: bool,
    pub corollary: bool,
    pub convexity: bool,
    pub partial: bool,
    pub principal: bool,
    pub rademacher: bool,
}

impl Default for BoundSelection {
    fn default() -> Self {
        Self {
            theorem: true,
            corollary: true,
            convexity: true,
            partial: true,
            principal: true,
            rademacher: false,
        }
    }
}

const RADEMACHER_ETAS: [f64; 5] = [0.05, 0.1, 0.2, 0.3, 0.5];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub q: u64,
    pub chi_index: u64,
    pub conductor: u64,
    pub primitive: bool,
    pub t: f64,
    pub l_re: f64,
    pub l_im: f64,
    pub l_abs: f64,
    pub l_err: f64,
    pub theorem: Option<f64>,
    pub corollary: Option<f64>,
    pub convexity: Option<f64>,
    pub partial: Option<f64>,
    pub principal: Option<f64>,
    pub rademacher: Option<f64>,
    /// `min (bound - (|L| + err))` over the applicable bounds.
    pub margin_min: Option<f64>,
    pub pass: bool,
}

impl BoundReport {
    /// `(family, value)` for every evaluated bound.
    pub fn bounds(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        [
            ("theorem", self.theorem),
            ("corollary", self.corollary),
            ("convexity", self.convexity),
            ("partial", self.partial),
            ("principal", self.principal),
            ("rademacher", self.rademacher),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
    }
}

/// Evaluates every selected bound whose preconditions hold and compares it
/// against the upward-rounded `|L| + err`. Bound values are the lower ends
/// of their enclosures.
pub fn bound_report(
    chi: &DirichletCharacter,
    t: f64,
    l: &LValue,
    sel: &BoundSelection,
) -> Result<BoundReport> {
    let q = chi.modulus();
    let primitive = chi.is_primitive();
    let at = t.abs();
    let lo = |e: Enclosure| e.lo();

    let theorem = if sel.theorem && at >= T0 {
        let prof = modulus_profile(q)?;
        let (_, b1) = postnikov_linear(chi)?;
        let (_, _, b) = postnikov_quadratic(chi)?;
        Some(lo(theorem_bound(&prof, b, b1, t)?))
    } else {
        None
    };
    let corollary = if sel.corollary && primitive && at >= T0 && factorize(q)?.is_sixth_power()
    {
        Some(lo(corollary_bound(q, t)?))
    } else {
        None
    };
    let convexity = if sel.convexity && primitive {
        convexity_bound(q, t).ok().map(lo)
    } else {
        None
    };
    let partial = if sel.partial && primitive {
        Some(lo(partial_summation_bound(q, t)?))
    } else {
        None
    };
    let principal = if sel.principal && chi.is_principal() && at >= 3.0 {
        Some(lo(principal_bound(q, t)?))
    } else {
        None
    };
    let rademacher = if sel.rademacher && primitive {
        let mut best = f64::INFINITY;
        for eta in RADEMACHER_ETAS {
            best = best.min(lo(rademacher_bound(q, 0.5, t, eta)?));
        }
        Some(best)
    } else {
        None
    };

    let upper = l.abs_upper();
    let mut report = BoundReport {
        q,
        chi_index: chi.index(),
        conductor: chi.conductor(),
        primitive,
        t,
        l_re: l.value.re,
        l_im: l.value.im,
        l_abs: l.value.norm(),
        l_err: l.err,
        theorem,
        corollary,
        convexity,
        partial,
        principal,
        rademacher,
        margin_min: None,
        pass: true,
    };
    let margin = report
        .bounds()
        .map(|(_, b)| b - upper)
        .fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |a| a.min(m))));
    let pass = report.bounds().all(|(_, b)| upper <= b);
    report.margin_min = margin;
    report.pass = pass;
    Ok(report)
}

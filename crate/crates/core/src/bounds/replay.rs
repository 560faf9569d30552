//! Numerical replay of the dyadic argument for a concrete `(χ, t)`.

use super::closed::theorem_bound;
use super::plan::{dyadic_plan, DyadicPlan, Regime, Segment, RHO};
use crate::arith::{gcd, modulus_profile, ModulusProfile};
use crate::characters::{postnikov_linear, postnikov_quadratic, DirichletCharacter};
use crate::error::{Error, Result};
use crate::expsums::TaylorReduction;
use crate::numeric::Enclosure;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundBreakdown {
    pub q: u64,
    pub chi_index: u64,
    pub t: f64,
    pub rho: f64,
    pub initial: f64,
    pub region1: f64,
    pub region2: f64,
    pub region3: f64,
    pub total: f64,
    /// Lower end of the theorem's closed form.
    pub closed_form_zw: f64,
    /// The tail estimate keeping the `R_ℓ` block count from the
    /// per-block Pólya–Vinogradov step.
    pub region3_with_blocks: f64,
    pub weyl_segments: usize,
    pub kl_segments: usize,
}

impl BoundBreakdown {
    /// `total > closed form`: only meaningful at `ρ = 1.3`.
    pub fn exceeds_closed_form(&self) -> bool {
        self.total > self.closed_form_zw
    }
}

/// `ν_J(1/√(ρ-1), 1/(2π(J+1)))` as an enclosure.
pub fn nu_enclosure(j: u32, rho: f64) -> Enclosure {
    let lam = 1.0 / (Enclosure::decimal(rho) - 1.0).sqrt();
    let r = 1.0 / (lam.powi(j) * (lam - 1.0));
    (1.0 + r) * (r / (j + 1) as f64).exp()
}

/// Enclosure version of the well-spacing bound; `inv_delta` is an upper
/// bound for `δ^{-1}` (0 for a single point).
fn wellspacing(p: Enclosure, inv_delta: f64, extent: Enclosure) -> Enclosure {
    let lead = 2.0 * (extent + 1.0);
    let inv = Enclosure::new(0.0, inv_delta);
    let big = || lead * (2.0 * p + inv * (Enclosure::E * p / 2.0).ln());
    let small = || lead * (p + inv);
    if p.lo() >= 2.0 {
        big()
    } else if p.hi() < 2.0 {
        small()
    } else {
        big().max(small())
    }
}

/// Gap data of `K/(N_r+1)^e` over the blocks: upper bound for the inverse
/// of the smallest consecutive gap and the spread between first and last.
fn spacing(k: Enclosure, seg: &Segment, e: u32) -> (f64, Enclosure) {
    if seg.blocks <= 1 {
        return (0.0, Enclosure::exact(0.0));
    }
    let pw = |n: u64| Enclosure::from_u64(n).powi(e);
    let a = seg.block_start(seg.blocks - 2);
    let b = seg.block_start(seg.blocks - 1);
    // the map is convex decreasing, so the last gap is the smallest
    let gap = k * (pw(b) - pw(a)) / (pw(a) * pw(b));
    let first = seg.start;
    let extent = k * (pw(b) - pw(first)) / (pw(first) * pw(b));
    (1.0 / gap.lo(), extent)
}

fn weyl_terms(
    prof: &ModulusProfile,
    b: u64,
    t: f64,
    plan: &DyadicPlan,
    seg: &Segment,
) -> Result<(Enclosure, Enclosure)> {
    let red = TaylorReduction::for_rho(2, plan.rho)?;
    red.check(t, seg.start - 1, seg.block_len)?;
    let (c, d) = (prof.c, prof.d);
    let (ce, de, be) = (
        Enclosure::from_u64(c),
        Enclosure::from_u64(d),
        Enclosure::from_u64(b),
    );
    let lam = Enclosure::from_u64(prof.lambda_d);
    let (l, r) = (Enclosure::from_u64(seg.block_len), Enclosure::from_u64(seg.blocks));
    let scale = plan.scale_enclosure(seg.ell);
    let star = ce * l * r.sqr() / scale
        * ((de / (2.0 * be)).ln() + 1.75 + 3.0 * Enclosure::PI / (2.0 * lam));
    let kk = ce.sqr() * de * Enclosure::exact(t.abs()) / (2.0 * Enclosure::PI * be);
    let big_m = seg.block_len.div_ceil(c);
    let mut inner = Enclosure::exact(0.0);
    for m in 1..big_m {
        let w = 1.0 - Enclosure::from_u64(m) / Enclosure::from_u64(big_m);
        let d_m = gcd(2 * m, d / b);
        let km = kk * Enclosure::from_u64(m) / Enclosure::from_u64(d_m);
        let (inv_delta, extent) = spacing(km, seg, 2);
        let p = Enclosure::PI * Enclosure::from_u64(d_m) * be * l / (ce * de);
        inner = inner + w * wellspacing(p, inv_delta, extent);
    }
    let dstar = ce.sqr() * r / scale * inner;
    Ok((star, dstar))
}

fn kl_term(
    prof: &ModulusProfile,
    b1: u64,
    t: f64,
    plan: &DyadicPlan,
    seg: &Segment,
    nu1: Enclosure,
) -> Result<Enclosure> {
    let red = TaylorReduction::for_rho(1, plan.rho)?;
    red.check(t, seg.start - 1, seg.block_len)?;
    let (qe, c1, d1, b1e) = (
        Enclosure::from_u64(prof.q),
        Enclosure::from_u64(prof.c1),
        Enclosure::from_u64(prof.d1),
        Enclosure::from_u64(b1),
    );
    let (l, r) = (Enclosure::from_u64(seg.block_len), Enclosure::from_u64(seg.blocks));
    let root = plan.scale_enclosure(seg.ell).sqrt();
    let pi = Enclosure::PI;
    let head = 2.0 * nu1 / pi * c1 * r / root * ((d1 / (2.0 * b1e)).ln() + 1.75 + pi / 2.0);
    let k = qe * Enclosure::exact(t.abs()) / (2.0 * pi * b1e);
    let (inv_delta, extent) = spacing(k, seg, 1);
    let p = pi * b1e * l / qe;
    Ok(head + nu1 / pi * c1 / root * wellspacing(p, inv_delta, extent))
}

/// Replays the four regional estimates at `ρ = 1.3`.
pub fn proof_replay(chi: &DirichletCharacter, t: f64) -> Result<BoundBreakdown> {
    proof_replay_with(chi, t, RHO)
}

pub fn proof_replay_with(chi: &DirichletCharacter, t: f64, rho: f64) -> Result<BoundBreakdown> {
    if chi.is_principal() {
        return Err(Error::PreconditionViolated(
            "proof replay needs a nonprincipal character".into(),
        ));
    }
    let prof = modulus_profile(chi.modulus())?;
    let plan = dyadic_plan(&prof, t, rho)?;
    let (_, b1) = postnikov_linear(chi)?;
    let (_, _, b) = postnikov_quadratic(chi)?;

    let initial = 2.0 * (Enclosure::from_u64(plan.v0) - 1.0).sqrt();

    let mut sum1 = Enclosure::exact(0.0);
    let mut n0 = 0usize;
    for seg in plan.segments_in(Regime::Weyl) {
        let (s, ds) = weyl_terms(&prof, b, t, &plan, seg)?;
        sum1 = sum1 + s + ds;
        n0 += 1;
    }
    let nu2 = nu_enclosure(2, rho);
    let lam = Enclosure::from_u64(prof.lambda_d);
    let region1 =
        (Enclosure::from_u64(n0 as u64) * 4.0 * nu2.sqr() * lam / Enclosure::PI * sum1).sqrt();

    let nu1 = nu_enclosure(1, rho);
    let mut region2 = Enclosure::exact(0.0);
    let mut n1 = 0usize;
    for seg in plan.segments_in(Regime::KusminLandau) {
        region2 = region2 + kl_term(&prof, b1, t, &plan, seg, nu1)?;
        n1 += 1;
    }

    let tail = plan
        .segments_in(Regime::Tail)
        .next()
        .expect("plan includes the first tail segment");
    TaylorReduction::for_rho(0, rho)?.check(t, tail.start - 1, tail.block_len)?;
    let qe = Enclosure::from_u64(prof.q);
    let rho_e = plan.rho_enclosure();
    let region3 = 2.0 * nu_enclosure(0, rho) * qe.sqrt() * qe.ln()
        / plan.scale_enclosure(tail.ell).sqrt()
        / (1.0 - 1.0 / rho_e.sqrt());
    let region3_with_blocks = region3 * Enclosure::exact(t.abs().ceil());

    let total = initial + region1 + region2 + region3;
    let closed = theorem_bound(&prof, b, b1, t)?;
    Ok(BoundBreakdown {
        q: prof.q,
        chi_index: chi.index(),
        t,
        rho,
        initial: initial.hi(),
        region1: region1.hi(),
        region2: region2.hi(),
        region3: region3.hi(),
        total: total.hi(),
        closed_form_zw: closed.lo(),
        region3_with_blocks: region3_with_blocks.hi(),
        weyl_segments: n0,
        kl_segments: n1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;
    use crate::expsums::nu_factor;
    use std::f64::consts::PI;

    #[test]
    fn nu_constants_match_formula() {
        let lam = 1.0 / 0.3f64.sqrt();
        for (j, eta) in [(0, 1.0 / (2.0 * PI)), (1, 1.0 / (4.0 * PI)), (2, 1.0 / (6.0 * PI))] {
            let e = nu_enclosure(j, 1.3);
            let f = nu_factor(j, lam, eta).unwrap();
            assert!((e.mid() - f).abs() < 1e-13 * f, "J={j}");
        }
    }

    #[test]
    fn principal_rejected() {
        let chi = &enumerate_characters(729).unwrap()[0];
        assert!(proof_replay(chi, 200.0).is_err());
        let chi = &enumerate_characters(64).unwrap()[1];
        assert!(matches!(proof_replay(chi, 150.0), Err(Error::TBelow200(_))));
    }

    #[test]
    fn replay_729_sums_regions() {
        let chars = enumerate_characters(729).unwrap();
        let chi = chars.iter().find(|c| c.is_primitive()).unwrap();
        let r = proof_replay(chi, 200.0).unwrap();
        let sum = r.initial + r.region1 + r.region2 + r.region3;
        assert!((r.total - sum).abs() <= 1e-9 * sum);
        assert!(r.weyl_segments > 0 && r.kl_segments > 0);
    }
}

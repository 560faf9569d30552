use crate::arith::{modulus_profile, ModulusProfile, PrimePowerProduct};
use crate::bounds::{proof_replay, BoundBreakdown};
use crate::characters::{postnikov, CharacterGroup, PostnikovData};
use crate::error::{Error, Result};
use crate::lfunc::{l_direct, LValue};
use serde::Serialize;
use std::fmt::Write as _;

/// Largest modulus `profile` will tabulate.
pub const PROFILE_MAX_Q: u64 = 1_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRow {
    pub index: u64,
    pub order: u64,
    pub conductor: u64,
    pub primitive: bool,
    pub even: bool,
    pub postnikov: PostnikovData,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileReport {
    pub profile: ModulusProfile,
    pub rows: Vec<ProfileRow>,
}

fn sixths(p: &PrimePowerProduct) -> String {
    if p.is_one() {
        return "1".into();
    }
    p.exponents()
        .iter()
        .map(|&(b, e)| format!("{b}^({e}/6)"))
        .collect::<Vec<_>>()
        .join("·")
}

impl ProfileReport {
    pub fn primitive_count(&self) -> usize {
        self.rows.iter().filter(|r| r.primitive).count()
    }

    pub fn render(&self) -> String {
        let p = &self.profile;
        let mut s = format!(
            "q = {}  C1={} D1={} C={} D={} Λ(D)={}  τ={} ω={} φ={}  sqf={} cbf={} spf={}\n",
            p.q,
            p.c1,
            p.d1,
            p.c,
            p.d,
            p.lambda_d,
            p.tau,
            p.omega,
            p.phi,
            sixths(&p.sqf),
            sixths(&p.cbf),
            sixths(&p.spf)
        );
        let _ = writeln!(
            s,
            "characters: {}, primitive: {}",
            self.rows.len(),
            self.primitive_count()
        );
        let _ = writeln!(
            s,
            "{:>8} {:>8} {:>9} {:>9} {:>5} {:>8} {:>6} {:>6} {:>8} {:>6}",
            "index", "order", "conductor", "primitive", "even", "L~", "B1", "L0", "L", "B"
        );
        for r in &self.rows {
            let pd = &r.postnikov;
            let _ = writeln!(
                s,
                "{:>8} {:>8} {:>9} {:>9} {:>5} {:>8} {:>6} {:>6} {:>8} {:>6}",
                r.index, r.order, r.conductor, r.primitive, r.even, pd.ltilde, pd.b1, pd.l0, pd.l, pd.b
            );
        }
        s
    }
}

pub fn cmd_profile(q: u64) -> Result<ProfileReport> {
    if q == 0 {
        return Err(Error::Usage("modulus must be positive".into()));
    }
    if q > PROFILE_MAX_Q {
        return Err(Error::ModulusTooLarge(q));
    }
    let profile = modulus_profile(q)?;
    let rows = CharacterGroup::new(q)?
        .characters()
        .into_iter()
        .map(|chi| {
            Ok(ProfileRow {
                index: chi.index(),
                order: chi.order(),
                conductor: chi.conductor(),
                primitive: chi.is_primitive(),
                even: chi.is_even(),
                postnikov: postnikov(&chi)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProfileReport { profile, rows })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplayReport {
    pub breakdown: BoundBreakdown,
    pub l: LValue,
}

impl ReplayReport {
    pub fn render(&self) -> String {
        let b = &self.breakdown;
        let mut s = format!("replay q = {} χ#{} t = {} ρ = {}\n", b.q, b.chi_index, b.t, b.rho);
        for (k, v) in [
            ("initial", b.initial),
            ("region1", b.region1),
            ("region2", b.region2),
            ("region3", b.region3),
            ("total", b.total),
            ("closed form", b.closed_form_zw),
            ("region3 with R_l", b.region3_with_blocks),
            ("|L| + err", self.l.abs_upper()),
        ] {
            let _ = writeln!(s, "  {k:<18} {v:>16.6}");
        }
        let _ = writeln!(
            s,
            "  segments: {} Weyl, {} Kusmin-Landau",
            b.weyl_segments, b.kl_segments
        );
        let _ = writeln!(
            s,
            "  |L| + err <= total: {}   total <= closed form: {}",
            self.l.abs_upper() <= b.total,
            !b.exceeds_closed_form()
        );
        s
    }
}

pub fn cmd_replay(q: u64, chi_index: u64, t: f64, eps: f64) -> Result<ReplayReport> {
    let chi = CharacterGroup::new(q)?.character(chi_index)?;
    let breakdown = proof_replay(&chi, t)?;
    let l = l_direct(&chi, t, eps)?;
    Ok(ReplayReport { breakdown, l })
}

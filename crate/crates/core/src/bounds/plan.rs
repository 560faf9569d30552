use crate::arith::ModulusProfile;
use crate::error::{Error, Result};
use crate::numeric::Enclosure;
use num_bigint::BigUint;
use serde::Serialize;

pub const RHO: f64 = 1.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `ℓ < ℓ₀`, blocks of length `~ ρ^ℓ v₀ / |t|^{1/3}`.
    Weyl,
    /// `ℓ₀ <= ℓ < ℓ₁`, blocks of length `~ ρ^ℓ v₀ / |t|^{1/2}`.
    KusminLandau,
    /// `ℓ >= ℓ₁`, blocks of length `~ ρ^ℓ v₀ / |t|`.
    Tail,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub ell: u32,
    pub regime: Regime,
    /// `⌈ρ^ℓ v₀⌉`, the first `n` of the segment, i.e. `N_{0,ℓ} + 1`.
    pub start: u64,
    pub block_len: u64,
    pub blocks: u64,
}

impl Segment {
    /// `N_{r,ℓ} + 1`.
    pub fn block_start(&self, r: u64) -> u64 {
        self.start + r * self.block_len
    }
}

/// The dyadic decomposition. `ρ` is held as the exact ratio
/// `rho_num/rho_den`, and every ceiling and regime boundary is decided in
/// exact integer arithmetic, so boundary cases (e.g. `|t| = 1000`) land on
/// the mathematically correct side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicPlan {
    pub rho: f64,
    pub rho_num: u64,
    pub rho_den: u64,
    pub t: f64,
    pub v0: u64,
    /// Informational; regimes come from the exact comparisons.
    pub ell0: f64,
    pub ell1: f64,
    /// Segments `0 <= ℓ < ℓ₁`, plus the first tail segment.
    pub segments: Vec<Segment>,
}

impl DyadicPlan {
    pub fn regime_of(&self, ell: u32) -> Regime {
        self.segments
            .get(ell as usize)
            .map_or(Regime::Tail, |s| s.regime)
    }

    pub fn segments_in(&self, regime: Regime) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(move |s| s.regime == regime)
    }

    /// `ρ^ℓ v₀` as a double.
    pub fn scale(&self, ell: u32) -> f64 {
        self.rho.powi(ell as i32) * self.v0 as f64
    }

    pub fn rho_enclosure(&self) -> Enclosure {
        Enclosure::from_u64(self.rho_num) / Enclosure::from_u64(self.rho_den)
    }

    /// `ρ^ℓ v₀` as an enclosure.
    pub fn scale_enclosure(&self, ell: u32) -> Enclosure {
        self.rho_enclosure().powi(ell) * Enclosure::from_u64(self.v0)
    }
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn to_u64(x: &BigUint) -> Result<u64> {
    u64::try_from(x).map_err(|_| Error::PreconditionViolated("dyadic plan exceeds u64".into()))
}

/// A finite positive double as an exact fraction `(num, den)`.
fn dyadic(x: f64) -> (BigUint, BigUint) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), exp - 1075)
    };
    if e >= 0 {
        (big(m) << e as usize, big(1))
    } else {
        (big(m), big(1) << (-e) as usize)
    }
}

/// `ρ = n/d` with `d | 10^6`, the decimal the caller wrote.
fn rho_ratio(rho: f64) -> Result<(u64, u64)> {
    let mut d = 1u64;
    for _ in 0..=6 {
        let n = (rho * d as f64).round();
        if n < 9e15 && n / d as f64 == rho {
            let n = n as u64;
            let g = crate::arith::gcd(n, d);
            return Ok((n / g, d / g));
        }
        d *= 10;
    }
    Err(Error::PreconditionViolated(format!(
        "rho must be a decimal with at most 6 places, got {rho}"
    )))
}

/// Smallest `v >= 0` with `v^k · den >= num`, starting from a float guess.
fn ceil_root(num: &BigUint, den: &BigUint, k: u32, guess: f64) -> u64 {
    let ok = |v: u64| big(v).pow(k) * den >= *num;
    let mut v = if guess.is_finite() && guess > 0.0 {
        guess.ceil() as u64
    } else {
        0
    };
    while !ok(v) {
        v += 1;
    }
    while v > 0 && ok(v - 1) {
        v -= 1;
    }
    v
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - 1u32) / b
}

const MAX_SEGMENTS: u32 = 10_000;

pub fn dyadic_plan(profile: &ModulusProfile, t: f64, rho: f64) -> Result<DyadicPlan> {
    if !(t.abs() >= 200.0) || !t.is_finite() {
        return Err(Error::TBelow200(t));
    }
    if !(rho > 1.0) {
        return Err(Error::PreconditionViolated(format!("rho must exceed 1, got {rho}")));
    }
    let (rn, rd) = rho_ratio(rho)?;
    let at = t.abs();
    let (tn, td) = dyadic(at);
    let (c, d, q) = (profile.c, profile.d, profile.q);
    let (cf, df, qf) = (c as f64, d as f64, q as f64);

    // v0^3 (ρ-1)^6 >= C^3 |t|
    let v0 = ceil_root(
        &(big(c).pow(3) * &tn * big(rd).pow(6)),
        &(big(rn - rd).pow(6) * &td),
        3,
        cf * at.cbrt() / ((rho - 1.0) * (rho - 1.0)),
    )
    .max(1);
    let ell0 = (cf * df * at.powf(2.0 / 3.0) / v0 as f64).ln() / rho.ln();
    let ell1 = (qf * at / (5.0 * v0 as f64)).ln() / rho.ln();

    let cd3 = big(c * d).pow(3);
    let mut segments = Vec::new();
    for ell in 0..MAX_SEGMENTS {
        // ρ^ℓ v0 = s_num / s_den
        let s_num = big(v0) * big(rn).pow(ell);
        let s_den = big(rd).pow(ell);
        let regime = if s_num.pow(3) * td.pow(2) < &cd3 * tn.pow(2) * s_den.pow(3) {
            Regime::Weyl
        } else if big(5) * &s_num * &td < big(q) * &tn * &s_den {
            Regime::KusminLandau
        } else {
            Regime::Tail
        };
        let k = match regime {
            Regime::Weyl => 3,
            Regime::KusminLandau => 2,
            Regime::Tail => 1,
        };
        let w_num = big(rn - rd) * &s_num;
        let w_den = big(rd) * &s_den;
        let width = (rho - 1.0) * rho.powi(ell as i32) * v0 as f64;
        // L^k |t| >= width^k
        let block_len = ceil_root(
            &(w_num.pow(k) * &td),
            &(w_den.pow(k) * &tn),
            k,
            width / at.powf(1.0 / k as f64),
        )
        .max(1);
        let blocks = to_u64(&ceil_div(&w_num, &(&w_den * big(block_len))))?;
        let start = to_u64(&ceil_div(&s_num, &s_den))?;
        segments.push(Segment {
            ell,
            regime,
            start,
            block_len,
            blocks,
        });
        if regime == Regime::Tail {
            break;
        }
    }
    if segments.last().map(|s| s.regime) != Some(Regime::Tail) {
        return Err(Error::PreconditionViolated("dyadic plan did not reach the tail".into()));
    }
    Ok(DyadicPlan {
        rho,
        rho_num: rn,
        rho_den: rd,
        t,
        v0,
        ell0,
        ell1,
        segments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::modulus_profile;

    #[test]
    fn v0_for_729() {
        let p = modulus_profile(729).unwrap();
        let plan = dyadic_plan(&p, 200.0, RHO).unwrap();
        assert_eq!(plan.v0, 585);
        assert!(plan.ell0 < plan.ell1);
    }

    #[test]
    fn segments_are_covered() {
        for q in [64u64, 729, 1000, 3 * 3 * 3 * 5 * 5] {
            let p = modulus_profile(q).unwrap();
            for t in [200.0, 1234.5, 5000.0] {
                let plan = dyadic_plan(&p, t, RHO).unwrap();
                for s in &plan.segments {
                    let width = (RHO - 1.0) * plan.scale(s.ell);
                    assert!((s.blocks * s.block_len) as f64 >= width);
                    let bound = match s.regime {
                        Regime::Weyl => RHO * t.cbrt(),
                        Regime::KusminLandau => RHO * t.sqrt(),
                        Regime::Tail => f64::INFINITY,
                    };
                    assert!(s.blocks as f64 <= bound, "q={q} t={t} {s:?}");
                }
            }
        }
    }

    #[test]
    fn exact_boundary_at_t_1000() {
        // ρ v0 = 1300 and 0.3·1300/1000^{1/3} = 39 exactly
        let p = modulus_profile(729).unwrap();
        let plan = dyadic_plan(&p, 1000.0, RHO).unwrap();
        assert_eq!(plan.v0, 1000);
        let s = plan.segments[1];
        assert_eq!((s.start, s.block_len, s.blocks), (1300, 39, 10));
    }

    #[test]
    fn rho_must_be_short_decimal() {
        let p = modulus_profile(64).unwrap();
        assert!(dyadic_plan(&p, 200.0, std::f64::consts::SQRT_2).is_err());
        assert_eq!(rho_ratio(1.25).unwrap(), (5, 4));
    }

    #[test]
    fn rejects_small_t() {
        let p = modulus_profile(64).unwrap();
        assert!(matches!(dyadic_plan(&p, 150.0, RHO), Err(Error::TBelow200(_))));
    }
}

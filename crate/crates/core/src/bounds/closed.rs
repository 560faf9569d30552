//! Closed-form bounds for `|L(1/2+it, χ)|`, evaluated with outward rounding.

use crate::arith::{factorize, tau, ModulusProfile};
use crate::error::{Error, Result};
use crate::lfunc::zeta;
use crate::numeric::Enclosure;
use num_complex::Complex64;

pub const T0: f64 = 200.0;

fn k(x: f64) -> Enclosure {
    Enclosure::decimal(x)
}

fn conductor(q: u64, t: f64) -> Enclosure {
    Enclosure::from_u64(q) * Enclosure::exact(t.abs())
}

fn sixth_root(x: Enclosure) -> Enclosure {
    x.pow_ratio(1, 6)
}

fn check_t(t: f64) -> Result<()> {
    if !(t.abs() >= T0) {
        return Err(Error::TBelow200(t));
    }
    Ok(())
}

fn radical(r: Enclosure) -> Result<Enclosure> {
    if r.hi() < 0.0 {
        return Err(Error::NegativeRadicand(r.hi()));
    }
    Ok(Enclosure::new(r.lo().max(0.0), r.hi()).sqrt())
}

/// `Z(X)` of the main theorem; `btau = B τ(D/B)`.
pub fn z_poly(profile: &ModulusProfile, btau: u64, x: Enclosure) -> Result<Enclosure> {
    let cbf = profile.cbf.enclosure();
    let spf = profile.spf.enclosure();
    let lam = Enclosure::from_u64(profile.lambda_d);
    let (x2, x3) = (x.sqr(), x.powi(3));
    let cubic1 = k(65.5619) - k(17.1704) * x - k(2.4781) * x2 + k(0.6807) * x3;
    let cubic2 = -k(1732.5) - k(817.82) * x + k(71.68) * x2 + k(47.57) * x3;
    let r1 = radical(lam * cbf * cubic1)?;
    let r2 = radical(lam * cbf * Enclosure::from_u64(btau) * cubic2)?;
    Ok(k(6.6668) * cbf.sqrt() - k(16.0834) * spf + k(15.6004) * spf * x + k(1.7364) * r1
        + k(1.7364) * r2)
}

/// `W(X)` of the main theorem.
pub fn w_poly(profile: &ModulusProfile, b1: u64, x: Enclosure) -> Enclosure {
    let bs = Enclosure::from_u64(b1) * profile.sqf.enclosure();
    -k(101.152) - k(195.696) * bs + k(19.092) * x + k(94.978) * bs * x
}

/// `𝔮^{1/6} Z(log 𝔮) + W(log 𝔮)` with `𝔮 = q|t|`.
pub fn theorem_bound(profile: &ModulusProfile, b: u64, b1: u64, t: f64) -> Result<Enclosure> {
    check_t(t)?;
    if b == 0 || !profile.d.is_multiple_of(b) {
        return Err(Error::PreconditionViolated(format!(
            "B = {b} must divide D = {}",
            profile.d
        )));
    }
    let cq = conductor(profile.q, t);
    let x = cq.ln();
    let btau = b * tau(profile.d / b)?;
    Ok(sixth_root(cq) * z_poly(profile, btau, x)? + w_poly(profile, b1, x))
}

/// `9.05 τ(q) 𝔮^{1/6} log^{3/2} 𝔮` for sixth powers `q`.
pub fn corollary_bound(q: u64, t: f64) -> Result<Enclosure> {
    if !factorize(q)?.is_sixth_power() {
        return Err(Error::NotSixthPower(q));
    }
    check_t(t)?;
    let cq = conductor(q, t);
    let x = cq.ln();
    Ok(k(9.05) * Enclosure::from_u64(tau(q)?) * sixth_root(cq) * x.pow_ratio(3, 2))
}

/// `124.46 𝔮^{1/4}` for primitive `χ`, `𝔮 >= 10^9`, `|t| >= √q`.
pub fn convexity_bound(q: u64, t: f64) -> Result<Enclosure> {
    let cq = conductor(q, t);
    if q <= 1 || (q as f64) * t.abs() < 1e9 || t * t < q as f64 {
        return Err(Error::PreconditionViolated(format!(
            "convexity bound needs q > 1, q|t| >= 1e9, |t| >= √q (q = {q}, t = {t})"
        )));
    }
    Ok(k(124.46) * cq.pow_ratio(1, 4))
}

/// `4 q^{1/4} √((|t|+1) log q)` for primitive `χ`, `q > 1`.
pub fn partial_summation_bound(q: u64, t: f64) -> Result<Enclosure> {
    if q <= 1 {
        return Err(Error::PreconditionViolated(
            "partial summation bound needs q > 1".into(),
        ));
    }
    let qe = Enclosure::from_u64(q);
    Ok(4.0 * qe.pow_ratio(1, 4) * ((Enclosure::exact(t.abs()) + 1.0) * qe.ln()).sqrt())
}

/// `0.63 τ(q) 𝔮^{1/6} log 𝔮` for the principal character, `|t| >= 3`.
pub fn principal_bound(q: u64, t: f64) -> Result<Enclosure> {
    if !(t.abs() >= 3.0) {
        return Err(Error::PreconditionViolated(format!(
            "principal bound needs |t| >= 3, got {t}"
        )));
    }
    let cq = conductor(q, t);
    Ok(k(0.63) * Enclosure::from_u64(tau(q)?) * sixth_root(cq) * cq.ln())
}

/// `(q|1+σ+it|/2π)^{(1+η-σ)/2} ζ(1+η)` for primitive `χ`.
pub fn rademacher_bound(q: u64, sigma: f64, t: f64, eta: f64) -> Result<Enclosure> {
    if !(eta > 0.0 && eta <= 0.5) || !(sigma <= 1.0 + eta) || !(sigma >= -eta) {
        return Err(Error::PreconditionViolated(format!(
            "need 0 < η <= 1/2 and -η <= σ <= 1 + η, got σ = {sigma}, η = {eta}"
        )));
    }
    let z = zeta(Complex64::new(1.0 + eta, 0.0), 1e-10)?;
    let zeta_enc = Enclosure::new(z.value.re - z.err, z.value.re + z.err);
    let a = Enclosure::exact(1.0 + sigma);
    let modulus = (a.sqr() + Enclosure::exact(t).sqr()).sqrt();
    let base = Enclosure::from_u64(q) * modulus / (2.0 * Enclosure::PI);
    let expo = (1.0 + eta - sigma) / 2.0;
    // exponent is a double; bracket it to stay sound
    let lo = base.lo().powf(if base.lo() >= 1.0 { expo.next_down() } else { expo.next_up() });
    let hi = base.hi().powf(if base.hi() >= 1.0 { expo.next_up() } else { expo.next_down() });
    Ok(Enclosure::new(lo.next_down(), hi.next_up()) * zeta_enc)
}

/// `∏ (1 + 1/√p)` over primes `p | q` with `p ∤ q₁`.
pub fn imprimitive_lift(q: u64, q1: u64) -> Result<Enclosure> {
    if q1 == 0 || !q.is_multiple_of(q1) {
        return Err(Error::PreconditionViolated(format!("{q1} does not divide {q}")));
    }
    let mut acc = Enclosure::exact(1.0);
    for p in factorize(q)?.primes() {
        if !q1.is_multiple_of(p) {
            acc = acc * (1.0 + 1.0 / Enclosure::from_u64(p).sqrt());
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::modulus_profile;

    #[test]
    fn corollary_at_64() {
        let c = corollary_bound(64, 200.0).unwrap();
        let x = 12800f64.ln();
        let want = 9.05 * 7.0 * 12800f64.powf(1.0 / 6.0) * x.powf(1.5);
        assert!(c.contains(want) || (c.mid() - want).abs() < 1e-9 * want);
        assert!((c.mid() - 8.9e3).abs() < 0.1e3);
        assert!(matches!(corollary_bound(12, 200.0), Err(Error::NotSixthPower(12))));
        assert!(matches!(corollary_bound(64, 100.0), Err(Error::TBelow200(_))));
    }

    #[test]
    fn convexity_spot_value() {
        let c = convexity_bound(10, 1e8).unwrap();
        assert!(c.contains(124.46 * 177.82794100389228));
        assert!((c.mid() - 2.213e4).abs() < 5.0);
        assert!(convexity_bound(10, 1e7).is_err());
    }

    #[test]
    fn partial_summation_spot_value() {
        let p = partial_summation_bound(5, 0.0).unwrap();
        let want = 4.0 * 5f64.powf(0.25) * 5f64.ln().sqrt();
        assert!((p.mid() - want).abs() < 1e-12);
        assert!((p.mid() - 7.59).abs() < 0.01);
    }

    #[test]
    fn lift_examples() {
        let l = imprimitive_lift(12, 3).unwrap();
        assert!(l.contains(1.0 + 0.5f64.sqrt()) || (l.mid() - 1.7071067811865475).abs() < 1e-14);
        assert_eq!(imprimitive_lift(7, 7).unwrap().mid(), 1.0);
        assert!(imprimitive_lift(12, 5).is_err());
    }

    #[test]
    fn theorem_bound_positive_and_monotone_in_btau() {
        let p = modulus_profile(729).unwrap();
        let a = theorem_bound(&p, 1, 1, 200.0).unwrap();
        assert!(a.lo() > 0.0 && a.is_finite());
        let b = theorem_bound(&p, 9, 1, 200.0).unwrap();
        assert!(b.lo() >= a.lo());
        assert!(matches!(theorem_bound(&p, 1, 1, 150.0), Err(Error::TBelow200(_))));
    }

    #[test]
    fn rademacher_finite() {
        let r = rademacher_bound(5, 0.5, 300.0, 0.5).unwrap();
        assert!(r.lo() > 0.0 && r.is_finite());
        assert!(rademacher_bound(5, 0.5, 300.0, 0.6).is_err());
    }
}

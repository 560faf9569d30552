//! Certified checks of the numerical inequalities behind the corollary.

use crate::arith::{factorize, lambda_count, modulus_profile, tau};
use crate::error::Result;
use crate::numeric::Enclosure;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub id: &'static str,
    pub verified: bool,
    /// Smallest certified `rhs - lhs` (integer checks: smallest exact slack).
    pub min_slack: f64,
    /// Where the minimal slack (or the first failure) occurs.
    pub location: String,
}

const GRID_STEPS: usize = 200_000;
const X_MAX: f64 = 200.0;

/// Certifies `g(X) >= 0` on `[a, b]` by evaluating `g` over each grid cell
/// as an enclosure.
fn certify_interval(id: &'static str, a: f64, b: f64, g: impl Fn(Enclosure) -> Enclosure) -> InequalityCheck {
    let h = (b - a) / GRID_STEPS as f64;
    let mut min = f64::INFINITY;
    let mut at = a;
    for i in 0..GRID_STEPS {
        let lo = a + h * i as f64;
        let hi = if i + 1 == GRID_STEPS { b } else { a + h * (i + 1) as f64 };
        let v = g(Enclosure::new(lo.next_down(), hi.next_up())).lo();
        if v < min {
            min = v;
            at = lo;
        }
    }
    InequalityCheck {
        id,
        verified: min >= 0.0,
        min_slack: min,
        location: format!("X ≈ {at:.6}"),
    }
}

fn k(x: f64) -> Enclosure {
    Enclosure::decimal(x)
}

pub fn corollary_inequality_checks() -> Result<Vec<InequalityCheck>> {
    let x_small = (Enclosure::exact(400.0)).ln().lo();
    let x_big = (Enclosure::exact(12800.0)).ln().lo();
    let mut out = Vec::new();

    out.push(certify_interval("cubic_0.6807", x_small, X_MAX, |x| {
        -(k(65.5619) - k(17.1704) * x - k(2.4781) * x.sqr())
    }));
    out.push(certify_interval("cubic_49.1", x_small, X_MAX, |x| {
        let x3 = x.powi(3);
        k(49.1) * x3 - (-k(1732.0) - k(817.82) * x + k(71.68) * x.sqr() + k(47.57) * x3)
    }));
    out.push(certify_interval("z_chain_7.95", x_big, X_MAX, |x| {
        let x32 = x.pow_ratio(3, 2);
        k(7.95) * x32 - (-k(1.3451) + k(2.2287) * x + k(7.2695) * x32)
    }));
    out.push(certify_interval("w_chain_16.30", x_big, X_MAX, |x| {
        k(16.30) * x - (-k(42.4056) + k(16.2958) * x)
    }));

    out.push(lambda_le_tau(100_000)?);
    out.push(lambda_le_tau_prime_powers(100_000)?);
    out.push(tau_d_sixth_powers(100_000_000)?);
    out.push(absorption());
    Ok(out)
}

/// `Λ(D) <= τ(D)` for `D <= n_max`, hence `√(Λτ) <= τ`.
fn lambda_le_tau(n_max: u64) -> Result<InequalityCheck> {
    let mut min = i64::MAX;
    let mut at = 1;
    for d in 1..=n_max {
        let s = tau(d)? as i64 - lambda_count(d)? as i64;
        if s < min {
            min = s;
            at = d;
        }
    }
    Ok(InequalityCheck {
        id: "sqrt_lambda_tau_le_tau",
        verified: min >= 0,
        min_slack: min as f64,
        location: format!("D = {at}"),
    })
}

fn lambda_le_tau_prime_powers(n_max: u64) -> Result<InequalityCheck> {
    let mut min = i64::MAX;
    let mut at = 1;
    for n in 2..=n_max {
        let f = factorize(n)?;
        if f.omega() != 1 {
            continue;
        }
        let s = f.tau() as i64 - lambda_count(n)? as i64;
        if s < min {
            min = s;
            at = n;
        }
    }
    Ok(InequalityCheck {
        id: "lambda_le_tau_prime_powers",
        verified: min >= 0,
        min_slack: min as f64,
        location: format!("p^a = {at}"),
    })
}

/// `τ(D) <= 0.572 τ(q)` for sixth powers `1 < q <= q_max`, checked as
/// `1000 τ(D) <= 572 τ(q)`.
fn tau_d_sixth_powers(q_max: u64) -> Result<InequalityCheck> {
    let mut min = i64::MAX;
    let mut at = 0;
    let mut m = 2u64;
    while m.pow(6) <= q_max {
        let q = m.pow(6);
        let p = modulus_profile(q)?;
        let slack = 572 * p.tau as i64 - 1000 * tau(p.d)? as i64;
        if slack < min {
            min = slack;
            at = q;
        }
        m += 1;
    }
    Ok(InequalityCheck {
        id: "tau_d_le_0.572_tau_q",
        verified: min >= 0,
        min_slack: min as f64 / 1000.0,
        location: format!("q = {at}"),
    })
}

/// `7.95 τ 𝔮^{1/6} X^{3/2} + 16.30 τ X <= 9.05 τ 𝔮^{1/6} X^{3/2}` reduces to
/// `𝔮^{1/6} X^{1/2} >= 16.30/1.10`, increasing in `𝔮`; checked at `𝔮 = 2^6·200`.
fn absorption() -> InequalityCheck {
    let cq = Enclosure::exact(12800.0);
    let lhs = cq.pow_ratio(1, 6) * cq.ln().sqrt();
    let rhs = k(16.30) / (k(9.05) - k(7.95));
    let slack = (lhs - rhs).lo();
    InequalityCheck {
        id: "absorption_9.05",
        verified: slack >= 0.0,
        min_slack: slack,
        location: "q|t| = 12800".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_at_six() {
        let x = 6.0f64;
        let lhs = 65.5619 - 17.1704 * x - 2.4781 * x * x;
        assert!((lhs - (65.5619 - 103.0224 - 89.2116)).abs() < 1e-9);
        assert!(lhs < 0.0);
    }

    #[test]
    fn absorption_slack() {
        let a = absorption();
        assert!(a.verified);
        // 14.8736 vs 16.30/1.10 = 14.8182
        assert!((a.min_slack - 0.055425).abs() < 1e-4, "{a:?}");
    }
}

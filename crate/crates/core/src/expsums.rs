//! Twisted exponential sums `Σ χ(n) e^{2πi f(n)}` with `f(x) = -(t/2π) log x`,
//! and the explicit estimates used to bound them.

use crate::arith::{gcd, ModulusProfile};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::numeric::special::cis_turns;
use crate::numeric::{ComplexSum, Dd};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{E, PI};

/// Largest `N + L` accepted by the brute-force sums.
pub const MAX_RANGE: u64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseFunction {
    pub t: f64,
}

impl PhaseFunction {
    pub fn new(t: f64) -> Self {
        Self { t }
    }

    pub fn value(&self, x: f64) -> f64 {
        -self.t / (2.0 * PI) * x.ln()
    }

    /// `f(n)` in double-double.
    pub fn value_dd(&self, n: u64) -> Dd {
        -(Dd::from_f64(self.t) * Dd::from_u64(n).ln() / Dd::TWO_PI)
    }

    pub fn d1(&self, x: f64) -> f64 {
        -self.t / (2.0 * PI * x)
    }

    pub fn d2(&self, x: f64) -> f64 {
        self.t / (2.0 * PI * x * x)
    }

    /// `|f^{(j)}(x)| / j! = |t| / (2π j x^j)` for `j >= 1`.
    pub fn taylor_coeff_abs(&self, j: u32, x: f64) -> f64 {
        self.t.abs() / (2.0 * PI * j as f64 * x.powi(j as i32))
    }
}

pub fn nu_factor(j: u32, lambda: f64, eta: f64) -> Result<f64> {
    if !(lambda > 1.0) {
        return Err(Error::InvalidLambda(lambda));
    }
    let r = lambda.powi(-(j as i32)) / (lambda - 1.0);
    Ok((1.0 + r) * (2.0 * PI * eta * r).exp())
}

/// Parameters of a Taylor reduction of order `J`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TaylorReduction {
    pub j: u32,
    pub lambda: f64,
    pub eta: f64,
    pub nu: f64,
}

impl TaylorReduction {
    pub fn new(j: u32, lambda: f64, eta: f64) -> Result<Self> {
        Ok(Self {
            j,
            lambda,
            eta,
            nu: nu_factor(j, lambda, eta)?,
        })
    }

    /// The reductions used with dyadic ratio `rho`: `λ = 1/√(ρ-1)` and
    /// `η = 1/(2π(J+1))`.
    pub fn for_rho(j: u32, rho: f64) -> Result<Self> {
        Self::new(j, 1.0 / (rho - 1.0).sqrt(), 1.0 / (2.0 * PI * (j + 1) as f64))
    }

    /// Checks `|f^{(j)}(N+1)|/j! · λ^j (L-1)^j <= η/λ^j` for all `j > J`,
    /// together with analyticity on the disk of radius `λ(L-1)`.
    ///
    /// With `u = λ²(L-1)/(N+1) < 1` the left side, `|t| u^j/(2πj)`, is
    /// decreasing in `j`, so only `j = J + 1` needs checking.
    pub fn check(&self, t: f64, n: u64, l: u64) -> Result<()> {
        if l <= 1 {
            return Ok(());
        }
        let u = self.lambda * self.lambda * (l - 1) as f64 / (n + 1) as f64;
        if u >= 1.0 {
            return Err(Error::HypothesisViolated(format!(
                "λ²(L-1)/(N+1) = {u} >= 1 at N = {n}, L = {l}"
            )));
        }
        let j1 = self.j + 1;
        let lhs = t.abs() * u.powi(j1 as i32) / (2.0 * PI * j1 as f64);
        if lhs > self.eta {
            return Err(Error::HypothesisViolated(format!(
                "order-{j1} term {lhs} exceeds η = {} at N = {n}, L = {l}, t = {t}",
                self.eta
            )));
        }
        Ok(())
    }

    pub fn holds(&self, t: f64, n: u64, l: u64) -> bool {
        self.check(t, n, l).is_ok()
    }
}

fn range_guard(n: u64, l: u64) -> Result<()> {
    match n.checked_add(l) {
        Some(s) if s <= MAX_RANGE => Ok(()),
        _ => Err(Error::RangeTooLarge(n.saturating_add(l))),
    }
}

fn char_phase_dd(chi: &DirichletCharacter, n: u64) -> Option<Dd> {
    chi.phase_num(n)
        .map(|k| Dd::from_u64(k) / Dd::from_u64(chi.exp_den()))
}

/// `Σ_{n=N+1}^{N+L} χ(n) n^{-it}` by direct summation. Returns the value and
/// a bound on its accumulated rounding error.
pub fn twisted_sum(chi: &DirichletCharacter, t: f64, n: u64, l: u64) -> Result<(Complex64, f64)> {
    range_guard(n, l)?;
    let f = PhaseFunction::new(t);
    let mut s = ComplexSum::new();
    for m in (n + 1)..=(n + l) {
        if let Some(c) = char_phase_dd(chi, m) {
            s.add(cis_turns((c + f.value_dd(m)).frac()));
        }
    }
    Ok((s.value(), l as f64 * 2f64.powi(-48)))
}

/// `max_{0<=Δ<L} |Σ_{n=N+1+Δ}^{N+L} χ(n) e^{2πi P_J(n-N-1)}|` where `P_J` is
/// the degree-`J` Taylor polynomial of `f` at `N + 1`.
pub fn taylor_model_max(chi: &DirichletCharacter, t: f64, n: u64, l: u64, j: u32) -> Result<f64> {
    range_guard(n, l)?;
    let f = PhaseFunction::new(t);
    assert!(j <= 2, "Taylor model implemented for J <= 2");
    let c0 = f.value_dd(n + 1);
    let c1 = Dd::from_f64(-t) / (Dd::TWO_PI * Dd::from_u64(n + 1));
    let c2 = Dd::from_f64(t) / (Dd::TWO_PI.scale2(1) * Dd::from_u64(n + 1).sqr());
    let mut best = 0.0f64;
    let mut acc = ComplexSum::new();
    for m in ((n + 1)..=(n + l)).rev() {
        if let Some(c) = char_phase_dd(chi, m) {
            let x = Dd::from_u64(m - n - 1);
            let mut p = c0;
            if j >= 1 {
                p = p + c1 * x;
            }
            if j >= 2 {
                p = p + c2 * x.sqr();
            }
            acc.add(cis_turns((c + p).frac()));
        }
        best = best.max(acc.value().norm());
    }
    Ok(best)
}

/// `Σ_{y_r ∈ [x,y]} min(P, ‖y_r‖^{-1})` bound for a `δ`-spaced set.
/// `delta = ∞` encodes a single point.
pub fn wellspacing_bound(p: f64, delta: f64, x: f64, y: f64) -> f64 {
    assert!(delta > 0.0, "wellspacing_bound needs delta > 0");
    assert!(y >= x, "wellspacing_bound needs y >= x");
    let inv = 1.0 / delta;
    if p >= 2.0 {
        2.0 * (y - x + 1.0) * (2.0 * p + inv * (E * p / 2.0).ln())
    } else {
        2.0 * (y - x + 1.0) * (p + inv)
    }
}

/// Kusmin–Landau for a linear phase: `min(K, 1/(π‖α‖) + 1)`.
pub fn linear_exp_sum_bound(alpha: f64, length: u64) -> f64 {
    let d = (alpha - alpha.round()).abs();
    let k = length as f64;
    if d == 0.0 {
        k
    } else {
        k.min(1.0 / (PI * d) + 1.0)
    }
}

/// Nearest-integer split of `qf'(N+1)/B₁`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KusminLandauTerm {
    pub z_f: f64,
    pub delta_f: f64,
}

impl KusminLandauTerm {
    pub fn new(profile: &ModulusProfile, b1: u64, t: f64, n: u64) -> Self {
        let v = -(Dd::from_u64(profile.q) * Dd::from_f64(t))
            / (Dd::TWO_PI * Dd::from_u64(b1) * Dd::from_u64(n + 1));
        let (z, d) = v.split_nearest();
        Self {
            z_f: z.to_f64(),
            delta_f: d.to_f64(),
        }
    }

    /// `U` value `‖(ℓ + z_f + δ_f)/(D₁/B₁)‖` for a residue `ℓ`.
    pub fn u_value(&self, ell: i64, d1_over_b1: u64) -> f64 {
        let v = (Dd::from_f64(ell as f64) + Dd::from_f64(self.z_f) + Dd::from_f64(self.delta_f))
            / Dd::from_u64(d1_over_b1);
        v.dist_to_int()
    }
}

/// Data of the `m`-th shift in the differencing step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DifferencedTerm {
    pub m: u64,
    pub d_m: u64,
    pub m_prime: u64,
    pub p_m: u64,
    pub lambda_m: u64,
    pub w_m: f64,
    pub eps_m: f64,
}

impl DifferencedTerm {
    pub fn new(profile: &ModulusProfile, b: u64, m: u64, t: f64, n: u64) -> Result<Self> {
        let (c, d) = (profile.c, profile.d);
        let d_m = gcd(2 * m, d / b);
        let p_m = d / (b * d_m);
        // P_m m C² f''(N+1)
        let v = Dd::from_u64(p_m) * Dd::from_u64(m) * Dd::from_u64(c).sqr() * Dd::from_f64(t)
            / (Dd::TWO_PI * Dd::from_u64(n + 1).sqr());
        let (w, e) = v.split_nearest();
        Ok(Self {
            m,
            d_m,
            m_prime: 2 * m / d_m,
            p_m,
            lambda_m: crate::arith::lambda_count(p_m)?,
            w_m: w.to_f64(),
            eps_m: e.to_f64(),
        })
    }
}

/// `‖m C² D f''(N+1) / (B d_m)‖`, reduced in double-double.
pub fn differenced_distance(profile: &ModulusProfile, b: u64, m: u64, d_m: u64, t: f64, n: u64) -> f64 {
    let v = Dd::from_u64(m) * Dd::from_u64(profile.c).sqr() * Dd::from_u64(profile.d) * Dd::from_f64(t)
        / (Dd::TWO_PI * Dd::from_u64(b) * Dd::from_u64(d_m) * Dd::from_u64(n + 1).sqr());
    v.dist_to_int()
}

fn inv_or_inf(x: f64) -> f64 {
    if x == 0.0 {
        f64::INFINITY
    } else {
        1.0 / x
    }
}

/// Right-hand side of the first-derivative (Kusmin–Landau) estimate for
/// `|Σ_{n=N+1}^{N+L} χ(n) n^{-it}|`.
pub fn corput1_bound(
    profile: &ModulusProfile,
    b1: u64,
    red: &TaylorReduction,
    t: f64,
    n: u64,
    l: u64,
) -> Result<f64> {
    if red.j != 1 {
        return Err(Error::PreconditionViolated("corput1_bound needs J = 1".into()));
    }
    red.check(t, n, l)?;
    let (q, c1, d1) = (profile.q as f64, profile.c1 as f64, profile.d1 as f64);
    let nu = red.nu;
    let b1f = b1 as f64;
    let head = 2.0 * nu * c1 / PI * ((d1 / (2.0 * b1f)).ln() + 1.75 + PI / 2.0);
    let kl = KusminLandauTerm::new(profile, b1, t, n);
    let tail = nu * c1 / PI * (PI * b1f * l as f64 / q).min(inv_or_inf(kl.delta_f.abs()));
    Ok(head + tail)
}

/// Square of the second-derivative (Weyl differencing) estimate, before the
/// square root.
pub fn corput2_rhs_squared(
    profile: &ModulusProfile,
    b: u64,
    lambda_d: u64,
    red: &TaylorReduction,
    t: f64,
    n: u64,
    l: u64,
) -> Result<f64> {
    if red.j != 2 {
        return Err(Error::PreconditionViolated("corput2_bound needs J = 2".into()));
    }
    red.check(t, n, l)?;
    let (c, d) = (profile.c, profile.d);
    let (cf, df, bf, lam) = (c as f64, d as f64, b as f64, lambda_d as f64);
    let k = 4.0 * red.nu * red.nu * lam / PI;
    let first = k * cf * l as f64 * ((df / (2.0 * bf)).ln() + 1.75 + 3.0 * PI / (2.0 * lam));
    let big_m = l.div_ceil(c);
    let mut s = crate::numeric::NeumaierSum::new();
    for m in 1..=big_m {
        let w = 1.0 - m as f64 / big_m as f64;
        if w == 0.0 {
            continue;
        }
        let d_m = gcd(2 * m, d / b);
        let p = PI * d_m as f64 * bf * l as f64 / (cf * df);
        let dist = differenced_distance(profile, b, m, d_m, t, n);
        s.add(w * p.min(inv_or_inf(dist)));
    }
    Ok(first + k * cf * cf * s.value())
}

pub fn corput2_bound(
    profile: &ModulusProfile,
    b: u64,
    lambda_d: u64,
    red: &TaylorReduction,
    t: f64,
    n: u64,
    l: u64,
) -> Result<f64> {
    Ok(corput2_rhs_squared(profile, b, lambda_d, red, t, n, l)?.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::modulus_profile;
    use crate::characters::enumerate_characters;

    #[test]
    fn nu_examples() {
        assert_eq!(nu_factor(0, 2.0, 0.0).unwrap(), 2.0);
        assert!((nu_factor(60, 2.0, 0.3).unwrap() - 1.0).abs() < 1e-9);
        assert!(matches!(nu_factor(1, 1.0, 0.1), Err(Error::InvalidLambda(_))));
        let lam = 1.0 / 0.3f64.sqrt();
        assert!((nu_factor(1, lam, 1.0 / (4.0 * PI)).unwrap() - 2.318).abs() < 1e-3);
    }

    #[test]
    fn wellspacing_examples() {
        assert_eq!(wellspacing_bound(1.0, 1.0, 3.0, 3.0), 4.0);
        let want = 2.0 * (8.0 + 2.0 * (2.0 * E).ln());
        assert!((wellspacing_bound(4.0, 0.5, 0.0, 0.0) - want).abs() < 1e-14);
    }

    #[test]
    fn linear_bound_examples() {
        assert!((linear_exp_sum_bound(0.5, 100) - (2.0 / PI + 1.0)).abs() < 1e-15);
        assert_eq!(linear_exp_sum_bound(3.0, 17), 17.0);
    }

    #[test]
    fn twisted_sum_trivial_lengths() {
        let chi = &enumerate_characters(9).unwrap()[1];
        let (s, e) = twisted_sum(chi, 200.0, 5, 0).unwrap();
        assert_eq!(s, Complex64::new(0.0, 0.0));
        assert_eq!(e, 0.0);
        let (s, _) = twisted_sum(chi, 200.0, 6, 1).unwrap();
        let want = chi.eval_complex(7) * Complex64::from_polar(1.0, -200.0 * 7f64.ln());
        assert!((s - want).norm() < 1e-12);
        assert!(twisted_sum(chi, 1.0, MAX_RANGE, 1).is_err());
    }

    #[test]
    fn hypothesis_rejects_long_blocks() {
        let red = TaylorReduction::for_rho(1, 1.3).unwrap();
        assert!(red.holds(1000.0, 10_000, 10));
        assert!(!red.holds(1000.0, 100, 50));
        let p = modulus_profile(9).unwrap();
        assert!(corput1_bound(&p, 1, &red, 1000.0, 100, 50).is_err());
    }

    #[test]
    fn corput2_weights_sum() {
        // Σ_{m=1}^{M} (1 - m/M) = (M-1)/2
        for big_m in 1..50u64 {
            let s: f64 = (1..=big_m).map(|m| 1.0 - m as f64 / big_m as f64).sum();
            assert!((s - (big_m - 1) as f64 / 2.0).abs() < 1e-12);
        }
    }
}

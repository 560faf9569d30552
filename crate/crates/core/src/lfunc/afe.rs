use super::{LValue, Method};
use crate::characters::{gauss_sum, DirichletCharacter};
use crate::error::{Error, Result};
use crate::numeric::special::{ln_cosh, ln_gamma};
use crate::numeric::ComplexSum;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AfeResult {
    pub n1: u64,
    pub main_sum: Complex64,
    pub dual_sum: Complex64,
    pub f: Complex64,
    pub delta_t: f64,
    pub remainder_bound: f64,
}

impl AfeResult {
    pub fn value(&self) -> Complex64 {
        self.main_sum + self.f * self.dual_sum
    }
}

pub fn delta_t(t: f64) -> f64 {
    (PI / (24.0 * t) + 1.0 / (12.0 * t * t)).exp_m1()
}

pub fn afe_remainder_bound(q: u64, t: f64) -> f64 {
    let qf = q as f64;
    264.72 * qf.powf(0.25) * qf.ln() / t.powf(0.25)
        + 11.39 * qf.powf(0.75) * (-0.78 * (t / qf).sqrt()).exp() / t.powf(0.75)
}

fn gauss_cache() -> &'static RwLock<HashMap<(u64, u64), Complex64>> {
    static CACHE: OnceLock<RwLock<HashMap<(u64, u64), Complex64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `G(χ, -1)`, memoized per `(q, index)`.
pub fn cached_gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    let key = (chi.modulus(), chi.index());
    if let Some(&g) = gauss_cache().read().expect("gauss cache").get(&key) {
        return g;
    }
    let g = gauss_sum(chi, -1);
    gauss_cache().write().expect("gauss cache").insert(key, g);
    g
}

/// Approximate functional equation with `X = Y = √(qt/2π)`.
pub fn afe_eval(chi: &DirichletCharacter, t: f64) -> Result<AfeResult> {
    let q = chi.modulus();
    if q <= 1 || !chi.is_primitive() {
        return Err(Error::PreconditionViolated(format!(
            "approximate functional equation needs a primitive character, got {chi:?}"
        )));
    }
    if !(t > 0.0) || (q as f64) * t < 2.0 * PI {
        return Err(Error::PreconditionViolated(format!(
            "need t > 0 and qt >= 2π, got q = {q}, t = {t}"
        )));
    }
    let qf = q as f64;
    let n1 = (qf * t / (2.0 * PI)).sqrt().floor() as u64;
    let main: ComplexSum = (1..=n1)
        .map(|n| {
            let ln = (n as f64).ln();
            chi.eval_complex(n as i64) * Complex64::from_polar((-0.5 * ln).exp(), -t * ln)
        })
        .collect();
    let main_sum = main.value();
    let dual_sum = main_sum.conj();

    // F = (2πi)^{1/2+it} q^{-1/2-it} G(χ,-1) / Γ(1/2+it), principal branch
    let g = cached_gauss_sum(chi);
    let ln2pi = (2.0 * PI).ln();
    let ln_abs = 0.5 * ln2pi - PI * t / 2.0 - 0.5 * qf.ln()
        + g.norm().ln()
        + 0.5 * (ln_cosh(PI * t) - PI.ln());
    let arg = t * ln2pi + PI / 4.0 - t * qf.ln() + g.arg()
        - ln_gamma(Complex64::new(0.5, t)).im;
    let f = Complex64::from_polar(ln_abs.exp(), arg);
    Ok(AfeResult {
        n1,
        main_sum,
        dual_sum,
        f,
        delta_t: delta_t(t),
        remainder_bound: afe_remainder_bound(q, t),
    })
}

/// The approximate functional equation as an `LValue`; the radius is the
/// remainder bound plus a rounding allowance.
pub fn l_afe(chi: &DirichletCharacter, t: f64) -> Result<LValue> {
    let r = afe_eval(chi, t)?;
    let slack = 1e-9 * (1.0 + r.main_sum.norm());
    Ok(LValue {
        value: r.value(),
        err: r.remainder_bound + slack,
        method: Method::Afe,
    })
}

/// `log` of the bound `e^{πt/2 + π/(24t) + 1/(12t²)}/√(2π)` on `1/|Γ(1/2+it)|`.
pub fn ln_gamma_recip_bound(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveT(t));
    }
    Ok(PI * t / 2.0 + PI / (24.0 * t) + 1.0 / (12.0 * t * t) - 0.5 * (2.0 * PI).ln())
}

/// Bound on `1/|Γ(1/2+it)|`; overflows to infinity for `t` beyond ~450, use
/// [`ln_gamma_recip_bound`] there.
pub fn gamma_recip_bound(t: f64) -> Result<f64> {
    Ok(ln_gamma_recip_bound(t)?.exp())
}

/// `log(1/|Γ(1/2+it)|) = (log cosh πt - log π)/2`.
pub fn ln_gamma_recip_exact(t: f64) -> f64 {
    0.5 * (ln_cosh(PI * t) - PI.ln())
}

/// Bound on `|Σ_{n>M} χ(n) n^{-1/2-it}|` via Pólya–Vinogradov and partial
/// summation. `primitive = false` doubles the character-sum constant.
pub fn l_tail_bound(q: u64, m: f64, t: f64, primitive: bool) -> Result<f64> {
    if q <= 1 || !(m >= 1.0) {
        return Err(Error::PreconditionViolated(format!(
            "tail bound needs q > 1 and M >= 1, got q = {q}, M = {m}"
        )));
    }
    let qf = q as f64;
    let pv = if primitive { 1.0 } else { 2.0 };
    Ok(2.0 * pv * qf.sqrt() * qf.ln() * (t.abs() + 1.0) / m.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;
    use crate::lfunc::l_direct;

    #[test]
    fn n1_example() {
        let chi = &enumerate_characters(5).unwrap()[2];
        assert_eq!(afe_eval(chi, 300.0).unwrap().n1, 15);
    }

    #[test]
    fn delta_at_root_two() {
        let d = delta_t(2f64.sqrt());
        let want = (PI / (24.0 * 2f64.sqrt()) + 1.0 / 24.0).exp() - 1.0;
        assert!((d - want).abs() < 1e-15);
        assert!((d - 0.1436).abs() < 1e-4);
    }

    #[test]
    fn gamma_bound_dominates() {
        // 1/|Γ(1/2+i)| = √(cosh π/π) = 1.92090...
        assert!((ln_gamma_recip_exact(1.0).exp() - 1.9209).abs() < 1e-4);
        for t in [0.1, 1.0, 10.0, 100.0, 1e4] {
            assert!(ln_gamma_recip_exact(t) <= ln_gamma_recip_bound(t).unwrap());
        }
        assert!(matches!(gamma_recip_bound(0.0), Err(Error::NonpositiveT(_))));
    }

    #[test]
    fn tail_examples() {
        let b = l_tail_bound(5, 1e6, 0.0, true).unwrap();
        assert!((b - 2.0 * 5f64.sqrt() * 5f64.ln() / 1e3).abs() < 1e-15);
        assert!((b - 0.007197).abs() < 1e-6);
    }

    #[test]
    fn matches_direct_route() {
        let chi = &enumerate_characters(5).unwrap()[2];
        let a = afe_eval(chi, 300.0).unwrap();
        let d = l_direct(chi, 300.0, 1e-10).unwrap();
        assert!((a.value() - d.value).norm() <= a.remainder_bound + d.err);
        assert!(a.f.norm() <= 1.0 + a.delta_t);
        // |F| is 1 up to rounding for primitive χ
        assert!((a.f.norm() - 1.0).abs() < 1e-9);
    }
}

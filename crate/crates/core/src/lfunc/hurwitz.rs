//! `L(s, χ) = Σ_{a mod q} χ(a) Σ_{k>=0} (kq + a)^{-s}`, each inner series
//! handled by Euler–Maclaurin with an explicit remainder.

use super::{LValue, Method};
use crate::arith::gcd;
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::numeric::special::{bernoulli_over_factorial, MAX_EM_DEPTH};
use crate::numeric::ComplexSum;
use num_complex::Complex64;

/// Smallest `eps` accepted by the direct evaluator.
pub const MIN_EPS: f64 = 1e-12;
const U: f64 = f64::EPSILON / 2.0;

/// Per-residue partial values `V_a = q^{-s} ζ(s, a/q)` at a fixed `s`,
/// shared by every character mod `q`.
#[derive(Clone, Debug)]
pub struct HurwitzTable {
    q: u64,
    s: Complex64,
    n: u64,
    depth: usize,
    /// `(a, V_a, rounding bound)` for units `a` in `[1, q]`.
    values: Vec<(u64, Complex64, f64)>,
    trunc: f64,
}

fn ln_abs_pochhammer(s: Complex64, k: usize) -> f64 {
    (0..k).map(|i| (s + i as f64).norm().ln()).sum()
}

/// Bound on the sum over `count` residues of the Euler–Maclaurin
/// remainders after `m` correction terms, worst case `x = n + 1/q`.
fn truncation_bound(q: u64, s: Complex64, n: u64, m: usize, count: u64) -> f64 {
    let sigma = s.re;
    let x = n as f64 + 1.0 / q as f64;
    let ln = bernoulli_over_factorial(m).abs().ln() + ln_abs_pochhammer(s, 2 * m)
        + (1.0 - sigma - 2.0 * m as f64) * x.ln()
        - (sigma + 2.0 * m as f64 - 1.0).ln()
        - sigma * (q as f64).ln()
        + (count as f64).ln();
    ln.exp()
}

impl HurwitzTable {
    pub fn new(q: u64, s: Complex64, eps: f64) -> Result<Self> {
        if !(eps >= MIN_EPS) {
            return Err(Error::PrecisionUnreachable { eps, budget: MIN_EPS });
        }
        if q == 0 {
            return Err(Error::PreconditionViolated("modulus must be positive".into()));
        }
        if !(s.re > 0.0) || (s.re == 1.0 && s.im == 0.0) {
            return Err(Error::PreconditionViolated(format!("unsupported s = {s}")));
        }
        let units: Vec<u64> = (1..=q).filter(|&a| gcd(a, q) == 1).collect();
        let count = units.len() as u64;
        let mut n = ((s.norm() / 2.0).ceil() as u64).max(10);
        let (depth, trunc) = loop {
            let hit = (1..=MAX_EM_DEPTH)
                .map(|m| (m, truncation_bound(q, s, n, m, count)))
                .find(|&(_, b)| b <= eps / 4.0);
            if let Some(found) = hit {
                break found;
            }
            n = n.checked_mul(2).filter(|&v| v < 1 << 32).ok_or(
                Error::PrecisionUnreachable {
                    eps,
                    budget: f64::INFINITY,
                },
            )?;
        };
        let values = units
            .into_iter()
            .map(|a| {
                let (v, e) = partial_value(q, a, s, n, depth);
                (a, v, e)
            })
            .collect();
        Ok(Self {
            q,
            s,
            n,
            depth,
            values,
            trunc,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    /// `(N, M)`: plain terms per residue and Euler–Maclaurin depth.
    pub fn parameters(&self) -> (u64, usize) {
        (self.n, self.depth)
    }

    /// `Σ_a χ(a) V_a` with the combined truncation and rounding radius.
    /// Errors if the radius exceeds `eps`.
    pub fn l_value(&self, chi: &DirichletCharacter, eps: f64) -> Result<LValue> {
        if chi.modulus() != self.q {
            return Err(Error::PreconditionViolated(format!(
                "character mod {} used with a table mod {}",
                chi.modulus(),
                self.q
            )));
        }
        let mut acc = ComplexSum::new();
        let mut err = self.trunc;
        for &(a, v, e) in &self.values {
            acc.add(chi.eval_complex(a as i64) * v);
            err += e + 8.0 * U * v.norm();
        }
        err += acc.rounding_bound();
        if err > eps {
            return Err(Error::PrecisionUnreachable { eps, budget: err });
        }
        Ok(LValue {
            value: acc.value(),
            err,
            method: Method::Direct,
        })
    }
}

/// `V_a` and a bound on its rounding error.
fn partial_value(q: u64, a: u64, s: Complex64, n: u64, depth: usize) -> (Complex64, f64) {
    let (sigma, t) = (s.re, s.im);
    let power = |m: u64| -> (Complex64, f64) {
        let lm = (m as f64).ln();
        let mag = (-sigma * lm).exp();
        let z = Complex64::from_polar(mag, -t * lm);
        (z, (4.0 * t.abs() * lm + 16.0) * U * mag)
    };
    let mut acc = ComplexSum::new();
    let mut bud = 0.0;
    for k in 0..n {
        let (z, e) = power(k * q + a);
        acc.add(z);
        bud += e;
    }
    let (w, we) = power(n * q + a);
    let x = n as f64 + a as f64 / q as f64;
    let mut bracket = ComplexSum::new();
    bracket.add(Complex64::new(x, 0.0) / (s - 1.0));
    bracket.add(Complex64::new(0.5, 0.0));
    let mut poch = s;
    let mut xp = 1.0 / x;
    for j in 1..=depth {
        bracket.add(poch * (bernoulli_over_factorial(j) * xp));
        let jj = 2.0 * j as f64;
        poch = poch * (s + (jj - 1.0)) * (s + jj);
        xp /= x * x;
    }
    let b = bracket.value();
    let babs = bracket.abs_sum();
    let tail = w * b;
    acc.add(tail);
    bud += we * babs + w.norm() * babs * (64.0 * depth as f64 + 16.0) * U;
    bud += acc.rounding_bound();
    (acc.value(), bud)
}

/// `L(s, χ)` to within `eps`.
pub fn l_direct_at(chi: &DirichletCharacter, s: Complex64, eps: f64) -> Result<LValue> {
    HurwitzTable::new(chi.modulus(), s, eps)?.l_value(chi, eps)
}

/// `L(1/2 + it, χ)` to within `eps`.
pub fn l_direct(chi: &DirichletCharacter, t: f64, eps: f64) -> Result<LValue> {
    l_direct_at(chi, Complex64::new(0.5, t), eps)
}

/// `ζ(s)` to within `eps`.
pub fn zeta(s: Complex64, eps: f64) -> Result<LValue> {
    let table = HurwitzTable::new(1, s, eps)?;
    let &(_, v, e) = &table.values[0];
    let err = table.trunc + e;
    if err > eps {
        return Err(Error::PrecisionUnreachable { eps, budget: err });
    }
    Ok(LValue {
        value: v,
        err,
        method: Method::Direct,
    })
}

//! Factorization and the multiplicative invariants of a modulus.

use crate::error::{Error, Result};
use crate::numeric::{Dd, Enclosure};
use serde::Serialize;

pub const MAX_INT: u64 = i64::MAX as u64;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or(Error::Overflow("lcm"))
}

pub fn checked_pow(p: u64, a: u32) -> Result<u64> {
    p.checked_pow(a).ok_or(Error::Overflow("prime power"))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as `(p, a)` pairs in ascending order of `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn value(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, a)| p.pow(a))
            .product()
    }

    pub fn omega(&self) -> u32 {
        self.pairs.len() as u32
    }

    pub fn tau(&self) -> u64 {
        self.pairs.iter().map(|&(_, a)| a as u64 + 1).product()
    }

    pub fn phi(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, a)| (p - 1) * p.pow(a - 1))
            .product()
    }

    pub fn is_sixth_power(&self) -> bool {
        self.pairs.iter().all(|&(_, a)| a % 6 == 0)
    }

    /// Every prime appears at least squared.
    pub fn is_powerful(&self) -> bool {
        self.pairs.iter().all(|&(_, a)| a >= 2)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 || n > MAX_INT {
        return Err(Error::PreconditionViolated(format!(
            "factorize needs 1 <= n <= 2^63-1, got {n}"
        )));
    }
    let mut primes = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5] {
        while m.is_multiple_of(p) {
            primes.push(p);
            m /= p;
        }
    }
    // wheel mod 30 up to a small bound, then Pollard rho for what remains
    let inc = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut i = 0;
    while p <= 1 << 12 && p * p <= m {
        while m.is_multiple_of(p) {
            primes.push(p);
            m /= p;
        }
        p += inc[i];
        i = (i + 1) % 8;
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            primes.push(x);
            continue;
        }
        let d = pollard_rho(x);
        stack.push(d);
        stack.push(x / d);
    }
    primes.sort_unstable();
    let mut pairs: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match pairs.last_mut() {
            Some((q, a)) if *q == p => *a += 1,
            _ => pairs.push((p, 1)),
        }
    }
    Ok(Factorization { pairs })
}

pub fn tau(n: u64) -> Result<u64> {
    Ok(factorize(n)?.tau())
}

/// Number of `x mod m` with `x^2 ≡ 1`, by the closed form.
pub fn lambda_count(m: u64) -> Result<u64> {
    let w = factorize(m)?.omega();
    Ok(if m % 4 == 2 {
        1 << (w - 1)
    } else if m.is_multiple_of(8) {
        1 << (w + 1)
    } else {
        1 << w
    })
}

/// A product `∏ p^{e/6}` kept exact until evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimePowerProduct {
    sixths: Vec<(u64, i64)>,
}

impl PrimePowerProduct {
    pub fn one() -> Self {
        Self { sixths: Vec::new() }
    }

    fn push(&mut self, p: u64, e: i64) {
        if e != 0 {
            self.sixths.push((p, e));
        }
    }

    /// Exponents in sixths, one entry per prime with a nonzero exponent.
    pub fn exponents(&self) -> &[(u64, i64)] {
        &self.sixths
    }

    pub fn is_one(&self) -> bool {
        self.sixths.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut v = self.sixths.clone();
        for &(p, e) in &other.sixths {
            match v.iter_mut().find(|(q, _)| *q == p) {
                Some((_, f)) => *f += e,
                None => v.push((p, e)),
            }
        }
        v.retain(|&(_, e)| e != 0);
        v.sort_unstable();
        Self { sixths: v }
    }

    pub fn enclosure(&self) -> Enclosure {
        let mut acc = Enclosure::exact(1.0);
        for &(p, e) in &self.sixths {
            let lnp = Enclosure::from_u64(p).ln();
            acc = acc * (lnp * (e as f64) / 6.0).exp();
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.sixths
            .iter()
            .map(|&(p, e)| (p as f64).powf(e as f64 / 6.0))
            .product()
    }

    /// Exact comparison with 1.
    pub fn le_one(&self) -> bool {
        // log of the product is Σ e ln p / 6; compare using integers when possible
        let mut num = 1u128;
        let mut den = 1u128;
        for &(p, e) in &self.sixths {
            let pe = (p as u128).checked_pow(e.unsigned_abs() as u32);
            match pe {
                Some(x) if e > 0 => num = num.saturating_mul(x),
                Some(x) => den = den.saturating_mul(x),
                None => return self.to_f64() <= 1.0,
            }
        }
        // product^6 = num/den
        num <= den
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModulusProfile {
    pub q: u64,
    pub factorization: Factorization,
    pub c1: u64,
    pub d1: u64,
    pub c: u64,
    pub d: u64,
    pub tau: u64,
    pub omega: u32,
    pub phi: u64,
    pub lambda_d: u64,
    pub sqf: PrimePowerProduct,
    pub cbf: PrimePowerProduct,
    pub spf: PrimePowerProduct,
}

fn ceil_div(a: u32, b: u32) -> u32 {
    a.div_ceil(b)
}

/// Local invariants `(C1, D1, C, D)` exponents of a prime power.
fn local_exponents(p: u64, a: u32) -> (u32, u32, u32, u32) {
    let c1 = ceil_div(a, 2);
    let c = ceil_div(a, 3);
    let d = if a == 1 {
        0
    } else if p == 2 {
        a - 2 * c + 1
    } else {
        a - 2 * c
    };
    (c1, a - c1, c, d)
}

pub fn modulus_profile(q: u64) -> Result<ModulusProfile> {
    let f = factorize(q)?;
    let (mut c1, mut d1, mut c, mut d) = (1u64, 1u64, 1u64, 1u64);
    let mut sqf = PrimePowerProduct::one();
    let mut cbf = PrimePowerProduct::one();
    let mut spf = PrimePowerProduct::one();
    for &(p, a) in f.pairs() {
        let (ec1, ed1, ec, ed) = local_exponents(p, a);
        c1 *= checked_pow(p, ec1)?;
        d1 *= checked_pow(p, ed1)?;
        c *= checked_pow(p, ec)?;
        d *= checked_pow(p, ed)?;
        let (a, ec1, ec, ed) = (a as i64, ec1 as i64, ec as i64, ed as i64);
        sqf.push(p, 6 * ec1 - 3 * a);
        cbf.push(p, 6 * ec - 2 * a);
        spf.push(p, 6 * ec1 - 3 * ec - a - 3 * ed);
    }
    Ok(ModulusProfile {
        q,
        c1,
        d1,
        c,
        d,
        tau: f.tau(),
        omega: f.omega(),
        phi: f.phi(),
        lambda_d: lambda_count(d)?,
        sqf,
        cbf,
        spf,
        factorization: f,
    })
}

/// `S1 = Σ W_M(m) d_m(N)/m` and `S2 = Σ W_M(m) d_m(N)` with
/// `W_M(m) = 1 - m/M` and `d_m(N) = gcd(2m, N)`.
pub fn gcd_weighted_sums(m_max: u64, n: u64) -> (f64, f64) {
    let (s1, s2) = gcd_weighted_sums_dd(m_max, n);
    (s1.to_f64(), s2.to_f64())
}

pub fn gcd_weighted_sums_dd(m_max: u64, n: u64) -> (Dd, Dd) {
    let big_m = Dd::from_u64(m_max);
    let mut s1 = Dd::ZERO;
    let mut s2 = Dd::ZERO;
    for m in 1..=m_max {
        let dm = Dd::from_u64(gcd(2 * m, n));
        let w = Dd::ONE - Dd::from_u64(m) / big_m;
        s1 = s1 + w * dm / Dd::from_u64(m);
        s2 = s2 + w * dm;
    }
    (s1, s2)
}

/// Checks both gcd-sum inequalities. `S2` is compared exactly through
/// `M Σd_m - Σ m d_m <= τ(N) M^2`; `S1` in double-double against
/// `τ(N) log M` with a relative guard of `1e-28`.
pub fn gcd_sums_within_bounds(m_max: u64, n: u64) -> Result<bool> {
    let t = tau(n)?;
    let (mut sd, mut smd) = (0u128, 0u128);
    for m in 1..=m_max {
        let dm = gcd(2 * m, n) as u128;
        sd += dm;
        smd += m as u128 * dm;
    }
    let mm = m_max as u128;
    let s2_ok = mm * sd - smd <= t as u128 * mm * mm;
    let (s1, _) = gcd_weighted_sums_dd(m_max, n);
    let rhs = Dd::from_u64(t) * Dd::from_u64(m_max).ln();
    let slack = rhs - s1;
    let s1_ok = if m_max == 1 {
        s1.to_f64() == 0.0
    } else {
        slack.to_f64() >= -1e-28 * rhs.to_f64()
    };
    Ok(s1_ok && s2_ok)
}

//! Generators and discrete logarithms for `(Z/p^a Z)^*`.

use crate::arith::{factorize, gcd, inv_mod, is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Largest modulus accepted by `unit_group_basis`.
pub const MAX_BASIS_MODULUS: u64 = 1 << 40;
/// Moduli up to this size get a full lookup table.
const TABLE_LIMIT: u64 = 1 << 22;
const NOT_A_UNIT: u32 = u32::MAX;

#[derive(Clone, Debug)]
enum Dlog {
    Table(Vec<u32>),
    PohligHellman { order_factors: Vec<(u64, u32)> },
}

#[derive(Clone, Debug)]
pub struct UnitGroupBasis {
    p: u64,
    a: u32,
    modulus: u64,
    gens: Vec<(u64, u64)>,
    dlog: Dlog,
}

fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fac = factorize(p - 1).expect("p - 1 factors");
    (2..p)
        .find(|&g| fac.primes().all(|r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("primitive root exists")
}

pub fn unit_group_basis(p: u64, a: u32) -> Result<UnitGroupBasis> {
    if !is_prime(p) || a == 0 {
        return Err(Error::PreconditionViolated(format!(
            "unit_group_basis needs a prime power, got {p}^{a}"
        )));
    }
    let modulus = p
        .checked_pow(a)
        .filter(|&m| m <= MAX_BASIS_MODULUS)
        .ok_or(Error::ModulusTooLarge(p.saturating_pow(a)))?;
    let gens: Vec<(u64, u64)> = if p == 2 {
        match a {
            1 => vec![],
            2 => vec![(3, 2)],
            _ => vec![(modulus - 1, 2), (5, modulus >> 2)],
        }
    } else {
        let mut g = smallest_primitive_root(p);
        if a >= 2 && pow_mod(g, p - 1, p * p) == 1 {
            g += p;
        }
        vec![(g % modulus, (p - 1) * p.pow(a - 1))]
    };
    let mut basis = UnitGroupBasis {
        p,
        a,
        modulus,
        gens,
        dlog: Dlog::PohligHellman {
            order_factors: vec![],
        },
    };
    if modulus <= TABLE_LIMIT {
        basis.dlog = Dlog::Table(basis.build_table());
    } else if p != 2 {
        let order = basis.gens[0].1;
        basis.dlog = Dlog::PohligHellman {
            order_factors: factorize(order)?.pairs().to_vec(),
        };
    }
    Ok(basis)
}

impl UnitGroupBasis {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `(generator, order)` pairs.
    pub fn generators(&self) -> &[(u64, u64)] {
        &self.gens
    }

    pub fn group_order(&self) -> u64 {
        self.gens.iter().map(|&(_, o)| o).product()
    }

    fn build_table(&self) -> Vec<u32> {
        let m = self.modulus as usize;
        let mut t = vec![NOT_A_UNIT; m];
        match self.gens.as_slice() {
            [] => {
                // trivial group mod 2
                t[1 % m] = 0;
            }
            [(g, ord)] => {
                let mut x = 1u64;
                for k in 0..*ord {
                    t[x as usize] = k as u32;
                    x = mul_mod(x, *g, self.modulus);
                }
            }
            [(g1, o1), (g2, o2)] => {
                let mut x1 = 1u64;
                for k1 in 0..*o1 {
                    let mut x = x1;
                    for k2 in 0..*o2 {
                        t[x as usize] = (k1 * o2 + k2) as u32;
                        x = mul_mod(x, *g2, self.modulus);
                    }
                    x1 = mul_mod(x1, *g1, self.modulus);
                }
            }
            _ => unreachable!("at most two generators"),
        }
        t
    }

    /// Lexicographic index of the exponent vector of `n`, first generator
    /// most significant; `None` if `p | n`.
    pub fn packed_log(&self, n: u64) -> Option<u64> {
        let n = n % self.modulus;
        if n.is_multiple_of(self.p) && self.modulus > 1 {
            return None;
        }
        match &self.dlog {
            Dlog::Table(t) => {
                let v = t[n as usize];
                (v != NOT_A_UNIT).then_some(v as u64)
            }
            Dlog::PohligHellman { order_factors } => {
                if self.p == 2 {
                    Some(self.two_adic_log(n))
                } else {
                    let (g, ord) = self.gens[0];
                    Some(pohlig_hellman(g, n, ord, order_factors, self.modulus))
                }
            }
        }
    }

    /// Exponent vector of `n` (one entry per generator).
    pub fn log(&self, n: u64) -> Option<Vec<u64>> {
        let k = self.packed_log(n)?;
        Some(match self.gens.as_slice() {
            [] => vec![],
            [_] => vec![k],
            [_, (_, o2)] => vec![k / o2, k % o2],
            _ => unreachable!(),
        })
    }

    /// Unit with the given exponent vector.
    pub fn exp(&self, e: &[u64]) -> u64 {
        self.gens
            .iter()
            .zip(e)
            .fold(1 % self.modulus, |acc, (&(g, _), &k)| {
                mul_mod(acc, pow_mod(g, k, self.modulus), self.modulus)
            })
    }

    /// `n ≡ ±5^k mod 2^a`, solved bit by bit.
    fn two_adic_log(&self, n: u64) -> u64 {
        let m = self.modulus;
        let (sign, u) = if n % 4 == 3 { (1, m - n) } else { (0, n) };
        let ord = m >> 2;
        let mut k = 0u64;
        let inv5 = inv_mod(5, m).expect("5 is a unit");
        // invariant: u * 5^{-k} ≡ 1 mod 2^{j+2}
        for j in 0..(self.a - 2) {
            let r = mul_mod(u, pow_mod(inv5, k, m), m);
            if r % (1 << (j + 3)) != 1 {
                k += 1 << j;
            }
        }
        sign * ord + k
    }
}

fn bsgs(g: u64, h: u64, order: u64, m: u64) -> u64 {
    let s = (order as f64).sqrt().ceil() as u64 + 1;
    let mut baby = HashMap::with_capacity(s as usize);
    let mut x = 1u64;
    for j in 0..s {
        baby.entry(x).or_insert(j);
        x = mul_mod(x, g, m);
    }
    let giant = pow_mod(inv_mod(g, m).expect("unit"), s, m);
    let mut y = h;
    for i in 0..=s {
        if let Some(&j) = baby.get(&y) {
            return (i * s + j) % order;
        }
        y = mul_mod(y, giant, m);
    }
    panic!("discrete log not found");
}

fn pohlig_hellman(g: u64, h: u64, order: u64, factors: &[(u64, u32)], m: u64) -> u64 {
    let mut residues = Vec::new();
    for &(r, e) in factors {
        let re = r.pow(e);
        let gr = pow_mod(g, order / re, m);
        let hr = pow_mod(h, order / re, m);
        let gamma = pow_mod(gr, re / r, m);
        let gr_inv = inv_mod(gr, m).expect("unit");
        let mut x = 0u64;
        let mut rk = 1u64;
        for k in 0..e {
            let t = mul_mod(pow_mod(gr_inv, x, m), hr, m);
            let hk = pow_mod(t, r.pow(e - 1 - k), m);
            let d = bsgs(gamma, hk, r, m);
            x += d * rk;
            rk *= r;
        }
        residues.push((x, re));
    }
    // CRT
    let mut x = 0u128;
    let mut modulus = 1u128;
    for (xi, mi) in residues {
        let mi = mi as u128;
        let inv = inv_mod((modulus % mi) as u64, mi as u64).expect("coprime") as u128;
        let diff = (xi as u128 + mi - x % mi) % mi;
        let t = diff * inv % mi;
        x += modulus * t;
        modulus *= mi;
    }
    debug_assert_eq!(gcd(modulus as u64, order), order);
    x as u64
}

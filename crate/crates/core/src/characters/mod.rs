//! Exact Dirichlet characters.
//!
//! A character mod `q` is an exponent vector over the generators of the
//! prime-power unit groups of `q` (primes ascending, generators in basis
//! order). Characters are indexed lexicographically by that vector with the
//! first generator most significant, so index 0 is the principal character.
//! Values are kept as exact phases `num / E` where `E` is the lcm of the
//! generator orders.

pub mod basis;
pub mod gauss;
pub mod postnikov;

pub use basis::{unit_group_basis, UnitGroupBasis};
pub use gauss::gauss_sum;
pub use postnikov::{
    linear_identity_holds, postnikov, postnikov_linear, postnikov_quadratic,
    postnikov_quadratic_per_prime, quadratic_identity_holds, PostnikovData,
};

use crate::arith::{factorize, gcd, lcm, Factorization};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// A root of unity `e^{2πi num/den}` with `gcd(num, den) = 1`, `num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    pub num: u64,
    pub den: u64,
}

impl Phase {
    pub fn new(num: u64, den: u64) -> Phase {
        let num = num % den;
        let g = gcd(num, den).max(1);
        Phase {
            num: num / g,
            den: den / g,
        }
    }

    pub fn one() -> Phase {
        Phase { num: 0, den: 1 }
    }

    pub fn to_complex(self) -> Complex64 {
        crate::numeric::special::cis_ratio(self.num, self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Root(Phase),
}

impl CharValue {
    pub fn to_complex(self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root(p) => p.to_complex(),
        }
    }

    pub fn conj(self) -> CharValue {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root(p) => CharValue::Root(Phase::new(p.den - p.num, p.den)),
        }
    }
}

/// The group of characters mod `q`.
#[derive(Debug)]
pub struct CharacterGroup {
    q: u64,
    factorization: Factorization,
    components: Vec<UnitGroupBasis>,
    /// generator orders, flattened across components
    orders: Vec<u64>,
    /// `E`, the lcm of all generator orders
    exp_den: u64,
    len: u64,
}

impl CharacterGroup {
    pub fn new(q: u64) -> Result<Arc<CharacterGroup>> {
        let factorization = factorize(q)?;
        let mut components = Vec::new();
        for &(p, a) in factorization.pairs() {
            components.push(unit_group_basis(p, a)?);
        }
        let orders: Vec<u64> = components
            .iter()
            .flat_map(|b| b.generators().iter().map(|&(_, o)| o))
            .collect();
        let mut exp_den = 1u64;
        for &o in &orders {
            exp_den = lcm(exp_den, o)?;
        }
        let len = orders.iter().product();
        Ok(Arc::new(CharacterGroup {
            q,
            factorization,
            components,
            orders,
            exp_den,
            len,
        }))
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn components(&self) -> &[UnitGroupBasis] {
        &self.components
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of characters, `φ(q)`.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn exp_den(&self) -> u64 {
        self.exp_den
    }

    fn exponents_of(&self, mut index: u64) -> Vec<u64> {
        let mut e = vec![0; self.orders.len()];
        for (slot, &o) in e.iter_mut().zip(&self.orders).rev() {
            *slot = index % o;
            index /= o;
        }
        e
    }

    fn index_of(&self, exps: &[u64]) -> u64 {
        exps.iter()
            .zip(&self.orders)
            .fold(0, |acc, (&e, &o)| acc * o + e)
    }

    pub fn character(self: &Arc<Self>, index: u64) -> Result<DirichletCharacter> {
        if index >= self.len {
            return Err(Error::PreconditionViolated(format!(
                "character index {index} out of range for modulus {}",
                self.q
            )));
        }
        let exps = self.exponents_of(index);
        Ok(DirichletCharacter::from_exponents(self.clone(), exps))
    }

    pub fn characters(self: &Arc<Self>) -> Vec<DirichletCharacter> {
        (0..self.len)
            .map(|i| self.character(i).expect("index in range"))
            .collect()
    }
}

/// All characters mod `q`, principal first.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(CharacterGroup::new(q)?.characters())
}

#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    index: u64,
    exps: Vec<u64>,
    /// `exps[g] * E / orders[g]`, the phase numerator per unit of log
    weights: Vec<u64>,
    conductor: u64,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi[{} mod {}; {:?}]", self.index, self.group.q, self.exps)
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.q == other.group.q && self.exps == other.exps
    }
}

impl DirichletCharacter {
    fn from_exponents(group: Arc<CharacterGroup>, exps: Vec<u64>) -> Self {
        let e = group.exp_den;
        let weights = exps
            .iter()
            .zip(&group.orders)
            .map(|(&x, &o)| x * (e / o))
            .collect();
        let index = group.index_of(&exps);
        let mut chi = DirichletCharacter {
            group,
            index,
            exps,
            weights,
            conductor: 0,
        };
        chi.conductor = chi.compute_conductor();
        chi
    }

    pub fn modulus(&self) -> u64 {
        self.group.q
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn group(&self) -> &Arc<CharacterGroup> {
        &self.group
    }

    /// Common denominator `E` of all phases returned by `phase_num`.
    pub fn exp_den(&self) -> u64 {
        self.group.exp_den
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.group.q > 1 && self.conductor == self.group.q
    }

    /// Weight slice and offset of the generators of component `j`.
    fn component_weights(&self, j: usize) -> &[u64] {
        let start: usize = self.group.components[..j]
            .iter()
            .map(|b| b.generators().len())
            .sum();
        let len = self.group.components[j].generators().len();
        &self.weights[start..start + len]
    }

    /// Phase numerator over `E` of the `j`-th component at `n`.
    fn component_phase(&self, j: usize, n: u64) -> Option<u64> {
        let b = &self.group.components[j];
        let w = self.component_weights(j);
        let e = self.group.exp_den as u128;
        let k = b.packed_log(n)?;
        let v = match (w, b.generators()) {
            ([], _) => 0,
            ([w0], _) => (*w0 as u128 * k as u128) % e,
            ([w0, w1], [_, (_, o2)]) => {
                (*w0 as u128 * (k / o2) as u128 + *w1 as u128 * (k % o2) as u128) % e
            }
            _ => unreachable!(),
        };
        Some(v as u64)
    }

    /// `χ(n) = e^{2πi k/E}`; returns `k`, or `None` when `gcd(n, q) > 1`.
    pub fn phase_num(&self, n: u64) -> Option<u64> {
        let e = self.group.exp_den as u128;
        let mut acc = 0u128;
        for j in 0..self.group.components.len() {
            acc += self.component_phase(j, n)? as u128;
        }
        Some((acc % e) as u64)
    }

    pub fn eval(&self, n: i64) -> CharValue {
        let q = self.group.q as i64;
        let r = n.rem_euclid(q) as u64;
        match self.phase_num(r) {
            None => CharValue::Zero,
            Some(k) => CharValue::Root(Phase::new(k, self.group.exp_den)),
        }
    }

    pub fn eval_complex(&self, n: i64) -> Complex64 {
        self.eval(n).to_complex()
    }

    /// `phase_num` for every residue `0..q`.
    pub fn phase_table(&self) -> Vec<Option<u64>> {
        (0..self.group.q).map(|n| self.phase_num(n)).collect()
    }

    pub fn is_even(&self) -> bool {
        self.eval(-1) == CharValue::Root(Phase::one())
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.orders)
            .map(|(&e, &o)| (o - e) % o)
            .collect();
        DirichletCharacter::from_exponents(self.group.clone(), exps)
    }

    /// Order of `χ` in the character group.
    pub fn order(&self) -> u64 {
        let e = self.group.exp_den;
        let g = self.weights.iter().fold(e, |acc, &w| gcd(acc, w));
        e / g
    }

    fn compute_conductor(&self) -> u64 {
        let mut cond = 1u64;
        for (j, b) in self.group.components.iter().enumerate() {
            let (p, a) = (b.prime(), b.exponent());
            let trivial_on = |x: u64| self.component_phase(j, x) == Some(0);
            let f = (0..=a)
                .find(|&k| {
                    if k == a {
                        true
                    } else if k == 0 || (p == 2 && k == 1) {
                        b.generators().iter().all(|&(g, _)| trivial_on(g))
                    } else {
                        trivial_on(1 + p.pow(k))
                    }
                })
                .expect("k = a always succeeds");
            cond *= p.pow(f);
        }
        cond
    }

    /// The character mod `p_j^{a_j}` in the factorization `χ = ∏ χ_j`.
    pub fn component(&self, j: usize) -> Result<DirichletCharacter> {
        let b = &self.group.components[j];
        let group = CharacterGroup::new(b.modulus())?;
        let start: usize = self.group.components[..j]
            .iter()
            .map(|c| c.generators().len())
            .sum();
        let exps = self.exps[start..start + b.generators().len()].to_vec();
        Ok(DirichletCharacter::from_exponents(group, exps))
    }

    /// The primitive character mod the conductor inducing `χ`.
    pub fn primitive_inducing(&self) -> Result<DirichletCharacter> {
        let q1 = self.conductor;
        let g1 = CharacterGroup::new(q1)?;
        let e = self.group.exp_den as u128;
        let mut exps = Vec::new();
        for b1 in g1.components() {
            let j = self
                .group
                .components
                .iter()
                .position(|b| b.prime() == b1.prime())
                .expect("conductor divides q");
            for &(g, o) in b1.generators() {
                // any lift of g works since χ_j is trivial on 1 + p^f Z
                let k = self.component_phase(j, g).expect("generator is a unit") as u128;
                let scaled = k * o as u128;
                if !scaled.is_multiple_of(e) {
                    return Err(Error::VerificationFailed(format!(
                        "restriction of {self:?} to modulus {q1} is not a character"
                    )));
                }
                exps.push((scaled / e) as u64 % o);
            }
        }
        Ok(DirichletCharacter::from_exponents(g1, exps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(num: u64, den: u64) -> CharValue {
        CharValue::Root(Phase::new(num, den))
    }

    #[test]
    fn mod_three() {
        let chars = enumerate_characters(3).unwrap();
        assert_eq!(chars.len(), 2);
        assert!(chars[0].is_principal());
        assert_eq!(chars[1].eval(2), root(1, 2));
        assert_eq!(chars[1].eval(4), root(0, 1));
        assert_eq!(chars[1].eval(3), CharValue::Zero);
    }

    #[test]
    fn mod_five_order_four() {
        let chars = enumerate_characters(5).unwrap();
        let chi = chars.iter().find(|c| c.eval(2) == root(1, 4)).unwrap();
        assert_eq!(chi.eval(3), root(3, 4));
        assert_eq!(chi.eval(4), root(1, 2));
        assert_eq!(chi.eval(5), CharValue::Zero);
    }

    #[test]
    fn counts_and_primitivity() {
        assert_eq!(enumerate_characters(8).unwrap().len(), 4);
        let nine = enumerate_characters(9).unwrap();
        assert_eq!(nine.len(), 6);
        assert_eq!(nine.iter().filter(|c| c.is_primitive()).count(), 4);
        let one = enumerate_characters(1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(!one[0].is_primitive());
    }

    #[test]
    fn conductors() {
        let twelve = enumerate_characters(12).unwrap();
        assert_eq!(twelve[0].conductor(), 1);
        assert!(!twelve[0].is_primitive());
        // the mod-8 character with χ(3) = χ(7) = -1, χ(5) = 1 comes from mod 4
        let eight = enumerate_characters(8).unwrap();
        let from4 = eight
            .iter()
            .find(|c| c.eval(3) == root(1, 2) && c.eval(5) == root(0, 1))
            .unwrap();
        assert_eq!(from4.conductor(), 4);
        let five = enumerate_characters(5).unwrap();
        let quad = five.iter().find(|c| c.order() == 2).unwrap();
        assert_eq!(quad.conductor(), 5);
        assert!(quad.is_primitive());
    }

    #[test]
    fn primitive_inducing_agrees_on_units() {
        for q in [8u64, 9, 12, 45, 64, 100] {
            for chi in enumerate_characters(q).unwrap() {
                let chi1 = chi.primitive_inducing().unwrap();
                assert_eq!(chi1.modulus(), chi.conductor());
                assert!(chi1.is_primitive() || chi1.modulus() == 1);
                for n in 1..q as i64 {
                    if gcd(n as u64, q) == 1 {
                        assert_eq!(chi.eval(n), chi1.eval(n), "{chi:?} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn conjugate_and_order() {
        for chi in enumerate_characters(21).unwrap() {
            let c = chi.conjugate();
            for n in 0..21 {
                assert_eq!(c.eval(n), chi.eval(n).conj());
            }
            assert_eq!(c.order(), chi.order());
        }
    }

    #[test]
    fn index_round_trip() {
        let g = CharacterGroup::new(360).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.character(i).unwrap().index(), i);
        }
    }
}

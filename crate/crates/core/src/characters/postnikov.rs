//! Linear and quadratic exponential forms of `χ(1 + C₁x)` and `χ(1 + Cx)`.

use super::DirichletCharacter;
use crate::arith::{gcd, inv_mod, modulus_profile};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PostnikovData {
    pub ltilde: u64,
    pub b1: u64,
    pub l0: u64,
    pub l: u64,
    pub b: u64,
    pub verified_linear: bool,
    pub verified_quadratic: bool,
}

/// `gcd(x, n)` with the convention `gcd(0, n) = n`.
fn gcd_with(x: u64, n: u64) -> u64 {
    gcd(x % n, n)
}

/// Finds `L̃ mod D₁` with `χ(1 + C₁x) = e^{2πi L̃x/D₁}` and checks it for
/// every `x` in `[0, D₁)`. Returns `(L̃, B₁)` with `B₁ = gcd(L̃, D₁)`.
pub fn postnikov_linear(chi: &DirichletCharacter) -> Result<(u64, u64)> {
    let q = chi.modulus();
    let prof = modulus_profile(q)?;
    let (c1, d1) = (prof.c1, prof.d1);
    let e = chi.exp_den() as u128;
    let k = chi.phase_num((1 + c1) % q).ok_or_else(|| {
        Error::VerificationFailed(format!("1 + C1 is not a unit mod {q}"))
    })? as u128;
    let scaled = k * d1 as u128;
    if !scaled.is_multiple_of(e) {
        return Err(Error::VerificationFailed(format!(
            "χ(1 + C1) is not a D1-th root of unity for {chi:?}"
        )));
    }
    let ltilde = ((scaled / e) % d1 as u128) as u64;
    if !linear_identity_holds(chi, c1, d1, ltilde, d1) {
        return Err(Error::VerificationFailed(format!(
            "linear form fails for {chi:?} with L~ = {ltilde}"
        )));
    }
    Ok((ltilde, gcd_with(ltilde, d1)))
}

/// Exact check of `χ(1 + C₁x) = e^{2πi L̃x/D₁}` for `0 <= x < range`.
pub fn linear_identity_holds(
    chi: &DirichletCharacter,
    c1: u64,
    d1: u64,
    ltilde: u64,
    range: u64,
) -> bool {
    let q = chi.modulus() as u128;
    let e = chi.exp_den() as u128;
    (0..range).all(|x| {
        let n = ((1 + c1 as u128 * x as u128) % q) as u64;
        match chi.phase_num(n) {
            None => false,
            Some(k) => {
                let rhs = (ltilde as u128 * x as u128) % d1 as u128;
                k as u128 * d1 as u128 == rhs * e
            }
        }
    })
}

/// Exact check of `χ(1 + Cx) = e^{4πi L₀x/CD + 2πi Lx²/D}` for
/// `0 <= x < range`.
pub fn quadratic_identity_holds(
    chi: &DirichletCharacter,
    c: u64,
    d: u64,
    l0: u64,
    l: u64,
    range: u64,
) -> bool {
    let q = chi.modulus() as u128;
    let e = chi.exp_den() as u128;
    let cd = c as u128 * d as u128;
    (0..range).all(|x| {
        let x = x as u128;
        let n = ((1 + c as u128 * x) % q) as u64;
        match chi.phase_num(n) {
            None => false,
            Some(k) => {
                let quad = (l as u128 * ((x * x) % d as u128)) % d as u128;
                let rhs = (2 * l0 as u128 * x + c as u128 * quad) % cd;
                k as u128 * cd == rhs * e
            }
        }
    })
}

/// Canonical range of `L₀`: it only matters modulo `CD / gcd(2, CD)`.
pub fn l0_modulus(c: u64, d: u64) -> u64 {
    let cd = c * d;
    if cd.is_multiple_of(2) {
        cd / 2
    } else {
        cd
    }
}

/// Every `(L₀, L)` in canonical ranges for which the quadratic form holds.
/// The values at `x = 1, 2` pin down `2L mod D` and then `2L₀ mod CD`, so
/// the candidate list is complete; each candidate is checked over a full
/// period `x ∈ [0, CD)` of both sides.
pub fn quadratic_solutions(chi: &DirichletCharacter, c: u64, d: u64) -> Vec<(u64, u64)> {
    let q = chi.modulus();
    let e = chi.exp_den() as u128;
    let cd = c as u128 * d as u128;
    let (Some(k1), Some(k2)) = (chi.phase_num((1 + c) % q), chi.phase_num((1 + 2 * c) % q))
    else {
        return vec![];
    };
    let (k1, k2) = (k1 as u128, k2 as u128);
    // 2L/D ≡ ψ(2) - 2ψ(1)
    let v = (k2 + 2 * e - (2 * k1) % e) % e;
    if !(v * d as u128).is_multiple_of(e) {
        return vec![];
    }
    let two_l = ((v * d as u128 / e) % d as u128) as u64;
    let l_candidates: Vec<u64> = if d % 2 == 1 {
        vec![(two_l as u128 * inv_mod(2, d).unwrap_or(0) as u128 % d as u128) as u64]
    } else if two_l.is_multiple_of(2) {
        vec![two_l / 2, two_l / 2 + d / 2]
    } else {
        vec![]
    };
    if !(k1 * cd).is_multiple_of(e) {
        return vec![];
    }
    let psi1 = (k1 * cd / e) % cd;
    let mut out = Vec::new();
    for l in l_candidates {
        // 2L₀ ≡ CDψ(1) - CL mod CD
        let w = (psi1 + cd - (c as u128 * l as u128) % cd) % cd;
        let l0 = if cd % 2 == 1 {
            (w * inv_mod(2, cd as u64).unwrap_or(0) as u128 % cd) as u64
        } else if w.is_multiple_of(2) {
            (w / 2) as u64
        } else {
            continue;
        };
        if quadratic_identity_holds(chi, c, d, l0, l, cd as u64) {
            out.push((l0, l));
        }
    }
    out
}

/// `(L₀, L, B)` with `B = gcd(L, D)` minimal among all valid pairs; ties go
/// to the smaller `L`, then the smaller `L₀`.
pub fn postnikov_quadratic(chi: &DirichletCharacter) -> Result<(u64, u64, u64)> {
    let prof = modulus_profile(chi.modulus())?;
    let (c, d) = (prof.c, prof.d);
    quadratic_solutions(chi, c, d)
        .into_iter()
        .map(|(l0, l)| (gcd_with(l, d), l, l0))
        .min()
        .map(|(b, l, l0)| (l0, l, b))
        .ok_or_else(|| {
            Error::VerificationFailed(format!("no quadratic form found for {chi:?}"))
        })
}

/// Assembles `(L₀, L)` from the prime-power components,
/// `L₀ = C²D Σ L₀ⱼ/(Cⱼ²Dⱼ)` and likewise for `L`, then verifies the result
/// over a full period.
pub fn postnikov_quadratic_per_prime(chi: &DirichletCharacter) -> Result<(u64, u64, u64)> {
    let prof = modulus_profile(chi.modulus())?;
    let (c, d) = (prof.c, prof.d);
    let l0_mod = l0_modulus(c, d) as u128;
    let (mut l0, mut l) = (0u128, 0u128);
    for j in 0..chi.group().components().len() {
        let chij = chi.component(j)?;
        let pj = modulus_profile(chij.modulus())?;
        let (l0j, lj, _) = postnikov_quadratic(&chij)?;
        let scale = (c / pj.c) as u128 * (c / pj.c) as u128 * (d / pj.d) as u128;
        l0 = (l0 + l0j as u128 * scale) % l0_mod;
        l = (l + lj as u128 * scale) % d as u128;
    }
    let (l0, l) = (l0 as u64, l as u64);
    if !quadratic_identity_holds(chi, c, d, l0, l, c * d) {
        return Err(Error::VerificationFailed(format!(
            "per-prime quadratic form fails for {chi:?}"
        )));
    }
    Ok((l0, l, gcd_with(l, d)))
}

pub fn postnikov(chi: &DirichletCharacter) -> Result<PostnikovData> {
    let (ltilde, b1) = postnikov_linear(chi)?;
    let (l0, l, b) = postnikov_quadratic(chi)?;
    Ok(PostnikovData {
        ltilde,
        b1,
        l0,
        l,
        b,
        verified_linear: true,
        verified_quadratic: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_characters, CharValue, Phase};

    #[test]
    fn order_six_mod_nine() {
        let chars = enumerate_characters(9).unwrap();
        let chi = chars
            .iter()
            .find(|c| c.eval(2) == CharValue::Root(Phase::new(1, 6)))
            .unwrap();
        let (lt, b1) = postnikov_linear(chi).unwrap();
        assert_eq!(lt % 3, 1);
        assert_eq!(b1, 1);
    }

    #[test]
    fn nontrivial_mod_four() {
        let chi = &enumerate_characters(4).unwrap()[1];
        assert_eq!(postnikov_linear(chi).unwrap(), (1, 1));
    }

    #[test]
    fn mod_nine_induced_from_three() {
        let chars = enumerate_characters(9).unwrap();
        let chi = chars
            .iter()
            .find(|c| !c.is_principal() && c.conductor() == 3)
            .unwrap();
        assert_eq!(postnikov_linear(chi).unwrap(), (0, 3));
    }

    #[test]
    fn mod_nine_quadratic() {
        // C = 3, D = 1: the x^2 term vanishes but L₀ still carries χ(4)
        for chi in enumerate_characters(9).unwrap() {
            let (l0, l, b) = postnikov_quadratic(&chi).unwrap();
            assert_eq!(l, 0);
            assert_eq!(b, 1);
            assert!(l0 < 3);
            let k = chi.eval(4);
            assert_eq!(k == CharValue::Root(Phase::one()), l0 == 0);
        }
    }

    #[test]
    fn primitive_mod_eight() {
        for chi in enumerate_characters(8).unwrap() {
            if !chi.is_primitive() {
                continue;
            }
            let sols = quadratic_solutions(&chi, 2, 4);
            // (1,1) and (-1,1) ≡ (3,1) mod 4... L₀ lives mod CD/2 = 4
            assert!(sols.contains(&(1, 1)) || sols.contains(&(3, 1)), "{sols:?}");
            assert_eq!(postnikov_quadratic(&chi).unwrap().2, 1);
        }
    }

    #[test]
    fn primitive_mod_27_has_b_one() {
        for chi in enumerate_characters(27).unwrap() {
            if chi.is_primitive() {
                assert_eq!(postnikov_quadratic(&chi).unwrap().2, 1);
                assert_eq!(postnikov_linear(&chi).unwrap().1, 1);
            }
        }
    }

    #[test]
    fn per_prime_assembly_verifies() {
        for q in [72u64, 200, 675, 1800] {
            for chi in enumerate_characters(q).unwrap() {
                let (_, _, b_fast) = postnikov_quadratic_per_prime(&chi).unwrap();
                let (_, _, b) = postnikov_quadratic(&chi).unwrap();
                assert!(b <= b_fast);
                if chi.is_primitive() {
                    assert_eq!(b_fast, 1, "{chi:?}");
                }
            }
        }
    }
}

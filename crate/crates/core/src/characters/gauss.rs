use super::DirichletCharacter;
use crate::numeric::special::cis_ratio;
use crate::numeric::ComplexSum;
use num_complex::Complex64;

/// `G(χ, a) = Σ_{n mod q} χ(n) e^{2πi a n/q}`, with phases combined exactly
/// before conversion to floating point.
pub fn gauss_sum(chi: &DirichletCharacter, a: i64) -> Complex64 {
    let q = chi.modulus();
    let e = chi.exp_den() as u128;
    let den = e * q as u128;
    let a = a.rem_euclid(q as i64) as u128;
    let mut s = ComplexSum::new();
    for n in 0..q {
        if let Some(k) = chi.phase_num(n) {
            let add = (a * n as u128) % q as u128;
            let num = (k as u128 * q as u128 + add * e) % den;
            let g = gcd128(num, den);
            s.add(cis_ratio((num / g) as u64, (den / g) as u64));
        }
    }
    s.value()
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;

    #[test]
    fn quadratic_mod_three() {
        let chi = &enumerate_characters(3).unwrap()[1];
        // χ(1)e(-1/3) + χ(2)e(-2/3) = -i√3
        let g = gauss_sum(chi, -1);
        assert!(g.re.abs() < 1e-15);
        assert!((g.im + 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn principal_mod_four() {
        // e(-1/4) + e(-3/4) = -i + i = 0
        let chi = &enumerate_characters(4).unwrap()[0];
        assert!(gauss_sum(chi, -1).norm() < 1e-15);
    }

    #[test]
    fn primitive_moduli_have_root_q_modulus() {
        for q in [5u64, 8, 9, 13, 27, 64] {
            for chi in enumerate_characters(q).unwrap() {
                if chi.is_primitive() {
                    let g = gauss_sum(&chi, -1);
                    assert!((g.norm() - (q as f64).sqrt()).abs() < 1e-9 * (q as f64).sqrt());
                }
            }
        }
    }
}

use lhybrid::characters::{CharacterGroup, DirichletCharacter};
use lhybrid::lfunc::*;
use lhybrid::numeric::ComplexSum;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn nonprincipal(q: u64, k: u64) -> DirichletCharacter {
    let cs: Vec<_> = CharacterGroup::new(q)
        .unwrap()
        .characters()
        .into_iter()
        .filter(|c| !c.is_principal())
        .collect();
    cs[(k % cs.len() as u64) as usize].clone()
}

fn primitive(q: u64, k: u64) -> DirichletCharacter {
    let cs: Vec<_> = CharacterGroup::new(q)
        .unwrap()
        .characters()
        .into_iter()
        .filter(|c| c.is_primitive())
        .collect();
    cs[(k % cs.len() as u64) as usize].clone()
}

#[test]
fn known_values() {
    // Dirichlet beta at 1/2
    let chi4 = nonprincipal(4, 0);
    let l = l_direct(&chi4, 0.0, 1e-12).unwrap();
    assert!((l.value - Complex64::new(0.667_691_457_189_609_1, 0.0)).norm() <= l.err + 1e-15);
    let z2 = zeta(Complex64::new(2.0, 0.0), 1e-12).unwrap();
    assert!((z2.value.re - PI * PI / 6.0).abs() <= z2.err + 1e-15);
    // first nontrivial zero
    let z = zeta(Complex64::new(0.5, 14.134_725_141_734_693), 1e-10).unwrap();
    assert!(z.value.norm() <= z.err + 1e-9);
}

#[test]
fn gamma_bound_at_small_t() {
    for t in [1.0, 10.0] {
        assert!(ln_gamma_recip_exact(t) <= ln_gamma_recip_bound(t).unwrap());
        assert!(gamma_recip_bound(t).unwrap().is_finite());
    }
    assert!(ln_gamma_recip_bound(0.0).is_err());
}

#[test]
fn afe_residual_is_phase_sensitive() {
    // with the dual sum given the wrong phase the residual is no longer small
    for (q, t) in [(5u64, 300.0), (13, 1000.0), (37, 500.0)] {
        let chi = primitive(q, 1);
        let r = afe_eval(&chi, t).unwrap();
        let l = l_direct(&chi, t, 1e-8).unwrap().value;
        let good = (l - r.value()).norm();
        let bad = (l - (r.main_sum + r.f.conj() * r.dual_sum)).norm();
        assert!(good <= r.remainder_bound + 1e-8);
        assert!(good < bad, "q = {q}, t = {t}: {good} vs {bad}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn refinement_is_consistent(q in 3u64..60, k in any::<u64>(), t in -3000.0..3000.0f64) {
        let chi = nonprincipal(q, k);
        let a = l_direct(&chi, t, 1e-6).unwrap();
        let b = l_direct(&chi, t, 1e-7).unwrap();
        prop_assert!(a.err <= 1e-6 && b.err <= 1e-7);
        prop_assert!((a.value - b.value).norm() <= 1e-6 + 1e-7);
    }

    #[test]
    fn conjugate_symmetry(q in 3u64..60, k in any::<u64>(), t in 0.0..3000.0f64) {
        let chi = nonprincipal(q, k);
        let a = l_direct(&chi, t, 1e-8).unwrap();
        let b = l_direct(&chi.conjugate(), -t, 1e-8).unwrap();
        prop_assert!((a.value - b.value.conj()).norm() <= a.err + b.err);
    }

    #[test]
    fn partial_sum_plus_tail_dominates(q in 3u64..60, k in any::<u64>(), t in 1.0..2000.0f64, m in 1u64..5000) {
        let chi = nonprincipal(q, k);
        let l = l_direct(&chi, t, 1e-8).unwrap();
        let head: ComplexSum = (1..=m)
            .map(|n| {
                let ln = (n as f64).ln();
                chi.eval_complex(n as i64) * Complex64::from_polar((-0.5 * ln).exp(), -t * ln)
            })
            .collect();
        let tail = l_tail_bound(q, m as f64, t, chi.is_primitive()).unwrap();
        prop_assert!(l.abs_lower() <= head.value().norm() + head.rounding_bound() + tail);
    }

    #[test]
    fn afe_two_routes_agree(qi in 0usize..5, k in any::<u64>(), t in 50.0..1500.0f64) {
        let q = [5u64, 8, 13, 27, 37][qi];
        let chi = primitive(q, k);
        prop_assume!(t * t >= q as f64);
        let r = afe_eval(&chi, t).unwrap();
        let l = l_direct(&chi, t, 1e-8).unwrap();
        prop_assert!(r.remainder_bound >= 0.0);
        prop_assert!(r.f.norm() <= 1.0 + r.delta_t);
        prop_assert!((l.value - r.value()).norm() <= r.remainder_bound + l.err);
    }

    #[test]
    fn gamma_bound_dominates(t in 0.05..1e4f64) {
        prop_assert!(ln_gamma_recip_exact(t) <= ln_gamma_recip_bound(t).unwrap());
    }
}

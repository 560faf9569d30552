use lhybrid::arith::{gcd, lambda_count, modulus_profile};
use lhybrid::characters::{postnikov_linear, postnikov_quadratic, CharacterGroup, DirichletCharacter};
use lhybrid::expsums::*;
use proptest::prelude::*;
use std::f64::consts::PI;

const MODULI: [u64; 6] = [9, 27, 64, 81, 243, 729];
const ROUND: f64 = 3.6e-15; // 2^-48

/// Largest admissible `L` for `(t, N)`, by bisection; admissibility is
/// monotone in `L`.
fn max_len(red: &TaylorReduction, t: f64, n: u64) -> u64 {
    let (mut lo, mut hi) = (1u64, n + 2);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if red.holds(t, n, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn pick(q_idx: usize, k: u64, keep: impl Fn(&DirichletCharacter) -> bool) -> DirichletCharacter {
    let g = CharacterGroup::new(MODULI[q_idx]).unwrap();
    let cs: Vec<_> = g.characters().into_iter().filter(|c| keep(c)).collect();
    cs[(k % cs.len() as u64) as usize].clone()
}

/// `(q index, char seed, t, N, fraction of the admissible length)`.
fn sum_case() -> impl Strategy<Value = (usize, u64, f64, u64, f64)> {
    (0..MODULI.len(), any::<u64>(), 200.0..2000.0f64, 300u64..60_000, 0.0..=1.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn taylor_reduction_dominates((qi, k, t, n, frac) in sum_case(), j in 0u32..=2) {
        let chi = pick(qi, k, |c| !c.is_principal());
        let red = TaylorReduction::for_rho(j, 1.3).unwrap();
        let l = 1 + ((max_len(&red, t, n) - 1) as f64 * frac) as u64;
        let (s, err) = twisted_sum(&chi, t, n, l).unwrap();
        let model = taylor_model_max(&chi, t, n, l, j).unwrap();
        prop_assert!(s.norm() - err <= red.nu * (model + l as f64 * ROUND));
    }

    #[test]
    fn corput1_dominates((qi, k, t, n, frac) in sum_case()) {
        let chi = pick(qi, k, |c| c.is_primitive());
        let prof = modulus_profile(chi.modulus()).unwrap();
        let red = TaylorReduction::for_rho(1, 1.3).unwrap();
        let l = 1 + ((max_len(&red, t, n) - 1) as f64 * frac) as u64;
        let b1 = postnikov_linear(&chi).unwrap().1;
        let (s, err) = twisted_sum(&chi, t, n, l).unwrap();
        prop_assert!(s.norm() - err <= corput1_bound(&prof, b1, &red, t, n, l).unwrap());
    }

    #[test]
    fn corput2_dominates((qi, k, t, n, frac) in sum_case()) {
        let chi = pick(qi, k, |c| c.is_primitive());
        let prof = modulus_profile(chi.modulus()).unwrap();
        let red = TaylorReduction::for_rho(2, 1.3).unwrap();
        let l = 1 + ((max_len(&red, t, n) - 1) as f64 * frac) as u64;
        let b = postnikov_quadratic(&chi).unwrap().2;
        let (s, err) = twisted_sum(&chi, t, n, l).unwrap();
        let bound = corput2_bound(&prof, b, prof.lambda_d, &red, t, n, l).unwrap();
        prop_assert!(s.norm() - err <= bound);
    }

    #[test]
    fn bounds_monotone_in_length((qi, k, t, n, frac) in sum_case(), step in 1u64..50) {
        let chi = pick(qi, k, |c| c.is_primitive());
        let prof = modulus_profile(chi.modulus()).unwrap();
        let r1 = TaylorReduction::for_rho(1, 1.3).unwrap();
        let r2 = TaylorReduction::for_rho(2, 1.3).unwrap();
        let b1 = postnikov_linear(&chi).unwrap().1;
        let b = postnikov_quadratic(&chi).unwrap().2;
        let lmax = max_len(&r1, t, n).min(max_len(&r2, t, n));
        let l = 1 + ((lmax - 1) as f64 * frac) as u64;
        let l2 = (l + step).min(lmax);
        let c1 = |l| corput1_bound(&prof, b1, &r1, t, n, l).unwrap();
        let c2 = |l| corput2_bound(&prof, b, prof.lambda_d, &r2, t, n, l).unwrap();
        prop_assert!(c1(l) <= c1(l2));
        prop_assert!(c2(l) <= c2(l2));
        let alpha = t / (2.0 * PI * n as f64);
        prop_assert!(linear_exp_sum_bound(alpha, l) <= linear_exp_sum_bound(alpha, l2));
        prop_assert!(wellspacing_bound(3.0, 0.1, 0.0, l as f64) <= wellspacing_bound(3.0, 0.1, 0.0, l2 as f64));
    }

    #[test]
    fn wellspacing_dominates(
        p in 0.5..60.0f64,
        delta in 0.01..1.0f64,
        x in -50.0..50.0f64,
        gaps in prop::collection::vec(0.0..2.0f64, 1..200),
    ) {
        let mut ys = vec![x + gaps[0]];
        for g in &gaps[1..] {
            let last = *ys.last().unwrap();
            ys.push(last + delta + g);
        }
        let y = *ys.last().unwrap();
        let lhs: f64 = ys
            .iter()
            .map(|v| {
                let d = (v - v.round()).abs();
                if d == 0.0 { p } else { p.min(1.0 / d) }
            })
            .sum();
        prop_assert!(lhs <= wellspacing_bound(p, delta, x, y));
    }

    #[test]
    fn linear_bound_dominates(alpha in -3.0..3.0f64, len in 1u64..3000) {
        let mut s = num_complex::Complex64::new(0.0, 0.0);
        for n in 0..len {
            s += num_complex::Complex64::from_polar(1.0, 2.0 * PI * alpha * n as f64);
        }
        prop_assert!(s.norm() <= linear_exp_sum_bound(alpha, len) * (1.0 + 1e-9) + 1e-9);
    }

    #[test]
    fn kusmin_landau_split((qi, k, t, n, _f) in sum_case()) {
        let chi = pick(qi, k, |c| c.is_primitive());
        let prof = modulus_profile(chi.modulus()).unwrap();
        let b1 = postnikov_linear(&chi).unwrap().1;
        let kl = KusminLandauTerm::new(&prof, b1, t, n);
        let v = -(prof.q as f64) * t / (2.0 * PI * b1 as f64 * (n + 1) as f64);
        prop_assert!(kl.delta_f.abs() <= 0.5);
        prop_assert_eq!(kl.z_f, kl.z_f.round());
        prop_assert!((kl.z_f + kl.delta_f - v).abs() <= 1e-9 * v.abs().max(1.0));
    }

    #[test]
    fn differenced_terms((qi, k, t, n, _f) in sum_case(), m in 1u64..500) {
        let chi = pick(qi, k, |c| c.is_primitive());
        let prof = modulus_profile(chi.modulus()).unwrap();
        let b = postnikov_quadratic(&chi).unwrap().2;
        let d = DifferencedTerm::new(&prof, b, m, t, n).unwrap();
        prop_assert_eq!(d.m_prime * b * d.d_m, 2 * m * b);
        prop_assert_eq!(prof.d % d.p_m, 0);
        prop_assert_eq!(d.d_m, gcd(2 * m, prof.d / b));
        prop_assert!(d.lambda_m <= lambda_count(prof.d).unwrap());
        prop_assert!(d.eps_m.abs() <= 0.5);
    }

    #[test]
    fn nu_at_least_one(j in 0u32..6, lambda in 1.01..10.0f64, eta in 0.0..1.0f64) {
        let nu = nu_factor(j, lambda, eta).unwrap();
        prop_assert!(nu >= 1.0);
        prop_assert!(nu_factor(j + 1, lambda, eta).unwrap() <= nu);
    }

    #[test]
    fn phase_taylor_coefficients(t in -5000.0..5000.0f64, x in 1.0..1e6f64) {
        let f = PhaseFunction::new(t);
        prop_assert!((f.taylor_coeff_abs(1, x) - f.d1(x).abs()).abs() <= 1e-12 * f.d1(x).abs());
        prop_assert!((f.taylor_coeff_abs(2, x) - f.d2(x).abs() / 2.0).abs() <= 1e-12 * f.d2(x).abs());
    }
}

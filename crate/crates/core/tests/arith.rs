use lhybrid::arith::*;
use proptest::prelude::*;

#[test]
fn lambda_count_matches_scan() {
    // exhaustive up to 5000 here; the acceptance suite covers the full range
    for m in 1..=5000u64 {
        let scan = (0..m).filter(|&x| (x * x) % m == 1 % m).count() as u64;
        assert_eq!(lambda_count(m).unwrap(), scan, "m = {m}");
    }
}

#[test]
fn sixth_powers_have_unit_sqf_and_cbf() {
    for m in 2u64..=10 {
        let q = m.pow(6);
        let p = modulus_profile(q).unwrap();
        assert!(p.sqf.is_one() && p.cbf.is_one(), "q = {q}");
        assert!(p.spf.le_one(), "q = {q}");
        assert!(p.spf.to_f64() <= 1.0);
    }
}

#[test]
fn profile_of_12() {
    let p = modulus_profile(12).unwrap();
    assert_eq!((p.c1, p.d1, p.c, p.d), (6, 2, 6, 2));
    assert_eq!((p.tau, p.omega, p.phi, p.lambda_d), (6, 2, 4, 1));
}

#[test]
fn gcd_sums_small_table() {
    for m in 1..=256u64 {
        for n in 1..=256u64 {
            assert!(gcd_sums_within_bounds(m, n).unwrap(), "M = {m}, N = {n}");
        }
    }
}

#[test]
fn overflow_is_an_error() {
    assert!(checked_pow(2, 64).is_err());
    assert!(lcm(1 << 40, (1 << 40) - 1).is_err());
}

fn coprime_pair() -> impl Strategy<Value = (u64, u64)> {
    (1u64..20_000, 1u64..20_000).prop_filter("coprime", |&(a, b)| gcd(a, b) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn factorization_reconstructs(n in 1u64..(1 << 50)) {
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.value(), n);
        for &(p, a) in f.pairs() {
            prop_assert!(is_prime(p) && a >= 1);
        }
        let ps: Vec<u64> = f.primes().collect();
        prop_assert!(ps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn profile_is_multiplicative((a, b) in coprime_pair()) {
        let (pa, pb, pab) = (
            modulus_profile(a).unwrap(),
            modulus_profile(b).unwrap(),
            modulus_profile(a * b).unwrap(),
        );
        prop_assert_eq!(pab.c1, pa.c1 * pb.c1);
        prop_assert_eq!(pab.d1, pa.d1 * pb.d1);
        prop_assert_eq!(pab.c, pa.c * pb.c);
        prop_assert_eq!(pab.d, pa.d * pb.d);
        prop_assert_eq!(pab.tau, pa.tau * pb.tau);
        prop_assert_eq!(pab.phi, pa.phi * pb.phi);
        prop_assert_eq!(pab.omega, pa.omega + pb.omega);
        prop_assert_eq!(pab.lambda_d, pa.lambda_d * pb.lambda_d);
        prop_assert_eq!(&pab.sqf, &pa.sqf.mul(&pb.sqf));
        prop_assert_eq!(&pab.cbf, &pa.cbf.mul(&pb.cbf));
        prop_assert_eq!(&pab.spf, &pa.spf.mul(&pb.spf));
    }

    #[test]
    fn profile_divisibility(q in 1u64..1_000_000) {
        let p = modulus_profile(q).unwrap();
        prop_assert_eq!(p.c1 * p.d1, q);
        for &(pr, a) in p.factorization.pairs() {
            let local = modulus_profile(pr.pow(a)).unwrap();
            prop_assert_eq!(pr.pow(a + 1) % (local.c * local.d), 0);
        }
    }

    #[test]
    fn gcd_sums_hold(m in 1u64..3000, n in 1u64..100_000) {
        prop_assert!(gcd_sums_within_bounds(m, n).unwrap());
    }
}

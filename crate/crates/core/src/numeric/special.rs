use num_complex::Complex64;
use std::f64::consts::PI;

/// `B_{2j}` for `j = 1..=15` as exact fractions.
pub const BERNOULLI_EVEN: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

pub const MAX_EM_DEPTH: usize = BERNOULLI_EVEN.len();

/// `B_{2j} / (2j)!`, for `1 <= j <= 15`.
pub fn bernoulli_over_factorial(j: usize) -> f64 {
    assert!((1..=MAX_EM_DEPTH).contains(&j));
    let (n, d) = BERNOULLI_EVEN[j - 1];
    let mut f = 1.0f64;
    for k in 1..=(2 * j) {
        f *= k as f64;
    }
    n / d / f
}

/// `e^{2πi x}`, reducing `x` to `[-1/2, 1/2]` first.
pub fn cis_turns(x: f64) -> Complex64 {
    let r = x - x.round();
    let (s, c) = (2.0 * PI * r).sin_cos();
    Complex64::new(c, s)
}

/// `e^{2πi num/den}` for an exact rational phase with `num < den`.
pub fn cis_ratio(num: u64, den: u64) -> Complex64 {
    debug_assert!(num < den);
    let signed = if 2 * num as u128 > den as u128 {
        -((den - num) as f64)
    } else {
        num as f64
    };
    let (s, c) = (2.0 * PI * (signed / den as f64)).sin_cos();
    Complex64::new(c, s)
}

/// Principal branch of `log Γ(z)` for `Re z > 0`, via Stirling's series
/// after shifting `|z|` past 15. Absolute error is a few ulps of the result.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    assert!(z.re > 0.0, "ln_gamma needs Re z > 0");
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let half_ln_2pi = 0.918_938_533_204_672_8;
    let mut s = (w - 0.5) * w.ln() - w + half_ln_2pi;
    let w2 = w * w;
    let mut wp = w;
    for j in 1..=8usize {
        let (n, d) = BERNOULLI_EVEN[j - 1];
        let c = n / d / ((2 * j) as f64 * (2 * j - 1) as f64);
        s += c / wp;
        wp *= w2;
    }
    s - shift
}

/// `log cosh x` without overflow.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

//! Values of `L(1/2 + it, χ)` with error radii, by direct Hurwitz
//! summation and by the approximate functional equation.

mod afe;
mod hurwitz;

pub use afe::{
    afe_eval, afe_remainder_bound, cached_gauss_sum, delta_t, gamma_recip_bound, l_afe,
    l_tail_bound, ln_gamma_recip_bound, ln_gamma_recip_exact, AfeResult,
};
pub use hurwitz::{l_direct, l_direct_at, zeta, HurwitzTable, MIN_EPS};

use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Afe,
}

/// A value whose true counterpart lies within `err` of `value`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LValue {
    pub value: Complex64,
    pub err: f64,
    pub method: Method,
}

impl LValue {
    /// Upper bound on the true modulus, rounded up.
    pub fn abs_upper(&self) -> f64 {
        (self.value.norm().next_up() + self.err).next_up()
    }

    /// Lower bound on the true modulus.
    pub fn abs_lower(&self) -> f64 {
        (self.value.norm().next_down() - self.err).next_down().max(0.0)
    }
}

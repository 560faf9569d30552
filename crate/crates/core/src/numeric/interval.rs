//! Closed intervals with outward rounding.
//!
//! Every closed-form bound is evaluated as an `Enclosure` so that a verdict
//! can compare a rigorous upper estimate of `|L|` with the lower end of the
//! bound. Elementary operations round outward by one ulp; library
//! transcendental functions are trusted to within one ulp and widened by two.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, PartialEq)]
pub struct Enclosure {
    lo: f64,
    hi: f64,
}

fn down(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

fn widen(lo: f64, hi: f64) -> Enclosure {
    Enclosure {
        lo: lo.next_down().next_down(),
        hi: hi.next_up().next_up(),
    }
}

impl Enclosure {
    pub const PI: Enclosure = Enclosure {
        lo: std::f64::consts::PI,
        hi: 3.1415926535897936,
    };
    pub const E: Enclosure = Enclosure {
        lo: std::f64::consts::E,
        hi: 2.7182818284590455,
    };

    /// An exactly representable value.
    pub fn exact(x: f64) -> Enclosure {
        Enclosure { lo: x, hi: x }
    }

    /// A decimal constant whose nearest double is `x`.
    pub fn decimal(x: f64) -> Enclosure {
        Enclosure {
            lo: down(x),
            hi: up(x),
        }
    }

    pub fn new(lo: f64, hi: f64) -> Enclosure {
        assert!(lo <= hi, "empty enclosure [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    /// Encloses `x` assuming it carries at most `ulps` units of error.
    pub fn around(x: f64, ulps: u32) -> Enclosure {
        let (mut lo, mut hi) = (x, x);
        for _ in 0..ulps {
            lo = down(lo);
            hi = up(hi);
        }
        Enclosure { lo, hi }
    }

    pub fn from_u64(n: u64) -> Enclosure {
        let x = n as f64;
        if x as u128 == n as u128 {
            Enclosure::exact(x)
        } else {
            Enclosure::decimal(x)
        }
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn mid(self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_finite(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn sqr(self) -> Enclosure {
        if self.lo >= 0.0 {
            Enclosure::new(down(self.lo * self.lo), up(self.hi * self.hi))
        } else if self.hi <= 0.0 {
            Enclosure::new(down(self.hi * self.hi), up(self.lo * self.lo))
        } else {
            let m = self.lo.abs().max(self.hi);
            Enclosure::new(0.0, up(m * m))
        }
    }

    /// Square root; the caller guarantees the true value is nonnegative, so
    /// a lower end pushed below zero by outward rounding is clamped.
    pub fn sqrt(self) -> Enclosure {
        debug_assert!(self.hi >= 0.0 || self.hi.is_nan(), "sqrt of {self:?}");
        let lo = self.lo.max(0.0);
        Enclosure::new(down(lo.sqrt()).max(0.0), up(self.hi.sqrt()))
    }

    pub fn ln(self) -> Enclosure {
        widen(self.lo.ln(), self.hi.ln())
    }

    pub fn exp(self) -> Enclosure {
        let e = widen(self.lo.exp(), self.hi.exp());
        Enclosure::new(e.lo.max(0.0), e.hi)
    }

    /// `self^p` for a positive base and a nonnegative exact exponent.
    pub fn powf(self, p: f64) -> Enclosure {
        debug_assert!(self.lo > 0.0 && p >= 0.0);
        let e = widen(self.lo.powf(p), self.hi.powf(p));
        Enclosure::new(e.lo.max(0.0), e.hi)
    }

    /// `self^(num/den)` with the exponent known exactly as a rational.
    pub fn pow_ratio(self, num: u32, den: u32) -> Enclosure {
        match den {
            1 => self.powi(num),
            2 => self.powi(num).sqrt(),
            3 => {
                let c = Enclosure::new(self.lo.cbrt(), self.hi.cbrt());
                widen(c.lo, c.hi).powi(num)
            }
            _ => {
                // p/den is not exact in binary; bracket it before powf
                let p = num as f64 / den as f64;
                let (plo, phi) = (down(p), up(p));
                let cand = [
                    self.lo.powf(plo),
                    self.lo.powf(phi),
                    self.hi.powf(plo),
                    self.hi.powf(phi),
                ];
                let lo = cand.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = cand.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                widen(lo, hi)
            }
        }
    }

    pub fn powi(self, n: u32) -> Enclosure {
        let mut acc = Enclosure::exact(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    pub fn max(self, other: Enclosure) -> Enclosure {
        Enclosure::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    pub fn min(self, other: Enclosure) -> Enclosure {
        Enclosure::new(self.lo.min(other.lo), self.hi.min(other.hi))
    }

    /// `self <= other` holds for every pair of enclosed values.
    pub fn certainly_le(self, other: Enclosure) -> bool {
        self.hi <= other.lo
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl From<f64> for Enclosure {
    fn from(x: f64) -> Self {
        Enclosure::exact(x)
    }
}

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Add for Enclosure {
    type Output = Enclosure;
    fn add(self, b: Enclosure) -> Enclosure {
        Enclosure::new(down(self.lo + b.lo), up(self.hi + b.hi))
    }
}

impl Sub for Enclosure {
    type Output = Enclosure;
    fn sub(self, b: Enclosure) -> Enclosure {
        self + (-b)
    }
}

impl Mul for Enclosure {
    type Output = Enclosure;
    fn mul(self, b: Enclosure) -> Enclosure {
        let p = [
            self.lo * b.lo,
            self.lo * b.hi,
            self.hi * b.lo,
            self.hi * b.hi,
        ];
        let lo = p.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Enclosure::new(down(lo), up(hi))
    }
}

impl Div for Enclosure {
    type Output = Enclosure;
    fn div(self, b: Enclosure) -> Enclosure {
        assert!(
            b.lo > 0.0 || b.hi < 0.0,
            "division by an enclosure containing zero: {b:?}"
        );
        let p = [
            self.lo / b.lo,
            self.lo / b.hi,
            self.hi / b.lo,
            self.hi / b.hi,
        ];
        let lo = p.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Enclosure::new(down(lo), up(hi))
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Enclosure {
            type Output = Enclosure;
            fn $m(self, b: f64) -> Enclosure {
                $tr::$m(self, Enclosure::exact(b))
            }
        }
        impl $tr<Enclosure> for f64 {
            type Output = Enclosure;
            fn $m(self, b: Enclosure) -> Enclosure {
                $tr::$m(Enclosure::exact(self), b)
            }
        }
    )*};
}

scalar_ops!(Add add, Sub sub, Mul mul, Div div);

use num_complex::Complex64;

/// Neumaier summation, also tracking `Σ|x_i|` for error budgets.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs
    }

    /// Bound on the accumulated rounding error of `value()`, from the
    /// standard `2u + O(n u^2)` analysis with a generous margin.
    pub fn rounding_bound(&self) -> f64 {
        4.0 * f64::EPSILON * self.abs
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    /// `Σ(|re| + |im|)`, an upper bound for `Σ|z_i|`.
    pub fn abs_sum(&self) -> f64 {
        self.re.abs_sum() + self.im.abs_sum()
    }

    pub fn rounding_bound(&self) -> f64 {
        self.re.rounding_bound() + self.im.rounding_bound()
    }
}

impl std::iter::FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = ComplexSum::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancels_large_terms() {
        let mut s = NeumaierSum::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn harmonic_tail_matches_reverse_order() {
        let mut fwd = NeumaierSum::new();
        let mut rev = NeumaierSum::new();
        for k in 1..=100_000u32 {
            fwd.add(1.0 / k as f64);
        }
        for k in (1..=100_000u32).rev() {
            rev.add(1.0 / k as f64);
        }
        assert!((fwd.value() - rev.value()).abs() <= 1e-15);
    }
}

//! Summation helpers shared by the lattice sums.
//!
//! Two tools live here: a Neumaier compensated accumulator for long sums of
//! mixed-sign terms, and a fixed-shape pairwise reduction whose result does
//! not depend on how the terms were produced (sequentially or by a thread
//! pool), only on their order.

use std::f64::consts::PI;
use std::iter::Sum;
use std::ops::AddAssign;

use num_complex::Complex64;

/// Error-free transformation of `a + b` (Knuth's TwoSum).
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bp = s - a;
    let err = (a - (s - bp)) + (b - bp);
    (s, err)
}

/// Kahan-Babuska-Neumaier accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.comp += e;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for Neumaier {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl Sum<f64> for Neumaier {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        iter.for_each(|x| acc.add(x));
        acc
    }
}

/// Compensated accumulator for complex terms (real and imaginary parts
/// carried independently).
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexNeumaier {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexNeumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl AddAssign<Complex64> for ComplexNeumaier {
    fn add_assign(&mut self, rhs: Complex64) {
        self.add(rhs);
    }
}

impl Sum<Complex64> for ComplexNeumaier {
    fn sum<I: Iterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexNeumaier::new();
        iter.for_each(|z| acc.add(z));
        acc
    }
}

/// Pairwise (binary tree) sum with a shape fixed by `terms.len()` alone.
pub fn pairwise_sum(terms: &[Complex64]) -> Complex64 {
    const LEAF: usize = 8;
    if terms.len() <= LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in terms {
            acc += t;
        }
        return acc;
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}

/// `exp(2 pi i * num / den)` with the numerator reduced exactly first, so the
/// angle handed to `sin_cos` lies in `[0, 2 pi)` regardless of how large the
/// integer exponent grew.
#[inline]
pub fn root_of_unity(num: i128, den: i128) -> Complex64 {
    let r = num.rem_euclid(den);
    let angle = 2.0 * PI * (r as f64) / (den as f64);
    let (s, c) = angle.sin_cos();
    Complex64::new(c, s)
}

/// `sin(pi * num / den)` with exact reduction of the argument to `[0, 2 pi)`.
#[inline]
pub fn sin_pi_rational(num: i128, den: i128) -> f64 {
    let r = num.rem_euclid(2 * den);
    (PI * (r as f64) / (den as f64)).sin()
}

/// Serializes a complex number as `{"re": .., "im": ..}`.
pub mod complex_json {
    use num_complex::Complex64;
    use serde::ser::SerializeStruct;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &Complex64, ser: S) -> Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("Complex", 2)?;
        st.serialize_field("re", &z.re)?;
        st.serialize_field("im", &z.im)?;
        st.end()
    }
}

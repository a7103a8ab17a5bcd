//! Half-integer labels and q-number arithmetic.
//!
//! Every angular label in the construction (`l`, `m`, exponents of `q`) is a
//! multiple of one half, so [`HalfInt`] stores twice its value as an integer.
//! [`QContext`] evaluates q-numbers `[x] = (q^x - q^-x) / (q - q^-1)` and
//! q-powers for a fixed deformation parameter `0 < q <= 1`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest `|x ln q|` accepted before `q^{±x}` would leave the `f64` range.
pub const MAX_LOG_MAGNITUDE: f64 = 709.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("deformation parameter q = {0} outside (0, 1]")]
    InvalidQ(f64),
    #[error("q^{exponent} overflows f64 at q = {q}")]
    Overflow { q: f64, exponent: f64 },
}

/// A number in `Z/2`, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    #[inline]
    pub const fn from_twice(twice: i32) -> Self {
        Self { twice }
    }

    #[inline]
    pub const fn from_int(n: i32) -> Self {
        Self { twice: 2 * n }
    }

    #[inline]
    pub const fn twice(self) -> i32 {
        self.twice
    }

    #[inline]
    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    #[inline]
    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub const fn abs(self) -> Self {
        Self { twice: self.twice.abs() }
    }
}

impl Ord for HalfInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.twice.cmp(&other.twice)
    }
}

impl PartialOrd for HalfInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: Self) -> Self {
        Self { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: Self) -> Self {
        Self { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> Self {
        Self { twice: -self.twice }
    }
}

impl Add<i32> for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: i32) -> Self {
        Self { twice: self.twice + 2 * rhs }
    }
}

impl Sub<i32> for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: i32) -> Self {
        Self { twice: self.twice - 2 * rhs }
    }
}

impl From<HalfInt> for f64 {
    fn from(h: HalfInt) -> f64 {
        h.value()
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Deformation parameter with cached `ln q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QContext {
    q: f64,
    log_q: f64,
}

impl QContext {
    pub fn new(q: f64) -> Result<Self, QError> {
        if !(q.is_finite() && q > 0.0 && q <= 1.0) {
            return Err(QError::InvalidQ(q));
        }
        let log_q = if q == 1.0 { 0.0 } else { q.ln() };
        Ok(Self { q, log_q })
    }

    /// The undeformed case `q = 1`.
    pub fn classical() -> Self {
        Self { q: 1.0, log_q: 0.0 }
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    #[inline]
    pub fn log_q(&self) -> f64 {
        self.log_q
    }

    #[inline]
    pub fn is_classical(&self) -> bool {
        self.q == 1.0
    }

    fn guard(&self, x: f64) -> Result<(), QError> {
        if (x * self.log_q).abs() > MAX_LOG_MAGNITUDE || !x.is_finite() {
            Err(QError::Overflow { q: self.q, exponent: x })
        } else {
            Ok(())
        }
    }

    /// `[x]`, evaluated as `sinh(x ln q) / sinh(ln q)`; exactly `x` at `q = 1`.
    pub fn q_number(&self, x: impl Into<f64>) -> Result<f64, QError> {
        let x = x.into();
        self.guard(x)?;
        Ok(self.qn(x))
    }

    /// `q^x` with the positive root for fractional `x`.
    pub fn q_power(&self, x: impl Into<f64>) -> Result<f64, QError> {
        let x = x.into();
        self.guard(x)?;
        Ok(self.qp(x))
    }

    /// Accepts `(q, shells)` when every q-power the truncated operators need,
    /// up to `q^{-(2 shells + 3)}`, stays inside the `f64` range.
    pub fn preflight(&self, shells: u32) -> Result<(), QError> {
        self.guard(-(2.0 * f64::from(shells) + 3.0))
    }

    // Unchecked evaluators for callers that already passed `preflight`.

    #[inline]
    pub(crate) fn qn(&self, x: f64) -> f64 {
        if self.log_q == 0.0 {
            x
        } else {
            (x * self.log_q).sinh() / self.log_q.sinh()
        }
    }

    #[inline]
    pub(crate) fn qp(&self, x: f64) -> f64 {
        if self.log_q == 0.0 {
            1.0
        } else {
            (x * self.log_q).exp()
        }
    }

    /// `ln [x]` for `x > 0`, finite even where `[x]` itself would overflow.
    pub(crate) fn ln_qn(&self, x: f64) -> f64 {
        debug_assert!(x > 0.0);
        if self.log_q == 0.0 {
            return x.ln();
        }
        // [x] = e^{ax} (1 - e^{-2ax}) / (e^{a} (1 - e^{-2a})),  a = ln(1/q)
        let a = -self.log_q;
        a * x + (-(-2.0 * a * x).exp_m1()).ln() - a - (-(-2.0 * a).exp_m1()).ln()
    }

    /// `sqrt([x])` with negative arguments clamped to zero.
    #[inline]
    pub(crate) fn sqrt_qn(&self, x: f64) -> f64 {
        let v = self.qn(x);
        if v <= 0.0 {
            0.0
        } else {
            v.sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn halfint_arithmetic_and_display() {
        assert_eq!(half(1) + half(1), HalfInt::ONE);
        assert_eq!(half(3) - 1, half(1));
        assert_eq!(-half(3), half(-3));
        assert!(half(-1) < half(1));
        assert!(!half(5).is_integer());
        assert!(half(4).is_integer());
        assert_eq!(half(-3).to_string(), "-3/2");
        assert_eq!(half(4).to_string(), "2");
        assert_eq!(half(7).value(), 3.5);
    }

    #[test]
    fn context_rejects_out_of_range() {
        assert!(QContext::new(0.0).is_err());
        assert!(QContext::new(1.5).is_err());
        assert!(QContext::new(f64::NAN).is_err());
        assert!(QContext::new(-0.5).is_err());
        assert!(QContext::new(1.0).unwrap().is_classical());
    }

    #[test]
    fn q_number_examples() {
        let c1 = QContext::new(1.0).unwrap();
        assert_eq!(c1.q_number(2.0).unwrap(), 2.0);
        let c = QContext::new(0.5).unwrap();
        // (0.25 - 4) / (0.5 - 2)
        assert!((c.q_number(2.0).unwrap() - 2.5).abs() < 1e-15);
        let c = QContext::new(0.25).unwrap();
        assert!((c.q_number(HalfInt::HALF).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn q_power_examples() {
        let c1 = QContext::classical();
        assert_eq!(c1.q_power(-7.5).unwrap(), 1.0);
        let c = QContext::new(0.25).unwrap();
        assert!((c.q_power(HalfInt::HALF).unwrap() - 0.5).abs() < 1e-15);
        let c = QContext::new(0.5).unwrap();
        assert!((c.q_power(-3.0).unwrap() - 8.0).abs() < 1e-13);
    }

    #[test]
    fn basic_values() {
        for q in [0.1, 0.3, 0.5, 0.9, 0.999, 1.0] {
            let c = QContext::new(q).unwrap();
            assert_eq!(c.q_number(0.0).unwrap(), 0.0);
            assert!((c.q_number(1.0).unwrap() - 1.0).abs() < 1e-15);
            for x in [0.5, 1.5, 7.0, 13.5] {
                assert_eq!(c.q_number(-x).unwrap(), -c.q_number(x).unwrap());
                assert!(c.q_number(x).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn product_identity_spot_check() {
        for q in [0.3, 0.5, 0.9, 1.0] {
            let c = QContext::new(q).unwrap();
            let n = |x: f64| c.q_number(x).unwrap();
            let lhs = n(3.0) * n(4.0);
            let rhs = n(6.0) + n(2.0) * n(3.0);
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs(), "q = {q}");
        }
    }

    #[test]
    fn near_classical_stability() {
        let c = QContext::new(1.0 - 1e-10).unwrap();
        for twice in -40..=40 {
            let x = f64::from(twice) / 2.0;
            let v = c.q_number(x).unwrap();
            assert!((v - x).abs() <= 1e-6 * x.abs(), "x = {x}: {v}");
        }
    }

    #[test]
    fn overflow_is_reported() {
        let c = QContext::new(0.01).unwrap();
        assert!(matches!(c.q_number(200.0), Err(QError::Overflow { .. })));
        assert!(matches!(c.q_power(-200.0), Err(QError::Overflow { .. })));
        assert!(c.preflight(10).is_ok());
        assert!(c.preflight(100).is_err());
        // q = 1 never overflows
        assert!(QContext::classical().preflight(u32::MAX).is_ok());
    }

    #[test]
    fn log_q_number_matches_direct() {
        for q in [0.2, 0.5, 0.9, 1.0] {
            let c = QContext::new(q).unwrap();
            for x in [0.5, 1.0, 3.5, 20.0] {
                let direct = c.qn(x).ln();
                assert!((c.ln_qn(x) - direct).abs() < 1e-12 * direct.abs().max(1.0));
            }
        }
        // stays finite far beyond the direct range
        let c = QContext::new(0.1).unwrap();
        assert!(c.ln_qn(1000.0).is_finite());
    }
}

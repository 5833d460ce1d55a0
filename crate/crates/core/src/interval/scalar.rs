use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rounding;
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` of binary64 numbers with outward-rounded arithmetic.
///
/// The operator impls never fail; a result that overflows carries an infinite
/// bound and is rejected by [`Interval::finite`] or the `checked_*` methods.
/// Pipeline stages validate finiteness at their outputs.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    /// Enclosure of pi.
    pub const PI: Interval = Interval {
        lo: std::f64::consts::PI,
        hi: 3.141_592_653_589_793_6,
    };
    pub const HALF_PI: Interval = Interval {
        lo: std::f64::consts::FRAC_PI_2,
        hi: 1.570_796_326_794_896_8,
    };
    pub const QUARTER_PI: Interval = Interval {
        lo: std::f64::consts::FRAC_PI_4,
        hi: 0.785_398_163_397_448_4,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval. Panics on a non-finite input.
    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "point interval from non-finite value {x}");
        Interval { lo: x, hi: x }
    }

    /// `mid ± rad` with outward rounding.
    pub fn centered(mid: f64, rad: f64) -> Result<Self> {
        let rad = rad.abs();
        Interval::new(rounding::sub(mid, rad).0, rounding::add(mid, rad).1)
    }

    /// Smallest interval containing both bounds in either order.
    pub fn hull_of(a: f64, b: f64) -> Result<Self> {
        Interval::new(a.min(b), a.max(b))
    }

    /// Constructs without validation; callers guarantee `lo <= hi`, possibly infinite.
    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(!(lo > hi), "raw interval with lo > hi: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Returns `self` if both bounds are finite.
    pub fn finite(self) -> Result<Self> {
        if self.lo.is_nan() || self.hi.is_nan() {
            return Err(Error::InvalidInterval { lo: self.lo, hi: self.hi });
        }
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Overflow)
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Approximate midpoint, guaranteed to lie in the interval.
    pub fn mid(&self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        rounding::sub(self.hi, self.lo).1
    }

    /// Upper bound on the radius about [`Interval::mid`].
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        rounding::sub(m, self.lo).1.max(rounding::sub(self.hi, m).1)
    }

    /// Largest absolute value.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` lies in the open interior of `other`.
    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::raw(lo, hi))
    }

    /// Splits into `n` consecutive pieces whose union is `self`.
    pub fn split(&self, n: usize) -> Vec<Interval> {
        assert!(n > 0, "split into zero pieces");
        if n == 1 || self.is_point() {
            return vec![*self];
        }
        let step = (self.hi - self.lo) / n as f64;
        let mut cuts = Vec::with_capacity(n + 1);
        cuts.push(self.lo);
        for k in 1..n {
            cuts.push((self.lo + step * k as f64).clamp(self.lo, self.hi));
        }
        cuts.push(self.hi);
        cuts.windows(2)
            .map(|w| Interval::raw(w[0], w[1].max(w[0])))
            .collect()
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval::raw(0.0, self.mag())
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        let lo = rounding::mul(a.lo, a.lo).0;
        let hi = rounding::mul(a.hi, a.hi).1;
        Interval::raw(lo.max(0.0), hi)
    }

    /// Integer power, tight for even exponents.
    pub fn powi(&self, n: u32) -> Interval {
        match n {
            0 => Interval::ONE,
            1 => *self,
            _ if n % 2 == 0 => {
                let h = self.powi(n / 2);
                h.sqr()
            }
            _ => {
                // Odd powers are monotone; evaluate at the endpoints.
                let lo = Interval::point_unchecked(self.lo).powi(n - 1) * Interval::point_unchecked(self.lo);
                let hi = Interval::point_unchecked(self.hi).powi(n - 1) * Interval::point_unchecked(self.hi);
                Interval::raw(lo.lo, hi.hi)
            }
        }
    }

    #[inline]
    fn point_unchecked(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    pub fn recip(&self) -> Result<Interval> {
        Interval::ONE.checked_div(self)
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::Domain("sqrt"));
        }
        Ok(Interval::raw(rounding::sqrt(self.lo).0, rounding::sqrt(self.hi).1))
    }

    pub fn checked_add(&self, other: &Interval) -> Result<Interval> {
        (*self + *other).finite()
    }

    pub fn checked_sub(&self, other: &Interval) -> Result<Interval> {
        (*self - *other).finite()
    }

    pub fn checked_mul(&self, other: &Interval) -> Result<Interval> {
        (*self * *other).finite()
    }

    pub fn checked_div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, b) = (self, other);
        let cands = [
            rounding::div(a.lo, b.lo),
            rounding::div(a.lo, b.hi),
            rounding::div(a.hi, b.lo),
            rounding::div(a.hi, b.hi),
        ];
        Interval::from_candidates(&cands).finite()
    }

    fn from_candidates(c: &[(f64, f64)]) -> Interval {
        let lo = c.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = c.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        Interval::raw(lo, hi)
    }

    /// Bounds formatted with 17 significant digits.
    pub fn to_decimal(&self) -> (String, String) {
        (format!("{:.16e}", self.lo), format!("{:.16e}", self.hi))
    }
}

impl Default for Interval {
    fn default() -> Self {
        Interval::ZERO
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.16e}, {:.16e}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::raw(
            rounding::add(self.lo, rhs.lo).0,
            rounding::add(self.hi, rhs.hi).1,
        )
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::raw(
            rounding::sub(self.lo, rhs.hi).0,
            rounding::sub(self.hi, rhs.lo).1,
        )
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b) = (self, rhs);
        if a.is_point() && b.is_point() {
            let (lo, hi) = rounding::mul(a.lo, b.lo);
            return Interval::raw(lo, hi);
        }
        let cands = [
            rounding::mul(a.lo, b.lo),
            rounding::mul(a.lo, b.hi),
            rounding::mul(a.hi, b.lo),
            rounding::mul(a.hi, b.hi),
        ];
        Interval::from_candidates(&cands)
    }
}

/// Division by an interval containing zero yields the whole real line.
impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        self.checked_div(&rhs)
            .unwrap_or(Interval::raw(f64::NEG_INFINITY, f64::INFINITY))
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl Div<f64> for Interval {
    type Output = Interval;
    fn div(self, rhs: f64) -> Interval {
        self / Interval::point(rhs)
    }
}

impl Mul<Interval> for f64 {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        Interval::point(self) * rhs
    }
}

impl AddAssign for Interval {
    fn add_assign(&mut self, rhs: Interval) {
        *self = *self + rhs;
    }
}

impl SubAssign for Interval {
    fn sub_assign(&mut self, rhs: Interval) {
        *self = *self - rhs;
    }
}

impl MulAssign for Interval {
    fn mul_assign(&mut self, rhs: Interval) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |acc, x| acc + x)
    }
}

#[derive(Serialize, Deserialize)]
struct DecimalBounds {
    lo: String,
    hi: String,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (lo, hi) = self.to_decimal();
        DecimalBounds { lo, hi }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let b = DecimalBounds::deserialize(d)?;
        let lo: f64 = b.lo.parse().map_err(D::Error::custom)?;
        let hi: f64 = b.hi.parse().map_err(D::Error::custom)?;
        Interval::new(lo, hi).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn construction_rejects_bad_bounds() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn exact_integer_sums_stay_exact() {
        assert_eq!(iv(1.0, 2.0) + iv(3.0, 4.0), iv(4.0, 6.0));
        let x = iv(-0.3, 0.7);
        assert_eq!(Interval::ZERO + x, x);
    }

    #[test]
    fn product_takes_endpoint_extrema() {
        assert_eq!(iv(-1.0, 2.0) * iv(3.0, 4.0), iv(-4.0, 8.0));
    }

    #[test]
    fn sqrt_of_perfect_squares() {
        assert_eq!(iv(4.0, 9.0).sqrt().unwrap(), iv(2.0, 3.0));
        assert!(iv(-1.0, 4.0).sqrt().is_err());
    }

    #[test]
    fn division_by_zero_containing_interval_fails() {
        assert_eq!(iv(1.0, 2.0).checked_div(&iv(-1.0, 1.0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn overflow_is_reported() {
        let big = Interval::point(f64::MAX);
        assert_eq!(big.checked_add(&big), Err(Error::Overflow));
        assert_eq!(big.checked_mul(&Interval::point(2.0)), Err(Error::Overflow));
    }

    #[test]
    fn pi_constant_brackets_pi() {
        assert_eq!(Interval::PI.hi(), std::f64::consts::PI.next_up());
        assert_eq!(Interval::HALF_PI.hi(), std::f64::consts::FRAC_PI_2.next_up());
        assert_eq!(Interval::QUARTER_PI.hi(), std::f64::consts::FRAC_PI_4.next_up());
    }

    #[test]
    fn sqr_is_tight_across_zero() {
        assert_eq!(iv(-2.0, 1.0).sqr(), iv(0.0, 4.0));
        assert_eq!(iv(-3.0, -2.0).powi(3), iv(-27.0, -8.0));
        assert_eq!(iv(-3.0, 2.0).powi(4), iv(0.0, 81.0));
    }

    #[test]
    fn split_covers_interval() {
        let x = iv(-1.0, 1.0);
        let parts = x.split(4);
        assert_eq!(parts.len(), 4);
        assert_eq!(parts[0].lo(), -1.0);
        assert_eq!(parts[3].hi(), 1.0);
        for w in parts.windows(2) {
            assert_eq!(w[0].hi(), w[1].lo());
        }
        assert_eq!(Interval::point(1.0).split(3).len(), 1);
    }

    #[test]
    fn serde_round_trip_is_bit_exact() {
        let x = Interval::point(0.1) + Interval::point(0.2);
        let s = serde_json::to_string(&x).unwrap();
        let y: Interval = serde_json::from_str(&s).unwrap();
        assert_eq!(x.lo().to_bits(), y.lo().to_bits());
        assert_eq!(x.hi().to_bits(), y.hi().to_bits());
    }
}

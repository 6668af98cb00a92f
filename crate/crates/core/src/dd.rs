//! Double-double arithmetic: a value is the unevaluated sum `hi + lo` of two
//! `f64`s with `|lo| <= ulp(hi)/2`, giving roughly 32 significant digits.
//!
//! Built from the classical error-free transformations (two-sum, FMA-based
//! two-product). Only the operations the simulation kernels need are
//! provided.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Requires |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (s, e) = quick_two_sum(hi, lo);
        Self { hi: s, lo: e }
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Self::renorm(s1, s2 + t2)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        Self::renorm(p1, p2 + self.hi * rhs.lo + self.lo * rhs.hi)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r1 = self - rhs * Self::from(q1);
        let q2 = r1.hi / rhs.hi;
        let r2 = r1 - rhs * Self::from(q2);
        let q3 = r2.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Self::renorm(s, e + q3)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Scalar for DoubleDouble {
    const ZERO: Self = Self::new(0.0, 0.0);
    const ONE: Self = Self::new(1.0, 0.0);
    /// 2^-104, the roundoff of a renormalized double-double.
    const EPSILON: Self = Self::new(4.930380657631324e-32, 0.0);
    const HALF_PI: Self = Self::new(std::f64::consts::FRAC_PI_2, 6.123233995736766e-17);

    #[inline]
    fn from_f64(x: f64) -> Self {
        Self::from(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }
    fn sqrt(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Self::ZERO;
        }
        // f64 seed, one Newton step carried out in double-double.
        let seed = Self::from(self.hi.sqrt());
        let half = Self::from(0.5);
        (seed + self / seed) * half
    }

    /// Quadrant reduction against HALF_PI, then Taylor series on
    /// [-pi/4, pi/4]. The angles used here never exceed a few radians, so a
    /// small reduction is exact enough for full double-double accuracy.
    fn sin_cos(self) -> (Self, Self) {
        let k = (self.to_f64() / std::f64::consts::FRAC_PI_2).round();
        let y = self - Self::HALF_PI * Self::from(k);
        let (s, c) = sin_cos_reduced(y);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    /// f64 seed plus one correction step: the residual angle d satisfies
    /// sin(d) = (y cos t - x sin t) / hypot(x, y), and d is small enough
    /// that sin(d) = d to beyond double-double accuracy.
    fn atan2(self, other: Self) -> Self {
        let (y, x) = (self, other);
        if y.hi == 0.0 && y.lo == 0.0 && x.hi == 0.0 && x.lo == 0.0 {
            return Self::ZERO;
        }
        let seed = Self::from(y.to_f64().atan2(x.to_f64()));
        let (s, c) = seed.sin_cos();
        seed + (y * c - x * s) / x.hypot(y)
    }

    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt()
    }
}

/// sin and cos on [-pi/4, pi/4] by Taylor series; terms fall below 2^-104
/// well before the iteration cap.
fn sin_cos_reduced(y: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let y2 = y * y;
    let mut sin = y;
    let mut term = y;
    for k in 1..=16 {
        term = term * y2 / DoubleDouble::from((2 * k) as f64 * (2 * k + 1) as f64);
        sin = if k % 2 == 1 { sin - term } else { sin + term };
    }
    let mut cos = DoubleDouble::ONE;
    let mut cterm = DoubleDouble::ONE;
    for k in 1..=16 {
        cterm = cterm * y2 / DoubleDouble::from((2 * k - 1) as f64 * (2 * k) as f64);
        cos = if k % 2 == 1 { cos - cterm } else { cos + cterm };
    }
    (sin, cos)
}

//! Double-double arithmetic and the scalar abstraction the series kernels are
//! generic over.
//!
//! A [`DoubleDouble`] is an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 106 bits of significand. The error-free transforms below
//! assume round-to-nearest and a fused multiply-add, both guaranteed by Rust's
//! `f64`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

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

#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const LN_2: Self = Self {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };
    pub const E: Self = Self {
        hi: std::f64::consts::E,
        lo: 1.445_646_891_729_250_2e-16,
    };

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact square of an `f64`.
    #[inline]
    pub fn square_of(x: f64) -> Self {
        let (hi, lo) = two_prod(x, x);
        Self { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = self.lo.mul_add(b, e);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Self { hi, lo }
    }

    #[inline]
    fn scale_pow2(self, k: i32) -> Self {
        // powi of two is exact while the result stays normal
        let mut out = self;
        let mut k = k;
        while k != 0 {
            let step = k.clamp(-1000, 1000);
            let f = 2f64.powi(step);
            out = Self {
                hi: out.hi * f,
                lo: out.lo * f,
            };
            k -= step;
        }
        out
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.7 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Self::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Self::ONE;
        }
        let k = (self.hi / Self::LN_2.hi).round();
        let r = self - Self::LN_2 * Self::from_f64(k);
        // exp(r) = (1 + s)^(2^10) with s = exp(r / 2^10) - 1
        let rs = r.mul_f64(1.0 / 1024.0);
        let mut term = rs;
        let mut s = rs;
        for j in 2..=12u32 {
            term = term * rs / Self::from_f64(f64::from(j));
            s += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..10 {
            s = s.mul_f64(2.0) + s * s;
        }
        (s + Self::ONE).scale_pow2(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(f64::NAN);
        }
        // one Newton step on exp(y) = x doubles the f64 starting accuracy
        let y = Self::from_f64(self.hi.ln());
        y + self * (-y).exp() - Self::ONE
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }.add_f64(q3)
    }
}

impl AddAssign for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for DoubleDouble {
    #[inline]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for DoubleDouble {
    #[inline]
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

/// Arithmetic the hypergeometric kernels need, implemented for plain `f64`
/// and for [`DoubleDouble`].
pub trait Scalar:
    Copy
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// Relative rounding error of one arithmetic operation.
    const UNIT_ROUNDOFF: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    /// `x * x` for an `f64` argument, exact in double-double.
    fn square_of(x: f64) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn abs_f64(self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for f64 {
    const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn square_of(x: f64) -> Self {
        x * x
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
}

impl Scalar for DoubleDouble {
    // 2^-104, with a little slack for the non-IEEE dd operations
    const UNIT_ROUNDOFF: f64 = 4.0 * 4.930_380_657_631_324e-32;

    #[inline]
    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    #[inline]
    fn square_of(x: f64) -> Self {
        DoubleDouble::square_of(x)
    }
    #[inline]
    fn exp(self) -> Self {
        DoubleDouble::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        DoubleDouble::ln(self)
    }
}

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: DoubleDouble, b: DoubleDouble) -> f64 {
        ((a - b).to_f64() / b.to_f64()).abs()
    }

    #[test]
    fn exp_of_one_is_e() {
        let e = DoubleDouble::ONE.exp();
        assert!(rel(e, DoubleDouble::E) < 1e-30, "{e:?}");
    }

    #[test]
    fn exp_ln_round_trip() {
        for &x in &[0.3, 1.7, 12.5, 41.0, 300.5, 620.0] {
            let a = DoubleDouble::from_f64(-x);
            let back = a.exp().ln();
            assert!(
                (back - a).to_f64().abs() < 1e-28 * x.max(1.0),
                "{x}: {back:?}"
            );
            let one = a.exp() * (-a).exp();
            assert!((one - DoubleDouble::ONE).to_f64().abs() < 1e-29);
        }
    }

    #[test]
    fn ln_two() {
        let v = DoubleDouble::from_f64(2.0).ln();
        assert!(rel(v, DoubleDouble::LN_2) < 1e-31);
    }

    #[test]
    fn division_recovers_thirds() {
        let third = DoubleDouble::ONE / DoubleDouble::from_f64(3.0);
        let back = third * DoubleDouble::from_f64(3.0);
        assert!((back - DoubleDouble::ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn compensated_sum_cancels() {
        let v = compensated_sum([1e16, 1.0, -1e16, 1.0]);
        assert_eq!(v, 2.0);
    }
}

//! Exact number types usable by the simplex.
//!
//! [`SmallRat`] keeps numerator and denominator in `i64` and reports
//! overflow instead of wrapping, so the solver can retry the whole run on
//! arbitrary-precision rationals.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

pub trait Scalar: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Option<Self>;
    fn to_rational(&self) -> Rational;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> Ordering;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
    fn cmp_to(&self, o: &Self) -> Ordering;

    fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }
    fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }
}

/// Reduced fraction with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallRat {
    num: i64,
    den: i64,
}

impl SmallRat {
    pub fn new(num: i64, den: i64) -> Option<Self> {
        Self::reduce(num as i128, den as i128)
    }

    #[inline]
    fn reduce(mut num: i128, mut den: i128) -> Option<Self> {
        if den == 0 {
            return None;
        }
        if den < 0 {
            num = -num;
            den = -den;
        }
        if num == 0 {
            return Some(SmallRat { num: 0, den: 1 });
        }
        if den != 1 {
            let (a, b) = (num.unsigned_abs(), den as u128);
            let g = if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
                (a as u64).gcd(&(b as u64)) as i128
            } else {
                a.gcd(&b) as i128
            };
            if g > 1 {
                num /= g;
                den /= g;
            }
        }
        // i64::MIN is excluded so that negation never overflows
        if num.unsigned_abs() > i64::MAX as u128 || den > i64::MAX as i128 {
            return None;
        }
        Some(SmallRat {
            num: num as i64,
            den: den as i64,
        })
    }
}

impl Scalar for SmallRat {
    fn zero() -> Self {
        SmallRat { num: 0, den: 1 }
    }
    fn one() -> Self {
        SmallRat { num: 1, den: 1 }
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Self::reduce(r.numer().to_i64()? as i128, r.denom().to_i64()? as i128)
    }
    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.num == 0
    }
    #[inline]
    fn signum(&self) -> Ordering {
        self.num.cmp(&0)
    }
    #[inline]
    fn add(&self, o: &Self) -> Option<Self> {
        if self.den == 1 && o.den == 1 {
            return self
                .num
                .checked_add(o.num)
                .filter(|&num| num != i64::MIN)
                .map(|num| SmallRat { num, den: 1 });
        }
        if self.den == o.den {
            return Self::reduce(self.num as i128 + o.num as i128, self.den as i128);
        }
        let n = self.num as i128 * o.den as i128 + o.num as i128 * self.den as i128;
        Self::reduce(n, self.den as i128 * o.den as i128)
    }
    #[inline]
    fn sub(&self, o: &Self) -> Option<Self> {
        self.add(&o.neg())
    }
    #[inline]
    fn mul(&self, o: &Self) -> Option<Self> {
        if self.den == 1 && o.den == 1 {
            return self
                .num
                .checked_mul(o.num)
                .filter(|&num| num != i64::MIN)
                .map(|num| SmallRat { num, den: 1 });
        }
        Self::reduce(
            self.num as i128 * o.num as i128,
            self.den as i128 * o.den as i128,
        )
    }
    #[inline]
    fn div(&self, o: &Self) -> Option<Self> {
        Self::reduce(
            self.num as i128 * o.den as i128,
            self.den as i128 * o.num as i128,
        )
    }
    #[inline]
    fn neg(&self) -> Self {
        SmallRat {
            num: -self.num,
            den: self.den,
        }
    }
    #[inline]
    fn cmp_to(&self, o: &Self) -> Ordering {
        (self.num as i128 * o.den as i128).cmp(&(o.num as i128 * self.den as i128))
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(r.clone())
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> Ordering {
        if Signed::is_positive(self) {
            Ordering::Greater
        } else if Signed::is_negative(self) {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
    fn neg(&self) -> Self {
        -self
    }
    fn cmp_to(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
}

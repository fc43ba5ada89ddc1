//! Scalar abstraction shared by exact and floating evaluation.
//!
//! Symbolic objects (polynomials, rational functions, hypergeometric terms)
//! evaluate into any [`Scalar`]: `f64`, the fixed-precision binary float
//! [`BigFloat`], or exact [`Rational`]. Code that needs square roots or
//! ordering asks for [`Real`].

use std::cmp::Ordering;
use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use dashu_base::{Abs, SquareRoot};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::Rational;

pub trait Scalar: Clone + Debug + Num + Neg<Output = Self> {
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(i: i64) -> Self;

    /// Nearest `f64`, for tolerance bookkeeping.
    fn approx_f64(&self) -> f64;

    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn ipow(&self, e: i32) -> Self {
        let mut base = if e < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn abs_f64(&self) -> f64 {
        self.approx_f64().abs()
    }
}

/// Ordered floating scalars with a square root.
pub trait Real: Scalar + PartialOrd {
    fn sqrt(&self) -> Self;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn from_f64(x: f64) -> Self;

    /// Unit roundoff of the type.
    fn epsilon() -> f64;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn from_i64(i: i64) -> Self {
        i as f64
    }

    fn approx_f64(&self) -> f64 {
        *self
    }
}

impl Real for f64 {
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn epsilon() -> f64 {
        f64::EPSILON
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_i64(i: i64) -> Self {
        Rational::from_integer(BigInt::from(i))
    }

    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn abs_f64(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

type Fb = FBig<HalfEven, 2>;

/// Binary floating point with `BITS` bits of significand, round half even.
///
/// Every value carries exactly `BITS` bits of precision, so the result of
/// each operation is correctly rounded to `BITS` bits.
#[derive(Clone, PartialEq)]
pub struct BigFloat<const BITS: usize>(Fb);

/// The default working precision of the numeric layer.
pub type Float128 = BigFloat<128>;

impl<const BITS: usize> BigFloat<BITS> {
    fn wrap(x: Fb) -> Self {
        BigFloat(x.with_precision(BITS).value())
    }

    fn from_bigint(n: &BigInt) -> Self {
        let ib = IBig::from_le_bytes(&n.to_signed_bytes_le());
        Self::wrap(Fb::from(ib))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
}

impl<const BITS: usize> Debug for BigFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl<const BITS: usize> fmt::Display for BigFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl<const BITS: usize> PartialOrd for BigFloat<BITS> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! bigfloat_op {
    ($tr:ident, $f:ident) => {
        impl<const BITS: usize> $tr for BigFloat<BITS> {
            type Output = Self;
            fn $f(self, rhs: Self) -> Self {
                BigFloat($tr::$f(self.0, rhs.0))
            }
        }
        impl<'a, const BITS: usize> $tr<&'a BigFloat<BITS>> for &'a BigFloat<BITS> {
            type Output = BigFloat<BITS>;
            fn $f(self, rhs: Self) -> BigFloat<BITS> {
                BigFloat($tr::$f(&self.0, &rhs.0))
            }
        }
    };
}
bigfloat_op!(Add, add);
bigfloat_op!(Sub, sub);
bigfloat_op!(Mul, mul);
bigfloat_op!(Div, div);

impl<const BITS: usize> Rem for BigFloat<BITS> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        let q = Self::wrap((&self / &rhs).0.trunc());
        self - q * rhs
    }
}

impl<const BITS: usize> Neg for BigFloat<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        BigFloat(-self.0)
    }
}

impl<const BITS: usize> Zero for BigFloat<BITS> {
    fn zero() -> Self {
        Self::wrap(Fb::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.0.repr().is_zero()
    }
}

impl<const BITS: usize> One for BigFloat<BITS> {
    fn one() -> Self {
        Self::wrap(Fb::ONE)
    }
}

impl<const BITS: usize> Num for BigFloat<BITS> {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        if radix != 10 {
            return Err(format!("unsupported radix {radix}"));
        }
        s.parse::<Fb>().map(Self::wrap).map_err(|e| e.to_string())
    }
}

impl<const BITS: usize> Scalar for BigFloat<BITS> {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        Self::from_bigint(q.numer()) / Self::from_bigint(q.denom())
    }

    fn from_i64(i: i64) -> Self {
        Self::wrap(Fb::from(i))
    }

    fn approx_f64(&self) -> f64 {
        self.to_f64()
    }
}

impl<const BITS: usize> Real for BigFloat<BITS> {
    fn sqrt(&self) -> Self {
        BigFloat(self.0.sqrt())
    }

    fn abs(&self) -> Self {
        BigFloat(self.0.clone().abs())
    }

    fn from_f64(x: f64) -> Self {
        Self::wrap(Fb::try_from(x).expect("finite f64"))
    }

    fn epsilon() -> f64 {
        2f64.powi(1 - BITS as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigfloat_keeps_extra_bits() {
        let third = Rational::new(BigInt::from(1), BigInt::from(3));
        let t = Float128::from_rational(&third);
        let back = t * Float128::from_i64(3) - Float128::one();
        assert!(back.abs().to_f64() < 1e-37, "{back:?}");
        let two = Float128::from_i64(2);
        let r = two.sqrt();
        assert!((r.clone() * r - two).abs().to_f64() < 1e-37);
    }

    #[test]
    fn huge_rationals_convert() {
        let big: BigInt = num_traits::pow(BigInt::from(10), 60) + 7;
        let q = Rational::new(big.clone(), big * 3);
        let t = Float128::from_rational(&q);
        let third = Float128::from_rational(&Rational::new(1.into(), 3.into()));
        assert!((t - third).abs().to_f64() < 1e-37);
        let neg = Float128::from_rational(&Rational::from_integer(BigInt::from(-5)));
        assert_eq!(neg.to_f64(), -5.0);
    }

    #[test]
    fn ipow_handles_negative_exponents() {
        let two = Rational::from_i64(2);
        assert_eq!(two.ipow(-3), Rational::new(BigInt::from(1), BigInt::from(8)));
        assert_eq!(3.0f64.ipow(4), 81.0);
    }
}

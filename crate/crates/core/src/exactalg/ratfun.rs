//! Reduced rational functions with a canonical denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::Poly;
use super::var::Var;
use crate::scalar::Scalar;
use crate::Rational;

/// `num / den` with `gcd(num, den) = 1` and `den` monic under the global
/// monomial order. Zero is stored as `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Reduce `num / den`. Panics if `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> RatFun {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFun::zero();
        }
        if let Some(c) = den.as_constant() {
            return RatFun {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = den.leading_coeff().recip();
        RatFun {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn try_new(num: Poly, den: Poly) -> Option<RatFun> {
        if den.is_zero() {
            None
        } else {
            Some(RatFun::new(num, den))
        }
    }

    pub fn zero() -> RatFun {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFun {
        RatFun::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> RatFun {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> RatFun {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn int(c: i64) -> RatFun {
        RatFun::from_poly(Poly::int(c))
    }

    pub fn var(v: Var) -> RatFun {
        RatFun::from_poly(Poly::var(v))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_poly() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn contains(&self, v: Var) -> bool {
        self.num.contains(v) || self.den.contains(v)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.num.vars();
        for x in self.den.vars() {
            if !v.contains(&x) {
                v.push(x);
            }
        }
        v.sort();
        v
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> RatFun {
        assert!(!self.is_zero(), "inverse of the zero rational function");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> RatFun {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let e = e.unsigned_abs();
        RatFun {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
    }

    pub fn scale(&self, c: &Rational) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Substitute `v := value` where `value` is itself a rational function.
    pub fn subst(&self, v: Var, value: &RatFun) -> RatFun {
        if !self.contains(v) {
            return self.clone();
        }
        let (n, nd) = subst_homogeneous(&self.num, v, value);
        let (d, dd) = subst_homogeneous(&self.den, v, value);
        // n / q^nd divided by d / q^dd.
        let q = &value.den;
        let (n, d) = match nd.cmp(&dd) {
            std::cmp::Ordering::Equal => (n, d),
            std::cmp::Ordering::Greater => (n, &d * &q.pow(nd - dd)),
            std::cmp::Ordering::Less => (&n * &q.pow(dd - nd), d),
        };
        RatFun::new(n, d)
    }

    pub fn subst_poly(&self, v: Var, value: &Poly) -> RatFun {
        if !self.contains(v) {
            return self.clone();
        }
        RatFun::new(self.num.subst(v, value), self.den.subst(v, value))
    }

    pub fn shift(&self, v: Var, offset: &Poly) -> RatFun {
        if offset.is_zero() || !self.contains(v) {
            return self.clone();
        }
        // A shift is an automorphism: the result stays reduced.
        RatFun::normalize_den(self.num.shift(v, offset), self.den.shift(v, offset))
    }

    pub fn shift_int(&self, v: Var, offset: i64) -> RatFun {
        self.shift(v, &Poly::int(offset))
    }

    fn normalize_den(num: Poly, den: Poly) -> RatFun {
        let lc = den.leading_coeff().recip();
        RatFun {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    /// Evaluate with each variable mapped to a scalar. The caller must avoid
    /// poles.
    pub fn eval<S: Scalar>(&self, value: &impl Fn(Var) -> S) -> S {
        self.num.eval(value) / self.den.eval(value)
    }

    /// Exact evaluation returning `None` at a pole.
    pub fn eval_exact(&self, value: &impl Fn(Var) -> Rational) -> Option<Rational> {
        let d: Rational = self.den.eval(value);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(value) / d)
    }

    /// Numerator and denominator degree in `v`.
    pub fn deg(&self, v: Var) -> (u32, u32) {
        (self.num.deg(v), self.den.deg(v))
    }

    /// Sort key used to prefer simple pivots.
    pub fn complexity(&self) -> usize {
        self.num.len() + self.den.len()
    }
}

/// Returns `(P, d)` with `p(num/den) = P / den^d`, `d = deg_v p`.
fn subst_homogeneous(p: &Poly, v: Var, value: &RatFun) -> (Poly, u32) {
    let coeffs = p.coeffs_in(v);
    if coeffs.len() <= 1 {
        return (p.clone(), 0);
    }
    let d = coeffs.len() - 1;
    let mut acc = Poly::zero();
    // Horner in the homogeneous form: acc = acc*num + c_i*den^(d-i).
    let mut den_pow = Poly::one();
    let mut den_pows = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        den_pows.push(den_pow.clone());
        den_pow = &den_pow * &value.den;
    }
    for (i, c) in coeffs.iter().enumerate().rev() {
        acc = &(&acc * &value.num) + &(c * &den_pows[d - i]);
    }
    // Leading step multiplies by num without a matching den factor, so the
    // denominator exponent is d.
    (acc, d as u32)
}

impl PartialOrd for RatFun {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order, used only to key ordered collections.
impl Ord for RatFun {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.num, &self.den).cmp(&(&other.num, &other.den))
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> RatFun {
        RatFun::from_poly(p)
    }
}

impl From<Var> for RatFun {
    fn from(v: Var) -> RatFun {
        RatFun::var(v)
    }
}

impl From<i64> for RatFun {
    fn from(c: i64) -> RatFun {
        RatFun::int(c)
    }
}

impl From<Rational> for RatFun {
    fn from(c: Rational) -> RatFun {
        RatFun::constant(c)
    }
}

fn add_impl(a: &RatFun, b: &RatFun, negate: bool) -> RatFun {
    let bn = if negate { -&b.num } else { b.num.clone() };
    if a.is_zero() {
        return RatFun {
            num: bn,
            den: b.den.clone(),
        };
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        if a.den.is_one() {
            return RatFun::from_poly(&a.num + &bn);
        }
        return RatFun::new(&a.num + &bn, a.den.clone());
    }
    if a.den.is_one() {
        let num = &(&a.num * &b.den) + &bn;
        return RatFun::new(num, b.den.clone());
    }
    if b.den.is_one() {
        let num = &a.num + &(&bn * &a.den);
        return RatFun::new(num, a.den.clone());
    }
    let g = gcd(&a.den, &b.den);
    let ad = a.den.div_exact(&g).unwrap();
    let bd = b.den.div_exact(&g).unwrap();
    let num = &(&a.num * &bd) + &(&bn * &ad);
    RatFun::new(num, &(&ad * &bd) * &g)
}

fn mul_impl(a: &RatFun, b: &RatFun) -> RatFun {
    if a.is_zero() || b.is_zero() {
        return RatFun::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return RatFun::from_poly(&a.num * &b.num);
    }
    // Cross-cancel: gcd(a.num, b.den) and gcd(b.num, a.den).
    let g1 = gcd(&a.num, &b.den);
    let g2 = gcd(&b.num, &a.den);
    let an = a.num.div_exact(&g1).unwrap();
    let bd = b.den.div_exact(&g1).unwrap();
    let bn = b.num.div_exact(&g2).unwrap();
    let ad = a.den.div_exact(&g2).unwrap();
    RatFun::normalize_den(&an * &bn, &ad * &bd)
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        add_impl(self, rhs, false)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        add_impl(self, rhs, true)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        mul_impl(self, rhs)
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        mul_impl(self, &rhs.inv())
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RatFun {
            type Output = RatFun;
            fn $f(self, rhs: RatFun) -> RatFun {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RatFun> for RatFun {
            type Output = RatFun;
            fn $f(self, rhs: &RatFun) -> RatFun {
                (&self).$f(rhs)
            }
        }
        impl $tr<RatFun> for &RatFun {
            type Output = RatFun;
            fn $f(self, rhs: RatFun) -> RatFun {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if self.den.len() == 1 && self.den.leading_coeff().is_one() {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

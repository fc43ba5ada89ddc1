//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::var::{Var, MAX_VARS};
use crate::scalar::Scalar;
use crate::Rational;

/// Exponent vector indexed by [`Var::index`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial([u8; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn var(v: Var, e: u32) -> Monomial {
        let mut m = Monomial::ONE;
        m.0[v.index()] = u8::try_from(e).expect("exponent overflow");
        m
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()] as u32
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = [0u8; MAX_VARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].checked_add(other.0[i]).expect("exponent overflow");
        }
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut out = [0u8; MAX_VARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = other.0[i] - self.0[i];
        }
        Monomial(out)
    }

    pub fn meet(&self, other: &Monomial) -> Monomial {
        let mut out = [0u8; MAX_VARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].min(other.0[i]);
        }
        Monomial(out)
    }

    pub fn with_exp(&self, v: Var, e: u32) -> Monomial {
        let mut m = *self;
        m.0[v.index()] = u8::try_from(e).expect("exponent overflow");
        m
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Var::from_index(i), e as u32))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic; lower variable index is more significant.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .vars()
            .map(|(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// A polynomial with rational coefficients, stored as terms sorted by
/// descending monomial. Zero coefficients are never stored, so equal
/// polynomials have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::ONE, c)],
            }
        }
    }

    pub fn int(c: i64) -> Poly {
        Poly::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Poly {
        Poly::monomial(Monomial::var(v, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Build from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Poly {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in it {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(e) => *e += c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Poly::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, Rational>) -> Poly {
        let mut terms: Vec<(Monomial, Rational)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Degree in `v`; zero for the zero polynomial.
    pub fn deg(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    /// Variables that occur, in global order.
    pub fn vars(&self) -> Vec<Var> {
        let mut seen = [false; MAX_VARS];
        for (m, _) in &self.terms {
            for (v, _) in m.vars() {
                seen[v.index()] = true;
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| Var::from_index(i))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficients with respect to `v`, indexed by degree.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = self.deg(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            buckets[e].push((m.with_exp(v, 0), c.clone()));
        }
        // Removing one variable keeps the relative order within a bucket
        // only for lex; re-sort to be safe.
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                Poly { terms: t }
            })
            .collect()
    }

    pub fn from_coeffs(v: Var, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            let m = Monomial::var(v, i as u32);
            for (t, x) in &c.terms {
                terms.push((t.mul(&m), x.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    /// Leading coefficient with respect to `v`.
    pub fn lc_in(&self, v: Var) -> Poly {
        self.coeffs_in(v).pop().unwrap_or_else(Poly::zero)
    }

    /// Coefficient of `v^e`.
    pub fn coeff_of(&self, v: Var, e: u32) -> Poly {
        let terms: Vec<(Monomial, Rational)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(v) == e)
            .map(|(m, c)| (m.with_exp(v, 0), c.clone()))
            .collect();
        let mut p = Poly { terms };
        p.terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        p
    }

    /// Substitute `v := value`.
    pub fn subst(&self, v: Var, value: &Poly) -> Poly {
        if !self.contains(v) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(v);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// `v := v + offset`.
    pub fn shift(&self, v: Var, offset: &Poly) -> Poly {
        if offset.is_zero() {
            return self.clone();
        }
        self.subst(v, &(&Poly::var(v) + offset))
    }

    pub fn shift_int(&self, v: Var, offset: i64) -> Poly {
        self.shift(v, &Poly::int(offset))
    }

    pub fn eval_at(&self, v: Var, value: &Rational) -> Poly {
        self.subst(v, &Poly::constant(value.clone()))
    }

    /// Evaluate with every variable mapped to a scalar.
    pub fn eval<S: Scalar>(&self, value: &impl Fn(Var) -> S) -> S {
        let mut cache: Vec<Option<S>> = vec![None; MAX_VARS];
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = S::from_rational(c);
            for (v, e) in m.vars() {
                let slot = &mut cache[v.index()];
                if slot.is_none() {
                    *slot = Some(value(v));
                }
                t = t * slot.as_ref().unwrap().ipow(e as i32);
            }
            acc = acc + t;
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Poly {
        Poly::from_terms(self.terms.iter().filter(|(m, _)| m.exp(v) > 0).map(|(m, c)| {
            let e = m.exp(v);
            (m.with_exp(v, e - 1), c * Rational::from_integer(BigInt::from(e)))
        }))
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.terms[0].clone();
        let dc_inv = dc.recip();
        let mut rem: HashMap<Monomial, Rational> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        // Track the leading monomial of the remainder with a sorted key set.
        let mut keys: std::collections::BTreeSet<Monomial> = rem.keys().copied().collect();
        while let Some(&lead) = keys.iter().next_back() {
            let lc = rem.remove(&lead).unwrap();
            keys.remove(&lead);
            if !dm.divides(&lead) {
                return None;
            }
            let qm = dm.quotient_of(&lead);
            let qc = &lc * &dc_inv;
            for (m, c) in d.terms.iter().skip(1) {
                let mm = m.mul(&qm);
                let delta = c * &qc;
                match rem.get_mut(&mm) {
                    Some(x) => {
                        *x -= delta;
                        if x.is_zero() {
                            rem.remove(&mm);
                            keys.remove(&mm);
                        }
                    }
                    None => {
                        rem.insert(mm, -delta);
                        keys.insert(mm);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(Poly::from_terms(quot))
    }

    /// Pseudo-remainder of `self` by `d` with respect to `v`.
    pub fn prem(&self, d: &Poly, v: Var) -> Poly {
        let dd = d.deg(v);
        let lcd = d.lc_in(v);
        let mut r = self.clone();
        while !r.is_zero() && r.deg(v) >= dd {
            let e = r.deg(v) - dd;
            let lcr = r.lc_in(v);
            let t = &lcr * &Poly::monomial(Monomial::var(v, e), Rational::one());
            r = &(&r * &lcd) - &(&t * d);
        }
        r
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients.
    pub fn rational_content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        Rational::new(num, den)
    }

    /// Integer-coprime form with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.rational_content();
        if self.terms[0].1.is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Leading coefficient scaled to one.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.terms[0].1.recip())
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .iter()
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Minimum exponent of each variable across all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let mut m = match it.next() {
            Some((m, _)) => *m,
            None => return Monomial::ONE,
        };
        for (t, _) in it {
            m = m.meet(t);
        }
        m
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (m.quotient_of(t), c.clone()))
                .collect(),
        }
    }

    fn add_impl(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -t.1.clone() } else { t.1.clone() };
            out.push((t.0, c));
        }
        Poly { terms: out }
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(x) => *x += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly::from_map(acc)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, true)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_impl(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order, used only to key ordered collections.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.terms.cmp(&other.terms)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Poly {
        Poly::var(v)
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Poly {
        Poly::int(c)
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Poly {
        Poly::constant(c)
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m:?}")?;
            } else {
                write!(f, "{}*{m:?}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

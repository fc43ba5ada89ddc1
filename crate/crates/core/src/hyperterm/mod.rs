//! Hypergeometric terms as products of Pochhammer symbols, factorials,
//! powers and rational factors.
//!
//! Ratios are computed through a Gamma normal form: `(x)_c = Γ(x+c)/Γ(x)`,
//! `x! = Γ(x+1)`. Gamma arguments that differ by an integer form a class;
//! a quotient is rational exactly when every class has zero net exponent
//! and every power base has an integer net exponent.

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{ParseError, TermError};
use crate::exactalg::{Poly, RatFun, Var};
use crate::scalar::Scalar;
use crate::Rational;

pub use parse::{parse_poly, parse_ratfun, parse_term, parse_term_in};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    /// `(arg)_count`.
    Poch { arg: Poly, count: Poly },
    /// `arg!`.
    Fact { arg: Poly },
    /// `base^exponent`.
    Pow { base: RatFun, exponent: Poly },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub kind: AtomKind,
    pub power: i32,
}

/// A hypergeometric term in `sumvar`: `factor * prod atoms`.
///
/// The rational `factor` may depend on `sumvar`; it carries combinations
/// such as `(μ+aκ) + (μ−aκ)·n/(k−n)` that are not themselves products of
/// atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperTerm {
    atoms: Vec<Atom>,
    factor: RatFun,
    sumvar: Var,
}

impl HyperTerm {
    pub fn one(sumvar: Var) -> HyperTerm {
        HyperTerm {
            atoms: Vec::new(),
            factor: RatFun::one(),
            sumvar,
        }
    }

    pub fn from_factor(factor: RatFun, sumvar: Var) -> HyperTerm {
        HyperTerm {
            atoms: Vec::new(),
            factor,
            sumvar,
        }
    }

    /// Build and validate a term.
    pub fn new(atoms: Vec<Atom>, factor: RatFun, sumvar: Var) -> Result<HyperTerm, ParseError> {
        let t = HyperTerm {
            atoms,
            factor,
            sumvar,
        }
        .normalized();
        t.validate()?;
        Ok(t)
    }

    pub fn sumvar(&self) -> Var {
        self.sumvar
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn factor(&self) -> &RatFun {
        &self.factor
    }

    pub fn poch(arg: Poly, count: Poly, power: i32) -> Atom {
        Atom {
            kind: AtomKind::Poch { arg, count },
            power,
        }
    }

    pub fn fact(arg: Poly, power: i32) -> Atom {
        Atom {
            kind: AtomKind::Fact { arg },
            power,
        }
    }

    pub fn pow(base: RatFun, exponent: Poly, power: i32) -> Atom {
        Atom {
            kind: AtomKind::Pow { base, exponent },
            power,
        }
    }

    /// Every Gamma argument must be at most linear in `sumvar` with
    /// coefficient in {-1, 0, 1}; power exponents must have an integer
    /// `sumvar` coefficient.
    fn validate(&self) -> Result<(), ParseError> {
        let k = self.sumvar;
        let check_linear = |p: &Poly, what: &str| -> Result<(), ParseError> {
            if p.deg(k) > 1 {
                return Err(ParseError::Semantic(format!(
                    "{what} `{p}` is nonlinear in {k}"
                )));
            }
            let c = p.coeff_of(k, 1);
            if !c.is_zero() {
                let ok = c.as_constant().is_some_and(|x| x.abs().is_one());
                if !ok {
                    return Err(ParseError::Semantic(format!(
                        "{what} `{p}` must have {k}-coefficient 0 or ±1"
                    )));
                }
            }
            Ok(())
        };
        for a in &self.atoms {
            match &a.kind {
                AtomKind::Poch { arg, count } => {
                    check_linear(arg, "Pochhammer argument")?;
                    check_linear(count, "Pochhammer count")?;
                    check_linear(&(arg + count), "Pochhammer upper argument")?;
                }
                AtomKind::Fact { arg } => check_linear(arg, "factorial argument")?,
                AtomKind::Pow { base, exponent } => {
                    if base.contains(k) {
                        return Err(ParseError::Semantic(format!(
                            "power base `{base}` depends on {k}"
                        )));
                    }
                    if exponent.deg(k) > 1 {
                        return Err(ParseError::Semantic(format!(
                            "power exponent `{exponent}` is nonlinear in {k}"
                        )));
                    }
                    let c = exponent.coeff_of(k, 1);
                    if !c.is_zero() && !c.as_constant().is_some_and(|x| x.is_integer()) {
                        return Err(ParseError::Semantic(format!(
                            "power exponent `{exponent}` needs an integer {k}-coefficient"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Merge equal atoms, fold constant atoms into the factor, sort.
    fn normalized(mut self) -> HyperTerm {
        let mut merged: BTreeMap<AtomKind, i32> = BTreeMap::new();
        let mut factor = self.factor.clone();
        for a in self.atoms.drain(..) {
            match &a.kind {
                AtomKind::Poch { arg, count } => {
                    if let Some(c) = count.as_constant().filter(|c| c.is_integer()).and_then(|c| c.to_integer().to_i64()) {
                        if c.unsigned_abs() <= 64 {
                            factor = &factor * &poch_int(arg, c).pow(a.power);
                            continue;
                        }
                    }
                }
                AtomKind::Fact { arg } => {
                    if let Some(c) = arg.as_constant().filter(|c| c.is_integer()).and_then(|c| c.to_integer().to_i64()) {
                        if (0..=64).contains(&c) {
                            let f = poch_int(&Poly::one(), c);
                            factor = &factor * &f.pow(a.power);
                            continue;
                        }
                    }
                }
                AtomKind::Pow { base, exponent } => {
                    if let Some(e) = exponent.as_constant() {
                        if e.is_integer() {
                            let e = e.to_integer().to_i32().unwrap_or(0) * a.power;
                            factor = &factor * &base.pow(e);
                            continue;
                        }
                    }
                    if base.is_one() {
                        continue;
                    }
                }
            }
            *merged.entry(a.kind).or_insert(0) += a.power;
        }
        self.atoms = merged
            .into_iter()
            .filter(|(_, p)| *p != 0)
            .map(|(kind, power)| Atom { kind, power })
            .collect();
        self.factor = factor;
        self
    }

    pub fn mul(&self, other: &HyperTerm) -> HyperTerm {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        HyperTerm {
            atoms,
            factor: &self.factor * &other.factor,
            sumvar: self.sumvar,
        }
        .normalized()
    }

    pub fn scale(&self, c: &RatFun) -> HyperTerm {
        HyperTerm {
            atoms: self.atoms.clone(),
            factor: &self.factor * c,
            sumvar: self.sumvar,
        }
        .normalized()
    }

    /// `self^-1`.
    pub fn inv(&self) -> HyperTerm {
        HyperTerm {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    kind: a.kind.clone(),
                    power: -a.power,
                })
                .collect(),
            factor: self.factor.inv(),
            sumvar: self.sumvar,
        }
    }

    /// Substitute `v := v + offset` everywhere.
    pub fn shift(&self, v: Var, offset: &Poly) -> HyperTerm {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let kind = match &a.kind {
                    AtomKind::Poch { arg, count } => AtomKind::Poch {
                        arg: arg.shift(v, offset),
                        count: count.shift(v, offset),
                    },
                    AtomKind::Fact { arg } => AtomKind::Fact {
                        arg: arg.shift(v, offset),
                    },
                    AtomKind::Pow { base, exponent } => AtomKind::Pow {
                        base: base.shift(v, offset),
                        exponent: exponent.shift(v, offset),
                    },
                };
                Atom {
                    kind,
                    power: a.power,
                }
            })
            .collect();
        HyperTerm {
            atoms,
            factor: self.factor.shift(v, offset),
            sumvar: self.sumvar,
        }
        .normalized()
    }

    /// The term with `param := param + offset`.
    pub fn shift_param(&self, param: Var, offset: i64) -> HyperTerm {
        self.shift(param, &Poly::int(offset))
    }

    /// `t(k+1) / t(k)`.
    pub fn ratio(&self) -> RatFun {
        let shifted = self.shift(self.sumvar, &Poly::one());
        cross_ratio(&shifted, self).expect("a valid term has a rational ratio")
    }

    /// Substitute a polynomial for a variable everywhere.
    pub fn subst(&self, v: Var, value: &Poly) -> HyperTerm {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let kind = match &a.kind {
                    AtomKind::Poch { arg, count } => AtomKind::Poch {
                        arg: arg.subst(v, value),
                        count: count.subst(v, value),
                    },
                    AtomKind::Fact { arg } => AtomKind::Fact {
                        arg: arg.subst(v, value),
                    },
                    AtomKind::Pow { base, exponent } => AtomKind::Pow {
                        base: base.subst_poly(v, value),
                        exponent: exponent.subst(v, value),
                    },
                };
                Atom {
                    kind,
                    power: a.power,
                }
            })
            .collect();
        HyperTerm {
            atoms,
            factor: self.factor.subst_poly(v, value),
            sumvar: self.sumvar,
        }
        .normalized()
    }

    fn gamma_form(&self) -> GammaForm {
        let mut g = GammaForm {
            gammas: Vec::new(),
            powers: Vec::new(),
            factor: self.factor.clone(),
        };
        for a in &self.atoms {
            let e = a.power as i64;
            match &a.kind {
                AtomKind::Poch { arg, count } => {
                    g.gammas.push((arg + count, e));
                    g.gammas.push((arg.clone(), -e));
                }
                AtomKind::Fact { arg } => g.gammas.push((arg + &Poly::one(), e)),
                AtomKind::Pow { base, exponent } => {
                    g.powers.push((base.clone(), exponent.scale(&Rational::from_integer(e.into()))))
                }
            }
        }
        g
    }

    /// Upper Pochhammer symbols `(-v + c)_k` with `v` in `nonneg` and
    /// `c <= 0` force `t(k) = 0` for `k > v - c`. Returns the smallest such
    /// bound with a description.
    pub fn vanishing_bound(&self, nonneg: &[Var]) -> Option<(Poly, String)> {
        let k = self.sumvar;
        let mut best: Option<(Poly, String)> = None;
        for a in &self.atoms {
            let AtomKind::Poch { arg, count } = &a.kind else { continue };
            if a.power <= 0 || *count != Poly::var(k) {
                continue;
            }
            for &v in nonneg {
                let c = arg + &Poly::var(v);
                let Some(c) = c.as_constant() else { continue };
                if !c.is_integer() || c.is_positive() {
                    continue;
                }
                let bound = &Poly::var(v) - &Poly::constant(c);
                let why = format!("({arg})_{k} = 0 for {k} > {bound}");
                if best.as_ref().is_none_or(|(b, _)| bound.len() < b.len()) {
                    best = Some((bound, why));
                }
            }
        }
        best
    }

    /// Evaluate at an assignment. `ints` supplies the integer variables that
    /// appear in Pochhammer counts, factorial arguments and exponents; all
    /// other variables come from `vals`. Returns `None` at a pole or when a
    /// count is not an integer.
    pub fn eval<S: Scalar>(
        &self,
        ints: &dyn Fn(Var) -> Option<i64>,
        vals: &dyn Fn(Var) -> S,
    ) -> Option<S> {
        let value = |v: Var| match ints(v) {
            Some(i) => S::from_i64(i),
            None => vals(v),
        };
        let int_of = |p: &Poly| -> Option<i64> {
            let r: Rational = p.eval(&|v| Rational::from_integer(ints(v).unwrap_or(i64::MIN).into()));
            if p.vars().iter().any(|&v| ints(v).is_none()) || !r.is_integer() {
                return None;
            }
            r.to_integer().to_i64()
        };
        let den = self.factor.denom().eval(&value);
        if den.is_zero() {
            return None;
        }
        let mut acc = self.factor.numer().eval(&value) / den;
        for a in &self.atoms {
            let v = match &a.kind {
                AtomKind::Poch { arg, count } => {
                    let c = int_of(count)?;
                    let x = arg.eval(&value);
                    poch_value(&x, c)?
                }
                AtomKind::Fact { arg } => {
                    let m = int_of(arg)?;
                    if m < 0 {
                        return None;
                    }
                    poch_value(&S::one(), m)?
                }
                AtomKind::Pow { base, exponent } => {
                    let e = int_of(exponent)?;
                    let b = base.eval(&value);
                    if e < 0 && b.is_zero() {
                        return None;
                    }
                    b.ipow(e as i32)
                }
            };
            if a.power < 0 && v.is_zero() {
                return None;
            }
            acc = acc * v.ipow(a.power);
        }
        Some(acc)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn poch_value<S: Scalar>(x: &S, c: i64) -> Option<S> {
    let mut acc = S::one();
    if c >= 0 {
        for i in 0..c {
            acc = acc * (x.clone() + S::from_i64(i));
        }
        Some(acc)
    } else {
        for i in 1..=(-c) {
            let f = x.clone() - S::from_i64(i);
            if f.is_zero() {
                return None;
            }
            acc = acc * f;
        }
        Some(S::one() / acc)
    }
}

/// `(arg)_c` for an integer `c`, as a rational function.
fn poch_int(arg: &Poly, c: i64) -> RatFun {
    let mut num = Poly::one();
    let mut den = Poly::one();
    if c >= 0 {
        for i in 0..c {
            num = &num * &(arg + &Poly::int(i));
        }
    } else {
        for i in 1..=(-c) {
            den = &den * &(arg - &Poly::int(i));
        }
    }
    RatFun::new(num, den)
}

struct GammaForm {
    gammas: Vec<(Poly, i64)>,
    powers: Vec<(RatFun, Poly)>,
    factor: RatFun,
}

/// Split off the constant term.
fn split_constant(p: &Poly) -> (Poly, Rational) {
    let c = p
        .terms()
        .iter()
        .find(|(m, _)| m.is_one())
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Rational::zero);
    (p - &Poly::constant(c.clone()), c)
}

fn frac(c: &Rational) -> Rational {
    c - c.floor()
}

impl GammaForm {
    fn into_ratfun(self) -> Result<RatFun, TermError> {
        let mut num = Poly::one();
        let mut den = Poly::one();
        // Group Gamma arguments by (non-constant part, fractional constant).
        let mut classes: BTreeMap<(Poly, Rational), Vec<(Rational, i64)>> = BTreeMap::new();
        for (arg, e) in self.gammas {
            let (x, c) = split_constant(&arg);
            let f = frac(&c);
            classes.entry((x, f)).or_default().push((c, e));
        }
        for ((x, _), members) in classes {
            let net: i64 = members.iter().map(|(_, e)| e).sum();
            if net != 0 {
                let mut names: Vec<String> =
                    members.iter().map(|(c, _)| format!("Γ({})", &x + &Poly::constant(c.clone()))).collect();
                names.dedup();
                return Err(TermError::NotSimilar(format!(
                    "Gamma factors {} have net exponent {net}",
                    names.join(", ")
                )));
            }
            let c0 = members.iter().map(|(c, _)| c.clone()).min().unwrap();
            // Γ(x + c0 + d) = Γ(x + c0) * prod_{j<d} (x + c0 + j).
            let mut lin: BTreeMap<i64, i64> = BTreeMap::new();
            for (c, e) in &members {
                let d = (c - &c0).to_integer().to_i64().expect("small offset");
                for j in 0..d {
                    *lin.entry(j).or_insert(0) += e;
                }
            }
            for (j, e) in lin {
                if e == 0 {
                    continue;
                }
                let c = &c0 + Rational::from_integer(j.into());
                let f = &x + &Poly::constant(c);
                let fp = f.pow(e.unsigned_abs() as u32);
                if e > 0 {
                    num = &num * &fp;
                } else {
                    den = &den * &fp;
                }
            }
        }
        let mut acc = RatFun::new(num, den);
        let mut bases: Vec<(RatFun, Poly)> = Vec::new();
        for (b, e) in self.powers {
            match bases.iter_mut().find(|(x, _)| *x == b) {
                Some(slot) => slot.1 = &slot.1 + &e,
                None => bases.push((b, e)),
            }
        }
        for (b, e) in bases {
            if e.is_zero() {
                continue;
            }
            let Some(n) = e.as_constant().filter(|c| c.is_integer()) else {
                return Err(TermError::NotSimilar(format!(
                    "power ({b})^({e}) is not rational"
                )));
            };
            let n = n.to_integer().to_i32().expect("small exponent");
            acc = &acc * &b.pow(n);
        }
        Ok(&acc * &self.factor)
    }
}

/// `t1 / t2` as a rational function, or `NotSimilar`.
pub fn cross_ratio(t1: &HyperTerm, t2: &HyperTerm) -> Result<RatFun, TermError> {
    let mut g = t1.gamma_form();
    let g2 = t2.gamma_form();
    g.gammas.extend(g2.gammas.into_iter().map(|(a, e)| (a, -e)));
    g.powers.extend(g2.powers.into_iter().map(|(b, e)| (b, -e)));
    g.factor = &g.factor / &g2.factor;
    g.into_ratfun()
}

fn fmt_power(f: &mut fmt::Formatter<'_>, body: &str, e: i32) -> fmt::Result {
    if e == 1 {
        f.write_str(body)
    } else {
        write!(f, "{body}^{e}")
    }
}

impl fmt::Display for AtomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomKind::Poch { arg, count } => write!(f, "Poch({}, {})", arg, count),
            AtomKind::Fact { arg } => write!(f, "fact({arg})"),
            AtomKind::Pow { base, exponent } => write!(f, "pow({base}, {exponent})"),
        }
    }
}

impl fmt::Display for HyperTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num: Vec<&Atom> = self.atoms.iter().filter(|a| a.power > 0).collect();
        let den: Vec<&Atom> = self.atoms.iter().filter(|a| a.power < 0).collect();
        let mut wrote = false;
        if !self.factor.is_one() || num.is_empty() {
            write!(f, "({})", self.factor)?;
            wrote = true;
        }
        for a in num {
            if wrote {
                f.write_str("*")?;
            }
            fmt_power(f, &a.kind.to_string(), a.power)?;
            wrote = true;
        }
        if !den.is_empty() {
            f.write_str("/(")?;
            for (i, a) in den.iter().enumerate() {
                if i > 0 {
                    f.write_str("*")?;
                }
                fmt_power(f, &a.kind.to_string(), -a.power)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

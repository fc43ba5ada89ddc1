//! Recursive-descent parser for term expressions.
//!
//! ```text
//! expr    := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' '-'? integer)?
//! primary := integer | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Calls are `Poch(arg, count)`, `fact(arg)` and `pow(base, exponent)`.
//! Calls may be multiplied, divided and raised to integer powers, but not
//! added: a sum of terms is not a term.

use num_bigint::BigInt;

use super::HyperTerm;
use crate::error::ParseError;
use crate::exactalg::{Poly, RatFun, Var};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = bytes[start..i].iter().map(|(_, c)| c).collect();
            toks.push((Tok::Int(s.parse().unwrap()), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].1.is_ascii_alphanumeric() || bytes[i].1 == '_') {
                i += 1;
            }
            let s: String = bytes[start..i].iter().map(|(_, c)| c).collect();
            toks.push((Tok::Name(s), pos));
        } else if "+-*/^(),".contains(c) {
            toks.push((Tok::Sym(c), pos));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    toks.push((Tok::End, text.len()));
    Ok(Lexer { toks })
}

#[derive(Clone, Debug)]
enum Expr {
    Num(BigInt),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call { name: String, args: Vec<Expr>, pos: usize },
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if *self.peek() == Tok::Sym('+') {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let neg = if *self.peek() == Tok::Sym('-') {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Tok::Int(n) => {
                let Ok(e) = i64::try_from(&n) else {
                    return self.err("exponent too large");
                };
                if e > 1000 {
                    return self.err("exponent too large");
                }
                Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::Num(n)),
            Tok::Name(name) => {
                if *self.peek() != Tok::Sym('(') {
                    return Ok(Expr::Name(name));
                }
                self.bump();
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Sym(',') {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                Ok(Expr::Call { name, args, pos })
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => Err(ParseError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            Tok::Sym(c) => Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected `{c}`"),
            }),
        }
    }
}

fn has_call(e: &Expr) -> Option<usize> {
    match e {
        Expr::Call { pos, .. } => Some(*pos),
        Expr::Num(_) | Expr::Name(_) => None,
        Expr::Neg(a) | Expr::Pow(a, _) => has_call(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            has_call(a).or_else(|| has_call(b))
        }
    }
}

fn to_ratfun(e: &Expr) -> Result<RatFun, ParseError> {
    Ok(match e {
        Expr::Num(n) => RatFun::constant(Rational::from_integer(n.clone())),
        Expr::Name(s) => RatFun::var(Var::new(s)),
        Expr::Neg(a) => -to_ratfun(a)?,
        Expr::Add(a, b) => to_ratfun(a)? + to_ratfun(b)?,
        Expr::Sub(a, b) => to_ratfun(a)? - to_ratfun(b)?,
        Expr::Mul(a, b) => to_ratfun(a)? * to_ratfun(b)?,
        Expr::Div(a, b) => {
            let d = to_ratfun(b)?;
            if d.is_zero() {
                return Err(ParseError::Semantic("division by zero".into()));
            }
            to_ratfun(a)? / d
        }
        Expr::Pow(a, k) => {
            let b = to_ratfun(a)?;
            if *k < 0 && b.is_zero() {
                return Err(ParseError::Semantic("zero to a negative power".into()));
            }
            b.pow(*k as i32)
        }
        Expr::Call { name, pos, .. } => {
            return Err(ParseError::Syntax {
                pos: *pos,
                msg: format!("`{name}(...)` is not allowed inside a rational expression"),
            })
        }
    })
}

fn to_poly(e: &Expr, what: &str) -> Result<Poly, ParseError> {
    let r = to_ratfun(e)?;
    match r.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(ParseError::Semantic(format!("{what} `{r}` must be a polynomial"))),
    }
}

fn to_term(e: &Expr, k: Var) -> Result<HyperTerm, ParseError> {
    match e {
        Expr::Mul(a, b) => Ok(to_term(a, k)?.mul(&to_term(b, k)?)),
        Expr::Div(a, b) => {
            let d = to_term(b, k)?;
            if d.factor().is_zero() {
                return Err(ParseError::Semantic("division by zero".into()));
            }
            Ok(to_term(a, k)?.mul(&d.inv()))
        }
        Expr::Neg(a) => Ok(to_term(a, k)?.scale(&RatFun::int(-1))),
        Expr::Pow(a, n) => {
            let t = to_term(a, k)?;
            if *n < 0 && t.factor().is_zero() {
                return Err(ParseError::Semantic("zero to a negative power".into()));
            }
            let base = if *n < 0 { t.inv() } else { t };
            let mut acc = HyperTerm::one(k);
            for _ in 0..n.unsigned_abs() {
                acc = acc.mul(&base);
            }
            Ok(acc)
        }
        Expr::Call { name, args, pos } => {
            let arity = |n: usize| -> Result<(), ParseError> {
                if args.len() != n {
                    Err(ParseError::Syntax {
                        pos: *pos,
                        msg: format!("`{name}` takes {n} argument(s), got {}", args.len()),
                    })
                } else {
                    Ok(())
                }
            };
            let atom = match name.as_str() {
                "Poch" | "Pochhammer" => {
                    arity(2)?;
                    let arg = to_poly(&args[0], "Pochhammer argument")?;
                    let count = to_poly(&args[1], "Pochhammer count")?;
                    HyperTerm::poch(arg, count, 1)
                }
                "fact" | "factorial" => {
                    arity(1)?;
                    HyperTerm::fact(to_poly(&args[0], "factorial argument")?, 1)
                }
                "pow" => {
                    arity(2)?;
                    let base = to_ratfun(&args[0])?;
                    let exp = to_poly(&args[1], "exponent")?;
                    if base.is_zero() {
                        return Err(ParseError::Semantic("zero power base".into()));
                    }
                    HyperTerm::pow(base, exp, 1)
                }
                _ => {
                    return Err(ParseError::Syntax {
                        pos: *pos,
                        msg: format!("unknown function `{name}`"),
                    })
                }
            };
            HyperTerm::new(vec![atom], RatFun::one(), k)
        }
        other => {
            if let Some(pos) = has_call(other) {
                return Err(ParseError::Syntax {
                    pos,
                    msg: "a sum of terms is not a hypergeometric term".into(),
                });
            }
            Ok(HyperTerm::from_factor(to_ratfun(other)?, k))
        }
    }
}

/// Parse with summation variable `k`.
pub fn parse_term(text: &str) -> Result<HyperTerm, ParseError> {
    parse_term_in(text, Var::K)
}

/// Parse with an explicit summation variable.
pub fn parse_term_in(text: &str, sumvar: Var) -> Result<HyperTerm, ParseError> {
    let lexer = lex(text)?;
    let mut p = Parser {
        toks: lexer.toks,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    let t = to_term(&e, sumvar)?;
    HyperTerm::new(t.atoms().to_vec(), t.factor().clone(), sumvar)
}

/// Parse a polynomial expression.
pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let r = parse_ratfun(text)?;
    match r.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(ParseError::Semantic(format!("`{text}` is not a polynomial"))),
    }
}

/// Parse a rational-function expression (no calls).
pub fn parse_ratfun(text: &str) -> Result<RatFun, ParseError> {
    let lexer = lex(text)?;
    let mut p = Parser {
        toks: lexer.toks,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    to_ratfun(&e)
}

//! Closed-form univariate expressions: parsing, evaluation, symbolic
//! differentiation and printing.
//!
//! Constants carry an exact rational value whenever they can; anything
//! touched by `sqrt`, `pi` or a trig constant degrades to an IEEE double.
//! Trigonometric functions are only accepted with constant arguments and
//! fold to a numeric literal at parse time, so the tree itself only knows
//! about rational arithmetic, integer powers and square roots.

use std::fmt;
use std::sync::Arc;

use num::{BigRational, FromPrimitive, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// A numeric constant: exact rational when possible, double otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rat(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn from_int(n: i64) -> Scalar {
        Scalar::Rat(BigRational::from_integer(n.into()))
    }

    /// Exact conversion; every finite f64 is a rational.
    pub fn from_f64_exact(v: f64) -> Scalar {
        match BigRational::from_f64(v) {
            Some(r) => Scalar::Rat(r),
            None => Scalar::Float(v),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rat(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Float(v) => *v == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r == &BigRational::from_integer(1.into()),
            Scalar::Float(v) => *v == 1.0,
        }
    }

    /// Sign of the value: -1, 0 or 1. Exact for rationals.
    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Scalar::Float(v) => {
                if *v == 0.0 {
                    0
                } else if *v > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r.clone()),
            Scalar::Float(v) => Scalar::Float(-v),
        }
    }

    fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => Scalar::Float(self.to_f64() + other.to_f64()),
        }
    }

    fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => Scalar::Float(self.to_f64() * other.to_f64()),
        }
    }

    /// None when dividing by an exact (or float) zero.
    fn div(&self, other: &Scalar) -> Option<Scalar> {
        if other.is_zero() {
            return None;
        }
        Some(match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a / b),
            _ => Scalar::Float(self.to_f64() / other.to_f64()),
        })
    }

    fn pow(&self, n: u32) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(num::pow::pow(r.clone(), n as usize)),
            Scalar::Float(v) => Scalar::Float(v.powi(n as i32)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom() == &num::BigInt::from(1) {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            // {:?} keeps a trailing ".0" on integral doubles, so the
            // printed form re-parses as a float and not a rational.
            Scalar::Float(v) => write!(f, "{v:?}"),
        }
    }
}

/// Expression tree over a single formal variable.
///
/// Subtrees are shared via `Arc` so formulas can embed the same piece
/// function many times without copying.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Scalar),
    Var,
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Pow(Arc<Expr>, u32),
    Sqrt(Arc<Expr>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdent { pos: usize, name: String },
    #[error("domain error in `{node}`: {msg}")]
    Domain { node: String, msg: String },
}

impl Expr {
    pub fn num_f64(v: f64) -> Expr {
        Expr::Num(Scalar::from_f64_exact(v))
    }

    pub fn num_int(n: i64) -> Expr {
        Expr::Num(Scalar::from_int(n))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Arc::new(a), Arc::new(b)).fold()
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Arc::new(a), Arc::new(b)).fold()
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Arc::new(a), Arc::new(b)).fold()
    }

    /// Parse an expression over the variable `x` (see the grammar in the
    /// crate docs). The result is constant-folded.
    pub fn parse(text: &str) -> Result<Expr, ExprError> {
        parser::parse(text)
    }

    /// Evaluate at a double-precision point.
    pub fn eval(&self, v: f64) -> Result<f64, ExprError> {
        Ok(self.eval_scalar(&Scalar::Float(v))?.to_f64())
    }

    /// Evaluate with scalar arithmetic. Feeding an exact rational into a
    /// sqrt-free rational tree stays exact throughout, which the
    /// transition root finder uses for bit-reliable sign tests.
    pub fn eval_scalar(&self, v: &Scalar) -> Result<Scalar, ExprError> {
        match self {
            Expr::Num(s) => Ok(s.clone()),
            Expr::Var => Ok(v.clone()),
            Expr::Add(a, b) => Ok(a.eval_scalar(v)?.add(&b.eval_scalar(v)?)),
            Expr::Sub(a, b) => Ok(a.eval_scalar(v)?.sub(&b.eval_scalar(v)?)),
            Expr::Mul(a, b) => Ok(a.eval_scalar(v)?.mul(&b.eval_scalar(v)?)),
            Expr::Div(a, b) => {
                let num = a.eval_scalar(v)?;
                let den = b.eval_scalar(v)?;
                num.div(&den).ok_or_else(|| ExprError::Domain {
                    node: self.to_string(),
                    msg: "division by zero".into(),
                })
            }
            Expr::Pow(b, n) => Ok(b.eval_scalar(v)?.pow(*n)),
            Expr::Sqrt(a) => {
                let inner = a.eval_scalar(v)?;
                if inner.signum() < 0 {
                    return Err(ExprError::Domain {
                        node: self.to_string(),
                        msg: format!("sqrt of negative value {}", inner.to_f64()),
                    });
                }
                Ok(Scalar::Float(inner.to_f64().max(0.0).sqrt()))
            }
        }
    }

    /// Exact symbolic derivative, constant-folded.
    pub fn differentiate(&self) -> Expr {
        let d = match self {
            Expr::Num(_) => Expr::num_int(0),
            Expr::Var => Expr::num_int(1),
            Expr::Add(a, b) => Expr::Add(Arc::new(a.differentiate()), Arc::new(b.differentiate())),
            Expr::Sub(a, b) => Expr::Sub(Arc::new(a.differentiate()), Arc::new(b.differentiate())),
            Expr::Mul(a, b) => Expr::Add(
                Arc::new(Expr::Mul(Arc::new(a.differentiate()), b.clone())),
                Arc::new(Expr::Mul(a.clone(), Arc::new(b.differentiate()))),
            ),
            Expr::Div(a, b) => Expr::Div(
                Arc::new(Expr::Sub(
                    Arc::new(Expr::Mul(Arc::new(a.differentiate()), b.clone())),
                    Arc::new(Expr::Mul(a.clone(), Arc::new(b.differentiate()))),
                )),
                Arc::new(Expr::Pow(b.clone(), 2)),
            ),
            Expr::Pow(b, n) => match n {
                0 => Expr::num_int(0),
                1 => b.differentiate(),
                n => Expr::Mul(
                    Arc::new(Expr::Mul(
                        Arc::new(Expr::num_int(*n as i64)),
                        Arc::new(Expr::Pow(b.clone(), n - 1)),
                    )),
                    Arc::new(b.differentiate()),
                ),
            },
            Expr::Sqrt(a) => Expr::Div(
                Arc::new(a.differentiate()),
                Arc::new(Expr::Mul(
                    Arc::new(Expr::num_int(2)),
                    Arc::new(Expr::Sqrt(a.clone())),
                )),
            ),
        };
        d.fold()
    }

    /// Replace the formal variable with another expression.
    pub fn substitute(&self, sub: &Expr) -> Expr {
        let out = match self {
            Expr::Num(s) => Expr::Num(s.clone()),
            Expr::Var => sub.clone(),
            Expr::Add(a, b) => Expr::Add(Arc::new(a.substitute(sub)), Arc::new(b.substitute(sub))),
            Expr::Sub(a, b) => Expr::Sub(Arc::new(a.substitute(sub)), Arc::new(b.substitute(sub))),
            Expr::Mul(a, b) => Expr::Mul(Arc::new(a.substitute(sub)), Arc::new(b.substitute(sub))),
            Expr::Div(a, b) => Expr::Div(Arc::new(a.substitute(sub)), Arc::new(b.substitute(sub))),
            Expr::Pow(b, n) => Expr::Pow(Arc::new(b.substitute(sub)), *n),
            Expr::Sqrt(a) => Expr::Sqrt(Arc::new(a.substitute(sub))),
        };
        out.fold()
    }

    /// True when evaluation at a rational point stays in exact rational
    /// arithmetic: no sqrt node and no float literal anywhere.
    pub fn is_rational(&self) -> bool {
        match self {
            Expr::Num(Scalar::Rat(_)) => true,
            Expr::Num(Scalar::Float(_)) => false,
            Expr::Var => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_rational() && b.is_rational()
            }
            Expr::Pow(b, _) => b.is_rational(),
            Expr::Sqrt(_) => false,
        }
    }

    /// Constant folding plus neutral-element pruning. Idempotent.
    pub fn fold(&self) -> Expr {
        match self {
            Expr::Num(_) | Expr::Var => self.clone(),
            Expr::Add(a, b) => {
                let (a, b) = (a.fold(), b.fold());
                match (&a, &b) {
                    (Expr::Num(x), Expr::Num(y)) => Expr::Num(x.add(y)),
                    (Expr::Num(x), _) if x.is_zero() => b,
                    (_, Expr::Num(y)) if y.is_zero() => a,
                    _ => Expr::Add(Arc::new(a), Arc::new(b)),
                }
            }
            Expr::Sub(a, b) => {
                let (a, b) = (a.fold(), b.fold());
                match (&a, &b) {
                    (Expr::Num(x), Expr::Num(y)) => Expr::Num(x.sub(y)),
                    (_, Expr::Num(y)) if y.is_zero() => a,
                    _ => Expr::Sub(Arc::new(a), Arc::new(b)),
                }
            }
            Expr::Mul(a, b) => {
                let (a, b) = (a.fold(), b.fold());
                match (&a, &b) {
                    (Expr::Num(x), Expr::Num(y)) => Expr::Num(x.mul(y)),
                    (Expr::Num(x), _) if x.is_zero() => Expr::num_int(0),
                    (_, Expr::Num(y)) if y.is_zero() => Expr::num_int(0),
                    (Expr::Num(x), _) if x.is_one() => b,
                    (_, Expr::Num(y)) if y.is_one() => a,
                    _ => Expr::Mul(Arc::new(a), Arc::new(b)),
                }
            }
            Expr::Div(a, b) => {
                let (a, b) = (a.fold(), b.fold());
                match (&a, &b) {
                    // A constant zero divisor is left in place; evaluation
                    // reports it as a domain error.
                    (Expr::Num(x), Expr::Num(y)) if !y.is_zero() => {
                        Expr::Num(x.div(y).expect("nonzero divisor"))
                    }
                    (_, Expr::Num(y)) if y.is_one() => a,
                    _ => Expr::Div(Arc::new(a), Arc::new(b)),
                }
            }
            Expr::Pow(b, n) => {
                let b = b.fold();
                match (&b, n) {
                    (_, 0) => Expr::num_int(1),
                    (_, 1) => b,
                    (Expr::Num(x), n) => Expr::Num(x.pow(*n)),
                    _ => Expr::Pow(Arc::new(b), *n),
                }
            }
            Expr::Sqrt(a) => {
                let a = a.fold();
                match &a {
                    Expr::Num(x) if x.signum() >= 0 => {
                        Expr::Num(Scalar::Float(x.to_f64().sqrt()))
                    }
                    _ => Expr::Sqrt(Arc::new(a)),
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Num(_) | Expr::Var | Expr::Sqrt(_) => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8, head: bool) -> fmt::Result {
        let needs_paren = self.precedence() < min_prec
            || (!head && matches!(self, Expr::Num(s) if s.signum() < 0));
        if needs_paren {
            write!(f, "(")?;
        }
        match self {
            Expr::Num(s) => write!(f, "{s}")?,
            Expr::Var => write!(f, "x")?,
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1, head && !needs_paren)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2, false)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1, head && !needs_paren)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2, false)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2, head && !needs_paren)?;
                write!(f, " * ")?;
                b.fmt_prec(f, 3, false)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2, head && !needs_paren)?;
                write!(f, " / ")?;
                b.fmt_prec(f, 3, false)?;
            }
            Expr::Pow(b, n) => {
                b.fmt_prec(f, 4, false)?;
                write!(f, "^{n}")?;
            }
            Expr::Sqrt(a) => {
                write!(f, "sqrt(")?;
                a.fmt_prec(f, 0, true)?;
                write!(f, ")")?;
            }
        }
        if needs_paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0, true)
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Expr, D::Error> {
        let text = String::deserialize(d)?;
        Expr::parse(&text).map_err(serde::de::Error::custom)
    }
}

mod parser {
    use super::{Expr, ExprError, Scalar};
    use std::sync::Arc;

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(Scalar),
        Ident(String),
        Plus,
        Minus,
        Star,
        Slash,
        Caret,
        LParen,
        RParen,
    }

    struct Lexer<'a> {
        src: &'a [u8],
        pos: usize,
    }

    impl<'a> Lexer<'a> {
        fn tokens(mut self) -> Result<Vec<(usize, Tok)>, ExprError> {
            let mut out = Vec::new();
            while self.pos < self.src.len() {
                let c = self.src[self.pos];
                let start = self.pos;
                match c {
                    b' ' | b'\t' | b'\n' | b'\r' => {
                        self.pos += 1;
                        continue;
                    }
                    b'+' => out.push((start, Tok::Plus)),
                    b'-' => out.push((start, Tok::Minus)),
                    b'*' => out.push((start, Tok::Star)),
                    b'/' => out.push((start, Tok::Slash)),
                    b'^' => out.push((start, Tok::Caret)),
                    b'(' => out.push((start, Tok::LParen)),
                    b')' => out.push((start, Tok::RParen)),
                    b'0'..=b'9' | b'.' => {
                        let mut end = self.pos;
                        let mut is_float = false;
                        while end < self.src.len() {
                            match self.src[end] {
                                b'0'..=b'9' => end += 1,
                                b'.' => {
                                    is_float = true;
                                    end += 1;
                                }
                                b'e' | b'E'
                                    if end > self.pos
                                        && end + 1 < self.src.len()
                                        && (self.src[end + 1].is_ascii_digit()
                                            || self.src[end + 1] == b'-'
                                            || self.src[end + 1] == b'+') =>
                                {
                                    is_float = true;
                                    end += 2;
                                }
                                _ => break,
                            }
                        }
                        let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                        let scalar = if is_float {
                            text.parse::<f64>().map(Scalar::Float).map_err(|_| {
                                ExprError::Syntax {
                                    pos: start,
                                    msg: format!("bad number literal `{text}`"),
                                }
                            })?
                        } else {
                            text.parse::<i64>().map(Scalar::from_int).map_err(|_| {
                                ExprError::Syntax {
                                    pos: start,
                                    msg: format!("integer literal `{text}` out of range"),
                                }
                            })?
                        };
                        out.push((start, Tok::Num(scalar)));
                        self.pos = end;
                        continue;
                    }
                    b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                        let mut end = self.pos;
                        while end < self.src.len()
                            && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                        {
                            end += 1;
                        }
                        let name = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                        out.push((start, Tok::Ident(name.to_string())));
                        self.pos = end;
                        continue;
                    }
                    other => {
                        return Err(ExprError::Syntax {
                            pos: start,
                            msg: format!("unexpected character `{}`", other as char),
                        })
                    }
                }
                self.pos += 1;
            }
            Ok(out)
        }
    }

    struct Parser {
        toks: Vec<(usize, Tok)>,
        idx: usize,
        len: usize,
    }

    pub fn parse(text: &str) -> Result<Expr, ExprError> {
        let toks = Lexer {
            src: text.as_bytes(),
            pos: 0,
        }
        .tokens()?;
        let mut p = Parser {
            toks,
            idx: 0,
            len: text.len(),
        };
        let e = p.expr()?;
        if let Some((pos, _)) = p.peek_at() {
            return Err(ExprError::Syntax {
                pos,
                msg: "trailing input after expression".into(),
            });
        }
        Ok(e.fold())
    }

    impl Parser {
        fn peek_at(&self) -> Option<(usize, &Tok)> {
            self.toks.get(self.idx).map(|(p, t)| (*p, t))
        }

        fn next(&mut self) -> Option<(usize, Tok)> {
            let t = self.toks.get(self.idx).cloned();
            self.idx += 1;
            t
        }

        fn here(&self) -> usize {
            self.peek_at().map(|(p, _)| p).unwrap_or(self.len)
        }

        fn expect(&mut self, want: Tok, what: &str) -> Result<(), ExprError> {
            match self.next() {
                Some((_, t)) if t == want => Ok(()),
                Some((pos, _)) => Err(ExprError::Syntax {
                    pos,
                    msg: format!("expected {what}"),
                }),
                None => Err(ExprError::Syntax {
                    pos: self.len,
                    msg: format!("expected {what}, found end of input"),
                }),
            }
        }

        fn expr(&mut self) -> Result<Expr, ExprError> {
            let mut lhs = if matches!(self.peek_at(), Some((_, Tok::Minus))) {
                self.next();
                negate(self.term()?)
            } else {
                self.term()?
            };
            loop {
                match self.peek_at() {
                    Some((_, Tok::Plus)) => {
                        self.next();
                        let rhs = self.term()?;
                        lhs = Expr::Add(Arc::new(lhs), Arc::new(rhs));
                    }
                    Some((_, Tok::Minus)) => {
                        self.next();
                        let rhs = self.term()?;
                        lhs = Expr::Sub(Arc::new(lhs), Arc::new(rhs));
                    }
                    _ => return Ok(lhs),
                }
            }
        }

        fn term(&mut self) -> Result<Expr, ExprError> {
            let mut lhs = self.factor()?;
            loop {
                match self.peek_at() {
                    Some((_, Tok::Star)) => {
                        self.next();
                        let rhs = self.factor()?;
                        lhs = Expr::Mul(Arc::new(lhs), Arc::new(rhs));
                    }
                    Some((_, Tok::Slash)) => {
                        self.next();
                        let rhs = self.factor()?;
                        lhs = Expr::Div(Arc::new(lhs), Arc::new(rhs));
                    }
                    _ => return Ok(lhs),
                }
            }
        }

        fn factor(&mut self) -> Result<Expr, ExprError> {
            let base = self.base()?;
            if matches!(self.peek_at(), Some((_, Tok::Caret))) {
                self.next();
                let pos = self.here();
                match self.next() {
                    Some((_, Tok::Num(Scalar::Rat(r)))) if r.denom() == &num::BigInt::from(1) => {
                        let n = r.numer().to_string().parse::<u32>().map_err(|_| {
                            ExprError::Syntax {
                                pos,
                                msg: "exponent must be a small non-negative integer".into(),
                            }
                        })?;
                        Ok(Expr::Pow(Arc::new(base), n))
                    }
                    _ => Err(ExprError::Syntax {
                        pos,
                        msg: "expected integer exponent after `^`".into(),
                    }),
                }
            } else {
                Ok(base)
            }
        }

        fn base(&mut self) -> Result<Expr, ExprError> {
            let pos = self.here();
            match self.next() {
                Some((_, Tok::Num(s))) => Ok(Expr::Num(s)),
                Some((_, Tok::LParen)) => {
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "closing `)`")?;
                    Ok(e)
                }
                Some((ident_pos, Tok::Ident(name))) => match name.as_str() {
                    "x" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Num(Scalar::Float(std::f64::consts::PI))),
                    "sqrt" => {
                        self.expect(Tok::LParen, "`(` after sqrt")?;
                        let e = self.expr()?;
                        self.expect(Tok::RParen, "closing `)`")?;
                        Ok(Expr::Sqrt(Arc::new(e)))
                    }
                    "sin" | "cos" | "tan" => {
                        self.expect(Tok::LParen, &format!("`(` after {name}"))?;
                        let arg_pos = self.here();
                        let e = self.expr()?;
                        self.expect(Tok::RParen, "closing `)`")?;
                        match e.fold() {
                            Expr::Num(s) => {
                                let v = s.to_f64();
                                let out = match name.as_str() {
                                    "sin" => v.sin(),
                                    "cos" => v.cos(),
                                    _ => v.tan(),
                                };
                                Ok(Expr::Num(Scalar::Float(out)))
                            }
                            _ => Err(ExprError::Syntax {
                                pos: arg_pos,
                                msg: format!("argument of {name} must be constant"),
                            }),
                        }
                    }
                    _ => Err(ExprError::UnknownIdent {
                        pos: ident_pos,
                        name,
                    }),
                },
                Some((pos, _)) => Err(ExprError::Syntax {
                    pos,
                    msg: "expected number, identifier or `(`".into(),
                }),
                None => Err(ExprError::Syntax {
                    pos,
                    msg: "unexpected end of input".into(),
                }),
            }
        }
    }

    /// Push a leading unary minus into the leftmost literal so that
    /// printing and re-parsing land on the same tree.
    fn negate(e: Expr) -> Expr {
        match e {
            Expr::Num(s) => Expr::Num(s.neg()),
            Expr::Mul(a, b) => Expr::Mul(Arc::new(negate((*a).clone())), b),
            Expr::Div(a, b) => Expr::Div(Arc::new(negate((*a).clone())), b),
            other => Expr::Mul(Arc::new(Expr::num_int(-1)), Arc::new(other)),
        }
    }
}

//! Text grammar for fields, rational functions and places.
//!
//! Expressions use `+ - * / ^`, parentheses, juxtaposition as product and
//! `(x)` as the tensor separator (binding looser than products). Variables
//! are resolved by the consumer through [`Ops`].

use num_rational::Rational64;

use super::factor::is_irreducible;
use super::field::FiniteField;
use super::place::PlaceValuation;
use super::poly::{Poly, MAX_DEGREE};
use super::ratfunc::RatFunc;
use super::FieldError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(i64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Tensor(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(char),
    TensorSep,
}

fn perr(msg: impl Into<String>) -> FieldError {
    FieldError::Parse(msg.into())
}

fn lex(s: &str) -> Result<Vec<Tok>, FieldError> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' && cs.get(i + 1) == Some(&'x') && cs.get(i + 2) == Some(&')') {
            out.push(Tok::TensorSep);
            i += 3;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let n: String = cs[st..i].iter().collect();
            out.push(Tok::Num(n.parse().map_err(|_| perr(format!("number too large: {n}")))?));
        } else if c.is_ascii_alphabetic() {
            // a variable is one letter plus an optional index, so `T1T2` is a product
            let st = i;
            i += 1;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(perr(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, FieldError> {
        let mut e = if self.eat('-') { Expr::Neg(Box::new(self.tensor()?)) } else { self.tensor()? };
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.tensor()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.tensor()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn tensor(&mut self) -> Result<Expr, FieldError> {
        let first = self.product()?;
        if self.peek() != Some(&Tok::TensorSep) {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.peek() == Some(&Tok::TensorSep) {
            self.pos += 1;
            parts.push(self.product()?);
        }
        Ok(Expr::Tensor(parts))
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('(')))
    }

    fn product(&mut self) -> Result<Expr, FieldError> {
        let mut e = self.power()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.power()?));
            } else if self.starts_atom() {
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, FieldError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let paren = self.eat('(');
        let neg = if paren { self.eat('-') || neg } else { neg };
        let n = match self.peek() {
            Some(Tok::Num(n)) => *n,
            other => return Err(perr(format!("expected exponent, found {other:?}"))),
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return Err(perr("unclosed exponent"));
        }
        Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr, FieldError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(perr("missing ')'"));
                }
                Ok(e)
            }
            other => Err(perr(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, FieldError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(perr("empty expression"));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(perr(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

/// Interpretation of expressions in some ring.
pub trait Ops<T> {
    fn num(&self, n: i64) -> Result<T, FieldError>;
    fn var(&self, name: &str) -> Result<T, FieldError>;
    fn add(&self, a: T, b: T) -> Result<T, FieldError>;
    fn neg(&self, a: T) -> Result<T, FieldError>;
    fn mul(&self, a: T, b: T) -> Result<T, FieldError>;
    fn div(&self, a: T, b: T) -> Result<T, FieldError>;
    fn pow(&self, a: T, e: i64) -> Result<T, FieldError>;
    fn tensor(&self, _parts: Vec<T>) -> Result<T, FieldError> {
        Err(perr("tensor products are not allowed here"))
    }
}

pub fn eval<T, O: Ops<T> + ?Sized>(e: &Expr, ops: &O) -> Result<T, FieldError> {
    Ok(match e {
        Expr::Num(n) => ops.num(*n)?,
        Expr::Var(v) => ops.var(v)?,
        Expr::Neg(a) => ops.neg(eval(a, ops)?)?,
        Expr::Add(a, b) => ops.add(eval(a, ops)?, eval(b, ops)?)?,
        Expr::Sub(a, b) => {
            let b = ops.neg(eval(b, ops)?)?;
            ops.add(eval(a, ops)?, b)?
        }
        Expr::Mul(a, b) => ops.mul(eval(a, ops)?, eval(b, ops)?)?,
        Expr::Div(a, b) => ops.div(eval(a, ops)?, eval(b, ops)?)?,
        Expr::Pow(a, k) => ops.pow(eval(a, ops)?, *k)?,
        Expr::Tensor(parts) => ops.tensor(parts.iter().map(|p| eval(p, ops)).collect::<Result<_, _>>()?)?,
    })
}

/// Rational functions in `t` with `u` the generator of `F_q` over `F_p`.
pub struct RatFuncOps<'a>(pub &'a FiniteField);

fn check_degree(r: &RatFunc) -> Result<(), FieldError> {
    let d = r.num().degree().unwrap_or(0).max(r.den().degree().unwrap_or(0));
    if d > MAX_DEGREE {
        return Err(FieldError::DegreeTooLarge(d));
    }
    Ok(())
}

fn deg(r: &RatFunc) -> usize {
    r.num().degree().unwrap_or(0).max(r.den().degree().unwrap_or(0))
}

impl Ops<RatFunc> for RatFuncOps<'_> {
    fn num(&self, n: i64) -> Result<RatFunc, FieldError> {
        Ok(RatFunc::constant(self.0, self.0.from_int(n)))
    }
    fn var(&self, name: &str) -> Result<RatFunc, FieldError> {
        match name {
            "t" => Ok(RatFunc::t(self.0)),
            "u" if self.0.k() > 1 => Ok(RatFunc::constant(self.0, self.0.u())),
            _ => Err(perr(format!("unknown variable '{name}'"))),
        }
    }
    fn add(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc, FieldError> {
        if deg(&a) + deg(&b) > MAX_DEGREE {
            return Err(FieldError::DegreeTooLarge(deg(&a) + deg(&b)));
        }
        Ok(&a + &b)
    }
    fn neg(&self, a: RatFunc) -> Result<RatFunc, FieldError> {
        Ok(-&a)
    }
    fn mul(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc, FieldError> {
        if deg(&a) + deg(&b) > MAX_DEGREE {
            return Err(FieldError::DegreeTooLarge(deg(&a) + deg(&b)));
        }
        Ok(&a * &b)
    }
    fn div(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc, FieldError> {
        if b.is_zero() {
            return Err(FieldError::Invalid("division by zero".into()));
        }
        self.mul(a, b.inv().unwrap())
    }
    fn pow(&self, a: RatFunc, e: i64) -> Result<RatFunc, FieldError> {
        let d = deg(&a).saturating_mul(e.unsigned_abs() as usize);
        if d > MAX_DEGREE {
            return Err(FieldError::DegreeTooLarge(d));
        }
        if e < 0 && a.is_zero() {
            return Err(FieldError::Invalid("negative power of zero".into()));
        }
        let r = a.pow(e);
        check_degree(&r)?;
        Ok(r)
    }
}

pub fn parse_ratfunc(field: &FiniteField, s: &str) -> Result<RatFunc, FieldError> {
    eval(&parse_expr(s)?, &RatFuncOps(field))
}

pub fn parse_poly(field: &FiniteField, s: &str) -> Result<Poly, FieldError> {
    let r = parse_ratfunc(field, s)?;
    if !r.is_polynomial() {
        return Err(perr(format!("'{s}' is not a polynomial")));
    }
    Ok(r.num().clone())
}

/// `GF(q)`, also accepting a bare `q`.
pub fn parse_field(s: &str) -> Result<FiniteField, FieldError> {
    let s = s.trim();
    let inner = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')).unwrap_or(s);
    let q: u32 = inner.trim().parse().map_err(|_| perr(format!("bad field '{s}'")))?;
    FiniteField::new(q)
}

pub fn render_field(f: &FiniteField) -> String {
    format!("GF({})", f.q())
}

fn parse_rational(s: &str) -> Result<Rational64, FieldError> {
    let bad = || perr(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a, b))
        }
        None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Places: `t`, `t-1`, any monic irreducible, `inf`, `gauss(1/2)`,
/// `trivial`, and composites `first;second`.
pub fn parse_place(field: &FiniteField, s: &str) -> Result<PlaceValuation, FieldError> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once(';') {
        return PlaceValuation::composite(parse_place(field, a)?, parse_place(field, b)?);
    }
    match s {
        "inf" => return Ok(PlaceValuation::Infinite),
        "trivial" => return Ok(PlaceValuation::Trivial),
        _ => {}
    }
    if let Some(g) = s.strip_prefix("gauss(").and_then(|r| r.strip_suffix(')')) {
        return Ok(PlaceValuation::Gauss(parse_rational(g)?));
    }
    let p = parse_poly(field, s)?;
    if p.degree().unwrap_or(0) == 0 || !is_irreducible(&p) {
        return Err(FieldError::NotIrreducible(s.to_string()));
    }
    Ok(PlaceValuation::Finite(p.monic()))
}

/// Comma-separated place list, commas inside parentheses ignored.
pub fn parse_places(field: &FiniteField, s: &str) -> Result<Vec<PlaceValuation>, FieldError> {
    split_top_level(s, ',').into_iter().filter(|x| !x.trim().is_empty()).map(|x| parse_place(field, x)).collect()
}

pub fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut st = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[st..i]);
                st = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[st..]);
    out
}

//! Polynomials in `T` over `F_q(t)`, stored as coefficient vectors (lowest
//! degree first).

use crate::funcfield::parse::{eval, parse_expr, Ops, RatFuncOps};
use crate::funcfield::ratfunc::has_top_level_sum;
use crate::funcfield::{FieldError, FiniteField, RatFunc};

/// Largest accepted degree in `T`.
pub const MAX_T_DEGREE: usize = 32;

pub fn trim(mut c: Vec<RatFunc>) -> Vec<RatFunc> {
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    c
}

pub fn degree(c: &[RatFunc]) -> Option<usize> {
    c.iter().rposition(|x| !x.is_zero())
}

pub fn derivative(c: &[RatFunc]) -> Vec<RatFunc> {
    let f = c[0].field();
    let d: Vec<RatFunc> = c.iter().enumerate().skip(1).map(|(i, x)| x.scale(f.from_int(i as i64))).collect();
    if d.is_empty() {
        vec![RatFunc::zero(f)]
    } else {
        trim(d)
    }
}

fn rem(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    let db = degree(b).expect("division by zero polynomial");
    let lb = b[db].inv().unwrap();
    let mut r = a.to_vec();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] * &lb;
        for i in 0..=db {
            r[dr - db + i] = &r[dr - db + i] - &(&c * &b[i]);
        }
    }
    trim(r)
}

/// Monic gcd.
pub fn gcd(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while degree(&b).is_some() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    match degree(&a) {
        Some(d) => {
            let l = a[d].inv().unwrap();
            a.iter().map(|x| x * &l).collect()
        }
        None => a,
    }
}

pub fn is_separable(c: &[RatFunc]) -> bool {
    let d = derivative(c);
    degree(&d).is_some() && gcd(c, &d).len() == 1
}

pub fn render(c: &[RatFunc]) -> String {
    let mut terms = Vec::new();
    for (i, x) in c.iter().enumerate().rev() {
        if x.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "T".to_string(),
            _ => format!("T^{i}"),
        };
        let coef = x.render();
        terms.push(if mono.is_empty() {
            coef
        } else if x.is_one() {
            mono
        } else if has_top_level_sum(&coef) || coef.contains('/') {
            format!("({coef})*{mono}")
        } else {
            format!("{coef}*{mono}")
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

struct TPolyOps<'a>(&'a FiniteField);

fn mul(a: &[RatFunc], b: &[RatFunc]) -> Result<Vec<RatFunc>, FieldError> {
    let f = a[0].field();
    let n = a.len() + b.len() - 1;
    if n > MAX_T_DEGREE + 1 {
        return Err(FieldError::DegreeTooLarge(n - 1));
    }
    let mut out = vec![RatFunc::zero(f); n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    Ok(trim(out))
}

impl Ops<Vec<RatFunc>> for TPolyOps<'_> {
    fn num(&self, n: i64) -> Result<Vec<RatFunc>, FieldError> {
        Ok(vec![RatFuncOps(self.0).num(n)?])
    }
    fn var(&self, name: &str) -> Result<Vec<RatFunc>, FieldError> {
        if name == "T" {
            return Ok(vec![RatFunc::zero(self.0), RatFunc::one(self.0)]);
        }
        Ok(vec![RatFuncOps(self.0).var(name)?])
    }
    fn add(&self, mut a: Vec<RatFunc>, b: Vec<RatFunc>) -> Result<Vec<RatFunc>, FieldError> {
        if a.len() < b.len() {
            a.resize(b.len(), RatFunc::zero(self.0));
        }
        for (i, y) in b.iter().enumerate() {
            a[i] = RatFuncOps(self.0).add(a[i].clone(), y.clone())?;
        }
        Ok(trim(a))
    }
    fn neg(&self, a: Vec<RatFunc>) -> Result<Vec<RatFunc>, FieldError> {
        Ok(a.iter().map(|x| -x).collect())
    }
    fn mul(&self, a: Vec<RatFunc>, b: Vec<RatFunc>) -> Result<Vec<RatFunc>, FieldError> {
        mul(&a, &b)
    }
    fn div(&self, a: Vec<RatFunc>, b: Vec<RatFunc>) -> Result<Vec<RatFunc>, FieldError> {
        if b.len() != 1 {
            return Err(FieldError::Parse("can only divide by elements of F_q(t)".into()));
        }
        let inv = b[0].inv().ok_or_else(|| FieldError::Invalid("division by zero".into()))?;
        Ok(a.iter().map(|x| x * &inv).collect())
    }
    fn pow(&self, a: Vec<RatFunc>, e: i64) -> Result<Vec<RatFunc>, FieldError> {
        if a.len() == 1 {
            return Ok(vec![RatFuncOps(self.0).pow(a[0].clone(), e)?]);
        }
        if e < 0 {
            return Err(FieldError::Parse("negative powers of T are not polynomials".into()));
        }
        if (a.len() - 1).saturating_mul(e as usize) > MAX_T_DEGREE {
            return Err(FieldError::DegreeTooLarge((a.len() - 1) * e as usize));
        }
        let mut acc = vec![RatFunc::one(self.0)];
        for _ in 0..e {
            acc = mul(&acc, &a)?;
        }
        Ok(acc)
    }
}

/// Parse a polynomial in `T` with coefficients in `F_q(t)`, e.g. `T^3 - t`.
pub fn parse(field: &FiniteField, s: &str) -> Result<Vec<RatFunc>, FieldError> {
    eval(&parse_expr(s)?, &TPolyOps(field))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let f = FiniteField::new(4).unwrap();
        let c = parse(&f, "T^3 - t").unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(render(&c), "T^3 + t");
        let c = parse(&f, "(T + 1/t)^2").unwrap();
        assert_eq!(render(&c), "T^2 + 1/t^2");
        let f = FiniteField::new(5).unwrap();
        assert_eq!(render(&parse(&f, "T^2 - (t+1)*T + 2").unwrap()), "T^2 + (4*t + 4)*T + 2");
        assert!(parse(&f, "T^-1").is_err());
        assert!(parse(&f, "1/T").is_err());
    }

    #[test]
    fn separability() {
        let f = FiniteField::new(3).unwrap();
        assert!(is_separable(&parse(&f, "T^2 - t").unwrap()));
        assert!(!is_separable(&parse(&f, "T^3 - t").unwrap()));
        assert!(!is_separable(&parse(&f, "(T^2 - t)^2").unwrap()));
        assert!(is_separable(&parse(&f, "T^3 - T - 1/t").unwrap()));
    }
}

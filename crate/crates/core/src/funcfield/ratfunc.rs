//! Rational functions in `F_q(t)` in lowest terms with a monic denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::{Elem, FiniteField};
use super::poly::Poly;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl RatFunc {
    /// `num/den` reduced; panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { den: Poly::one(num.field()), num };
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).unwrap();
        let den = den.div_exact(&g).unwrap();
        let lc = den.lc();
        let inv = num.field().inv(lc).unwrap();
        RatFunc { num: num.scale(inv), den: den.scale(inv) }
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.field());
        RatFunc { num: p, den }
    }

    pub fn zero(f: &FiniteField) -> Self {
        Self::from_poly(Poly::zero(f))
    }

    pub fn one(f: &FiniteField) -> Self {
        Self::from_poly(Poly::one(f))
    }

    pub fn constant(f: &FiniteField, c: Elem) -> Self {
        Self::from_poly(Poly::constant(f, c))
    }

    pub fn t(f: &FiniteField) -> Self {
        Self::from_poly(Poly::t(f))
    }

    /// `c·t^k` for any integer `k`.
    pub fn monomial(f: &FiniteField, c: Elem, k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(f, c, k as usize))
        } else {
            Self::new(Poly::constant(f, c), Poly::monomial(f, 1, (-k) as usize))
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn field(&self) -> &FiniteField {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn inv(&self) -> Option<RatFunc> {
        (!self.is_zero()).then(|| RatFunc::new(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> RatFunc {
        if e >= 0 {
            RatFunc { num: self.num.pow(e as u64), den: self.den.pow(e as u64) }
        } else {
            self.inv().expect("negative power of zero").pow(-e)
        }
    }

    pub fn scale(&self, c: Elem) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone())
    }

    /// Substitute `t ↦ g(t)` for a polynomial `g`.
    pub fn compose_poly(&self, g: &Poly) -> RatFunc {
        RatFunc::new(self.num.compose(g), self.den.compose(g))
    }

    /// Frobenius `f ↦ f^p`.
    pub fn frobenius(&self) -> RatFunc {
        RatFunc { num: self.num.frobenius(), den: self.den.frobenius() }
    }

    /// Canonical text form; round-trips through the expression parser.
    pub fn render(&self) -> String {
        if self.den.is_one() {
            return self.num.to_string();
        }
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if has_top_level_sum(&s) {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

/// Whether `s` contains a `+` outside parentheses.
pub(crate) fn has_top_level_sum(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.field());
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self * &o.inv().expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        let f = FiniteField::new(5).unwrap();
        let num = Poly::new(&f, vec![0, 2]); // 2t
        let den = Poly::new(&f, vec![0, 0, 3]); // 3t^2
        let r = RatFunc::new(num, den);
        assert_eq!(r.den(), &Poly::t(&f));
        assert_eq!(r.num(), &Poly::constant(&f, f.div(2, 3).unwrap()));
        assert_eq!(r.render(), "4/t");
    }

    #[test]
    fn arithmetic() {
        let f = FiniteField::new(3).unwrap();
        let t = RatFunc::t(&f);
        let one = RatFunc::one(&f);
        let a = &one / &t;
        let b = &one / &(&t + &one);
        // 1/t - 1/(t+1) = 1/(t(t+1))
        let lhs = &a - &b;
        let rhs = &one / &(&t * &(&t + &one));
        assert_eq!(lhs, rhs);
        assert_eq!(&(&lhs * &rhs.inv().unwrap()), &one);
        assert_eq!(RatFunc::monomial(&f, 2, -3).render(), "2/t^3");
    }
}

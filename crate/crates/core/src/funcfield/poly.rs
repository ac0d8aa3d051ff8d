//! Dense univariate polynomials over `F_q` in the variable `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Elem, FiniteField};

/// Hard cap on polynomial degrees produced by parsing and powering.
pub const MAX_DEGREE: usize = 4096;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FiniteField,
    // little-endian, no trailing zeros
    coeffs: Vec<Elem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Poly {
    pub fn new(field: &FiniteField, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FiniteField) -> Self {
        Poly { field: field.clone(), coeffs: vec![] }
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &FiniteField, c: Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// `c·t^k`
    pub fn monomial(field: &FiniteField, c: Elem, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(field, v)
    }

    /// The variable `t`.
    pub fn t(field: &FiniteField) -> Self {
        Self::monomial(field, 1, 1)
    }

    /// `t - a`
    pub fn linear(field: &FiniteField, a: Elem) -> Self {
        Self::new(field, vec![field.neg(a), 1])
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Lowest exponent with a non-zero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lc()) {
            None => self.clone(),
            Some(i) => self.scale(i),
        }
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Poly::new(&self.field, v)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let v = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, f.from_int(i as i64))).collect();
        Poly::new(f, v)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let inv = f.inv(d.lc()).unwrap();
        let mut r = self.coeffs.clone();
        let mut qv = vec![0; r.len() - dd];
        for i in (0..qv.len()).rev() {
            let c = f.mul(r[i + dd], inv);
            qv[i] = c;
            if c != 0 {
                for (j, &dj) in d.coeffs.iter().enumerate() {
                    r[i + j] = f.sub(r[i + j], f.mul(c, dj));
                }
            }
        }
        r.truncate(dd);
        (Poly::new(f, qv), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact division, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match f.inv(r0.lc()) {
            None => (r0, s0, t0),
            Some(i) => (r0.scale(i), s0.scale(i), t0.scale(i)),
        }
    }

    /// Inverse modulo `m`, if coprime.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.ext_gcd(m);
        g.is_one().then(|| s.rem(m))
    }

    /// `self(g(t))`
    pub fn compose(&self, g: &Poly) -> Poly {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Poly::zero(f), |acc, &c| &(&acc * g) + &Poly::constant(f, c))
    }

    /// Multiplicity of the irreducible `pi` in `self` (self non-zero), and
    /// the cofactor.
    pub fn split_power(&self, pi: &Poly) -> (u32, Poly) {
        let mut n = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(pi);
            if !r.is_zero() {
                return (n, cur);
            }
            cur = q;
            n += 1;
        }
    }

    /// Coefficient-wise `x ↦ x^p` combined with `t ↦ t^p`, i.e. the
    /// Frobenius endomorphism `f ↦ f^p`.
    pub fn frobenius(&self) -> Poly {
        let f = &self.field;
        let p = f.p() as usize;
        let mut v = vec![0; self.coeffs.len().saturating_sub(1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * p] = f.frobenius(c);
        }
        Poly::new(f, v)
    }

    /// Reverse the coefficient list with respect to degree `n`.
    pub fn reverse(&self, n: usize) -> Poly {
        let mut v = vec![0; n + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[n - i] = c;
        }
        Poly::new(&self.field, v)
    }

    /// Render a field element as a coefficient multiplying a monomial.
    fn fmt_term(&self, c: Elem, mono: &str) -> String {
        let f = &self.field;
        if mono.is_empty() {
            let s = f.fmt_elem(c);
            return if f.is_monomial_elem(c) { s } else { format!("({s})") };
        }
        if c == 1 {
            return mono.to_string();
        }
        let s = f.fmt_elem(c);
        if f.is_monomial_elem(c) {
            format!("{s}*{mono}")
        } else {
            format!("({s})*{mono}")
        }
    }

    /// Canonical rendering in the variable `var`, highest degree first.
    pub fn fmt_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(self.fmt_term(c, &mono));
        }
        parts.join(" + ")
    }

    /// Whether the rendering is a single term.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|&&c| c != 0).count() <= 1
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with("t"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || o.is_zero() {
            return Poly::zero(f);
        }
        let mut v = vec![0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, v)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u32) -> FiniteField {
        FiniteField::new(q).unwrap()
    }

    #[test]
    fn render() {
        let f = gf(3);
        let p = Poly::new(&f, vec![1, 2, 0, 1]);
        assert_eq!(p.to_string(), "t^3 + 2*t + 1");
        let f4 = gf(4);
        let u = f4.u();
        let p = Poly::new(&f4, vec![f4.add(u, 1), u]);
        assert_eq!(p.to_string(), "u*t + (u + 1)");
    }

    #[test]
    fn division_and_gcd() {
        let f = gf(5);
        let a = Poly::new(&f, vec![1, 0, 1]); // t^2+1
        let b = Poly::new(&f, vec![2, 1]); // t+2 divides t^2+1 over F_5
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(&q * &b, a);
        let (g, s, t) = a.ext_gcd(&Poly::new(&f, vec![1, 1]));
        assert!(g.is_one());
        assert_eq!(&(&s * &a) + &(&t * &Poly::new(&f, vec![1, 1])), g);
    }

    proptest! {
        #[test]
        fn ring_laws(a in prop::collection::vec(0u16..7, 0..6), b in prop::collection::vec(0u16..7, 0..6), c in prop::collection::vec(0u16..7, 0..6)) {
            let f = gf(7);
            let (a, b, c) = (Poly::new(&f, a), Poly::new(&f, b), Poly::new(&f, c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                let (q, r) = a.div_rem(&b);
                prop_assert_eq!(&(&q * &b) + &r, a.clone());
                prop_assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
            }
        }

        #[test]
        fn frobenius_is_pth_power(a in prop::collection::vec(0u16..9, 0..5)) {
            let f = gf(9);
            let a = Poly::new(&f, a);
            prop_assert_eq!(a.frobenius(), a.pow(3));
        }
    }
}

//! Truncated Laurent series `Σ c_i u^i + O(u^prec)` over `F_q`, used as a
//! model of the completion of `F_q(t)` at a rational place.

use std::fmt;

use super::field::{Elem, FiniteField};
use super::place::PlaceValuation;
use super::poly::Poly;
use super::ratfunc::RatFunc;

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    field: FiniteField,
    start: i64,
    // coeffs[i] is the coefficient of u^(start+i); len = prec - start
    coeffs: Vec<Elem>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(u^{}: {:?} + O(u^{}))", self.start, self.coeffs, self.prec())
    }
}

impl Series {
    /// Coefficients of `u^start, u^(start+1), ...` known up to `O(u^prec)`.
    pub fn new(field: &FiniteField, start: i64, mut coeffs: Vec<Elem>, prec: i64) -> Self {
        let len = (prec - start).max(0) as usize;
        coeffs.resize(len, 0);
        let mut s = Series { field: field.clone(), start: start.min(prec), coeffs };
        s.normalize();
        s
    }

    pub fn zero(field: &FiniteField, prec: i64) -> Self {
        Series { field: field.clone(), start: prec, coeffs: vec![] }
    }

    pub fn constant(field: &FiniteField, c: Elem, prec: i64) -> Self {
        Self::new(field, 0, vec![c], prec)
    }

    /// `c·u^k + O(u^prec)`.
    pub fn monomial(field: &FiniteField, c: Elem, k: i64, prec: i64) -> Self {
        Self::new(field, k, vec![c], prec)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Exact valuation, or `None` if the series is `O(u^prec)`.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: i64) -> Elem {
        if i < self.start {
            return 0;
        }
        self.coeffs.get((i - self.start) as usize).copied().unwrap_or(0)
    }

    /// Leading coefficient of a non-zero series.
    pub fn lead(&self) -> Option<Elem> {
        self.coeffs.first().copied()
    }

    pub fn truncate(&self, prec: i64) -> Series {
        let prec = prec.min(self.prec());
        let v: Vec<Elem> = (self.start..prec).map(|i| self.coeff(i)).collect();
        Series::new(&self.field, self.start.min(prec), v, prec)
    }

    pub fn add(&self, o: &Series) -> Series {
        let prec = self.prec().min(o.prec());
        let start = self.start.min(o.start).min(prec);
        let f = &self.field;
        let v = (start..prec).map(|i| f.add(self.coeff(i), o.coeff(i))).collect();
        Series::new(f, start, v, prec)
    }

    pub fn neg(&self) -> Series {
        let f = &self.field;
        Series { field: f.clone(), start: self.start, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Elem) -> Series {
        let f = &self.field;
        Series::new(f, self.start, self.coeffs.iter().map(|&x| f.mul(x, c)).collect(), self.prec())
    }

    /// Multiply by `u^k`.
    pub fn shift(&self, k: i64) -> Series {
        Series { field: self.field.clone(), start: self.start + k, coeffs: self.coeffs.clone() }
    }

    /// Substitute `u = w^n`.
    pub fn inflate(&self, n: i64) -> Series {
        let mut v = vec![0; (self.coeffs.len().max(1) - 1) * n as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * n as usize] = c;
        }
        Series::new(&self.field, self.start * n, v, self.prec() * n)
    }

    pub fn mul(&self, o: &Series) -> Series {
        let f = &self.field;
        // O(u^a.prec)·o contributes at u^(a.prec + o.start) and vice versa
        let prec = match (self.valuation(), o.valuation()) {
            (Some(a), Some(b)) => (self.prec() + b).min(o.prec() + a),
            (Some(a), None) => o.prec() + a,
            (None, Some(b)) => self.prec() + b,
            (None, None) => self.prec() + o.prec(),
        };
        let start = self.start + o.start;
        if start >= prec {
            return Series::zero(f, prec);
        }
        let len = (prec - start) as usize;
        let mut v = vec![0; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate().take(len - i) {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Series::new(f, start, v, prec)
    }

    /// Multiplicative inverse of a series with known valuation.
    pub fn inv(&self) -> Option<Series> {
        let s = self.valuation()?;
        let f = &self.field;
        let n = self.coeffs.len();
        let c0 = f.inv(self.coeffs[0]).unwrap();
        let mut r = vec![0; n];
        r[0] = c0;
        for k in 1..n {
            let mut acc = 0;
            for j in 1..=k {
                acc = f.add(acc, f.mul(self.coeffs[j], r[k - j]));
            }
            r[k] = f.neg(f.mul(acc, c0));
        }
        Some(Series::new(f, -s, r, -s + n as i64))
    }

    pub fn div(&self, o: &Series) -> Option<Series> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u64) -> Series {
        let mut acc = Series::constant(&self.field, 1, i64::MAX / 4);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Polynomial `p(u)` as a series.
    pub fn from_poly(p: &Poly, prec: i64) -> Series {
        Series::new(p.field(), 0, p.coeffs().to_vec(), prec)
    }

    /// Expansion of `f` in the local parameter `u` at a rational place:
    /// `t = u + a` at `t - a`, `t = 1/u` at infinity. `prec` is the number of
    /// known coefficients beyond the leading term.
    pub fn expand(f: &RatFunc, place: &PlaceValuation, prec: i64) -> Option<Series> {
        let field = f.field();
        let (num, den) = match place {
            PlaceValuation::Finite(pi) if pi.degree() == Some(1) => {
                let a = field.neg(pi.coeff(0));
                let sub = Poly::new(field, vec![a, 1]);
                (f.num().compose(&sub), f.den().compose(&sub))
            }
            PlaceValuation::Infinite => {
                let dn = f.num().degree().unwrap_or(0);
                let dd = f.den().degree().unwrap();
                // f(1/u) = u^(dd - dn) rev(num)/rev(den)
                let n = f.num().reverse(dn);
                let d = f.den().reverse(dd);
                let shift = dd as i64 - dn as i64;
                return Some(Self::quotient(&n, &d, prec).shift(shift));
            }
            _ => return None,
        };
        Some(Self::quotient(&num, &den, prec))
    }

    fn quotient(num: &Poly, den: &Poly, prec: i64) -> Series {
        let field = num.field();
        if num.is_zero() {
            return Series::zero(field, prec);
        }
        let vn = num.low_degree().unwrap() as i64;
        let vd = den.low_degree().unwrap() as i64;
        let n = Series::from_poly(num, vn + prec);
        let d = Series::from_poly(den, vd + prec);
        n.div(&d).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let f = FiniteField::new(5).unwrap();
        // 1/(1 - t) at t = 0
        let r = RatFunc::new(Poly::one(&f), Poly::new(&f, vec![1, 4]));
        let s = Series::expand(&r, &PlaceValuation::at(&f, 0), 8).unwrap();
        assert_eq!(s.valuation(), Some(0));
        assert!((0..8).all(|i| s.coeff(i) == 1));
        assert_eq!(s.prec(), 8);
    }

    #[test]
    fn expansion_valuation_matches_place() {
        let f = FiniteField::new(3).unwrap();
        let t = RatFunc::t(&f);
        let one = RatFunc::one(&f);
        let r = &(&t.pow(3) + &one) / &(&t - &one).pow(2);
        for place in [PlaceValuation::at(&f, 0), PlaceValuation::at(&f, 1), PlaceValuation::at(&f, 2), PlaceValuation::Infinite] {
            let s = Series::expand(&r, &place, 10).unwrap();
            let v = place.valuation(&r).leading().unwrap();
            assert_eq!(Some(*v.numer()), s.valuation(), "{place}");
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = FiniteField::new(4).unwrap();
        let s = Series::new(&f, -2, vec![2, 1, 0, 3, 1], 3);
        let p = s.mul(&s.inv().unwrap());
        assert_eq!(p.valuation(), Some(0));
        assert_eq!(p.coeff(0), 1);
        assert!((1..p.prec()).all(|i| p.coeff(i) == 0));
    }
}

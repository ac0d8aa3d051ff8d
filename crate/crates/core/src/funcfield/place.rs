//! Valuations on `F_q(t)`: finite places, the place at infinity, Gauss
//! points, rank-2 composites and the trivial valuation.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::factor::is_irreducible;
use super::field::{Elem, FiniteField};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::FieldError;
use crate::valgroup::{Value, MAX_RANK};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PlaceValuation {
    /// The `π`-adic valuation for a monic irreducible `π`.
    Finite(Poly),
    /// `v_∞(f) = deg(den) - deg(num)`.
    Infinite,
    /// `v(Σ a_i t^i) = min { i·γ : a_i ≠ 0 }`, extended to quotients.
    Gauss(Rational64),
    /// Concatenation of a rank-1 valuation with a valuation on its residue
    /// field.
    Composite(Box<PlaceValuation>, Box<PlaceValuation>),
    Trivial,
}

impl PlaceValuation {
    pub fn finite(pi: Poly) -> Result<Self, FieldError> {
        let pi = pi.monic();
        if !is_irreducible(&pi) {
            return Err(FieldError::NotIrreducible(pi.to_string()));
        }
        Ok(PlaceValuation::Finite(pi))
    }

    /// The place `t - a`.
    pub fn at(field: &FiniteField, a: Elem) -> Self {
        PlaceValuation::Finite(Poly::linear(field, a))
    }

    pub fn composite(first: PlaceValuation, second: PlaceValuation) -> Result<Self, FieldError> {
        if first.rank() != 1 {
            return Err(FieldError::Invalid("composite needs a rank-1 first component".into()));
        }
        if first.rank() + second.rank() > MAX_RANK {
            return Err(FieldError::Invalid("composite rank exceeds 3".into()));
        }
        Ok(PlaceValuation::Composite(Box::new(first), Box::new(second)))
    }

    pub fn rank(&self) -> usize {
        match self {
            PlaceValuation::Composite(a, b) => a.rank() + b.rank(),
            _ => 1,
        }
    }

    /// Degree of the residue field over `F_q` for finite/infinite places.
    pub fn degree(&self) -> Option<usize> {
        match self {
            PlaceValuation::Finite(pi) => pi.degree(),
            PlaceValuation::Infinite => Some(1),
            _ => None,
        }
    }

    pub fn is_rational_place(&self) -> bool {
        self.degree() == Some(1)
    }

    /// Additive valuation of `f`; the zero value for `f = 0`.
    pub fn valuation(&self, f: &RatFunc) -> Value {
        if f.is_zero() {
            return Value::zero(self.rank());
        }
        match self {
            PlaceValuation::Finite(pi) => {
                let a = f.num().split_power(pi).0 as i64;
                let b = f.den().split_power(pi).0 as i64;
                Value::integer(a - b)
            }
            PlaceValuation::Infinite => {
                Value::integer(f.den().degree().unwrap() as i64 - f.num().degree().unwrap() as i64)
            }
            PlaceValuation::Gauss(g) => {
                let v = |p: &Poly| {
                    p.coeffs()
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, _)| Rational64::from_integer(i as i64) * g)
                        .min()
                        .unwrap()
                };
                Value::new(vec![v(f.num()) - v(f.den())]).unwrap()
            }
            PlaceValuation::Trivial => Value::integer(0),
            PlaceValuation::Composite(first, second) => {
                let v1 = first.valuation(f);
                let v2 = if first.residue_is_whole_field() && v1.leading() == Some(Rational64::zero()) {
                    second.valuation(f)
                } else {
                    // the residue field of a non-trivial place of F_q(t) is
                    // finite, so only the trivial valuation lives there
                    Value::one(second.rank())
                };
                v1.concat(&v2).unwrap()
            }
        }
    }

    /// Whether the residue field is `F_q(t)` itself (trivial valuation).
    fn residue_is_whole_field(&self) -> bool {
        match self {
            PlaceValuation::Trivial => true,
            PlaceValuation::Gauss(g) => g.is_zero(),
            _ => false,
        }
    }

    /// The ring-theoretic constituents used for ramification questions:
    /// returns places of kind Finite/Infinite, or an empty list for valuations
    /// trivial on `F_q(t)`.
    pub fn constituents(&self, field: &FiniteField) -> Vec<PlaceValuation> {
        match self {
            PlaceValuation::Finite(_) | PlaceValuation::Infinite => vec![self.clone()],
            PlaceValuation::Gauss(g) => {
                if g > &Rational64::zero() {
                    vec![PlaceValuation::Finite(Poly::t(field))]
                } else if g < &Rational64::zero() {
                    vec![PlaceValuation::Infinite]
                } else {
                    vec![]
                }
            }
            PlaceValuation::Trivial => vec![],
            PlaceValuation::Composite(a, b) => {
                let first = a.constituents(field);
                if first.is_empty() {
                    b.constituents(field)
                } else {
                    first
                }
            }
        }
    }

    /// The uniformizer at a finite or infinite place.
    pub fn uniformizer(&self, field: &FiniteField) -> Option<RatFunc> {
        match self {
            PlaceValuation::Finite(pi) => Some(RatFunc::from_poly(pi.clone())),
            PlaceValuation::Infinite => Some(RatFunc::t(field).inv().unwrap()),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            PlaceValuation::Finite(pi) => pi.to_string(),
            PlaceValuation::Infinite => "inf".into(),
            PlaceValuation::Gauss(g) if g.is_integer() => format!("gauss({})", g.numer()),
            PlaceValuation::Gauss(g) => format!("gauss({}/{})", g.numer(), g.denom()),
            PlaceValuation::Trivial => "trivial".into(),
            PlaceValuation::Composite(a, b) => format!("{};{}", a.render(), b.render()),
        }
    }
}

impl fmt::Display for PlaceValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Serialize for PlaceValuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::factor::factor;
    use proptest::prelude::*;

    fn rf(f: &FiniteField, n: Vec<u16>, d: Vec<u16>) -> RatFunc {
        RatFunc::new(Poly::new(f, n), Poly::new(f, d))
    }

    #[test]
    fn examples() {
        let f = FiniteField::new(5).unwrap();
        // t^2/(t - 1) at t
        let r = rf(&f, vec![0, 0, 1], vec![4, 1]);
        assert_eq!(PlaceValuation::at(&f, 0).valuation(&r), Value::integer(2));
        // (t^3 + 1)/t at infinity
        let r = rf(&f, vec![1, 0, 0, 1], vec![0, 1]);
        assert_eq!(PlaceValuation::Infinite.valuation(&r), Value::integer(-2));
        // Gauss(1/2) on t^2 + t
        let r = rf(&f, vec![0, 1, 1], vec![1]);
        assert_eq!(PlaceValuation::Gauss(Rational64::new(1, 2)).valuation(&r), Value::ratio(1, 2));
        assert!(PlaceValuation::Infinite.valuation(&RatFunc::zero(&f)).is_zero());
    }

    #[test]
    fn composite_convention() {
        let f = FiniteField::new(3).unwrap();
        let c = PlaceValuation::composite(PlaceValuation::Trivial, PlaceValuation::at(&f, 0)).unwrap();
        let r = rf(&f, vec![0, 0, 1], vec![1]);
        assert_eq!(c.valuation(&r), Value::from_ints(&[0, 2]));
        let c = PlaceValuation::composite(PlaceValuation::Infinite, PlaceValuation::at(&f, 0)).unwrap();
        assert_eq!(c.valuation(&r), Value::from_ints(&[-2, 0]));
        assert!(PlaceValuation::finite(Poly::new(&f, vec![0, 0, 1])).is_err());
    }

    fn places(f: &FiniteField) -> Vec<PlaceValuation> {
        vec![
            PlaceValuation::at(f, 0),
            PlaceValuation::at(f, 1),
            PlaceValuation::Finite(Poly::new(f, vec![1, 0, 1])),
            PlaceValuation::Infinite,
            PlaceValuation::Gauss(Rational64::new(1, 2)),
            PlaceValuation::Gauss(Rational64::new(-2, 3)),
            PlaceValuation::Trivial,
            PlaceValuation::composite(PlaceValuation::Trivial, PlaceValuation::Infinite).unwrap(),
            PlaceValuation::composite(PlaceValuation::at(f, 1), PlaceValuation::at(f, 0)).unwrap(),
        ]
    }

    fn arb_rf() -> impl Strategy<Value = (Vec<u16>, Vec<u16>)> {
        (prop::collection::vec(0u16..3, 0..6), prop::collection::vec(0u16..3, 1..5))
    }

    proptest! {
        #[test]
        fn valuation_axioms(a in arb_rf(), b in arb_rf()) {
            let f = FiniteField::new(3).unwrap();
            prop_assume!(a.1.iter().any(|&c| c != 0) && b.1.iter().any(|&c| c != 0));
            let x = rf(&f, a.0, a.1);
            let y = rf(&f, b.0, b.1);
            for v in places(&f) {
                let vx = v.valuation(&x);
                let vy = v.valuation(&y);
                prop_assert_eq!(v.valuation(&(&x * &y)), vx.mul(&vy).unwrap());
                let vs = v.valuation(&(&x + &y));
                let m = vx.min_additive(&vy).unwrap();
                prop_assert!(vs.cmp_additive(&m).unwrap() != std::cmp::Ordering::Less, "{} {} {}", v, x, y);
            }
        }

        #[test]
        fn product_formula(a in arb_rf()) {
            let f = FiniteField::new(3).unwrap();
            prop_assume!(a.1.iter().any(|&c| c != 0) && a.0.iter().any(|&c| c != 0));
            let x = rf(&f, a.0, a.1);
            let mut total = PlaceValuation::Infinite.valuation(&x).leading().unwrap();
            for p in [x.num(), x.den()] {
                if p.degree() == Some(0) { continue; }
                for (pi, _) in factor(p) {
                    let d = pi.degree().unwrap() as i64;
                    total += PlaceValuation::Finite(pi).valuation(&x).leading().unwrap() * d;
                }
            }
            prop_assert_eq!(total, Rational64::zero());
        }
    }
}

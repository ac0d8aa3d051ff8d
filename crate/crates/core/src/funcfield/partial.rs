//! Partial fractions with respect to a finite set of places.

use super::place::PlaceValuation;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::FieldError;

/// `f = Σ components + polynomial + rest`, where each component has poles
/// only at its place (for `inf`: a polynomial without constant term), and
/// `rest` is a proper fraction with poles outside the finite places given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub components: Vec<(PlaceValuation, RatFunc)>,
    pub polynomial: Poly,
    pub rest: RatFunc,
}

impl Split {
    pub fn resum(&self) -> RatFunc {
        let mut acc = &RatFunc::from_poly(self.polynomial.clone()) + &self.rest;
        for (_, c) in &self.components {
            acc = &acc + c;
        }
        acc
    }

    pub fn component(&self, place: &PlaceValuation) -> Option<&RatFunc> {
        self.components.iter().find(|(p, _)| p == place).map(|(_, c)| c)
    }
}

pub fn split_by_places(f: &RatFunc, places: &[PlaceValuation]) -> Result<Split, FieldError> {
    let field = f.field();
    let (quot, mut num) = f.num().div_rem(f.den());
    let mut den = f.den().clone();
    let mut components = Vec::new();
    let mut at_infinity = false;
    for place in places {
        match place {
            PlaceValuation::Finite(pi) => {
                let (k, cof) = den.split_power(pi);
                if k == 0 {
                    continue;
                }
                let pik = pi.pow(k as u64);
                // num/den = a/pi^k + b/cof with a·cof + b·pi^k = num
                let inv = cof.inv_mod(&pik).expect("coprime cofactor");
                let a = (&num * &inv).rem(&pik);
                let b = (&num - &(&a * &cof)).div_exact(&pik).expect("exact Bezout quotient");
                if !a.is_zero() {
                    components.push((place.clone(), RatFunc::new(a, pik)));
                }
                num = b;
                den = cof;
            }
            PlaceValuation::Infinite => at_infinity = true,
            other => return Err(FieldError::Invalid(format!("{other} is not a place of F_q(t)"))),
        }
    }
    let polynomial = if at_infinity {
        let c = Poly::constant(field, quot.coeff(0));
        let tail = &quot - &c;
        if !tail.is_zero() {
            components.push((PlaceValuation::Infinite, RatFunc::from_poly(tail)));
        }
        c
    } else {
        quot
    };
    Ok(Split { components, polynomial, rest: RatFunc::new(num, den) })
}

/// Strict variant: every finite pole of `f` must lie in `places`.
pub fn partial_fractions(
    f: &RatFunc,
    places: &[PlaceValuation],
) -> Result<(Vec<(PlaceValuation, RatFunc)>, Poly), FieldError> {
    let s = split_by_places(f, places)?;
    if !s.rest.is_zero() {
        return Err(FieldError::IrreducibleFactorizationFailure(s.rest.den().to_string()));
    }
    Ok((s.components, s.polynomial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::FiniteField;
    use proptest::prelude::*;

    #[test]
    fn classical_identity() {
        let f = FiniteField::new(5).unwrap();
        let t = Poly::t(&f);
        let t1 = Poly::linear(&f, f.neg(1)); // t + 1
        let r = RatFunc::new(Poly::one(&f), &t * &t1);
        let places = [PlaceValuation::Finite(t.clone()), PlaceValuation::Finite(t1.clone())];
        let (comps, poly) = partial_fractions(&r, &places).unwrap();
        assert!(poly.is_zero());
        assert_eq!(comps[0].1, RatFunc::new(Poly::one(&f), t));
        assert_eq!(comps[1].1, RatFunc::new(Poly::constant(&f, 4), t1));
    }

    #[test]
    fn over_f3() {
        // (t^2 + 1)/(t(t - 1)) = 1 + 2/t + 2/(t - 1) over F_3
        let f = FiniteField::new(3).unwrap();
        let t = Poly::t(&f);
        let tm1 = Poly::linear(&f, 1);
        let r = RatFunc::new(Poly::new(&f, vec![1, 0, 1]), &t * &tm1);
        let places = [PlaceValuation::Finite(t.clone()), PlaceValuation::Finite(tm1.clone())];
        let (comps, poly) = partial_fractions(&r, &places).unwrap();
        assert_eq!(poly, Poly::one(&f));
        assert_eq!(comps[0].1.render(), "2/t");
        assert_eq!(comps[1].1.render(), "2/(t + 2)");
    }

    #[test]
    fn regular_input_and_failure() {
        let f = FiniteField::new(3).unwrap();
        let r = RatFunc::from_poly(Poly::new(&f, vec![1, 2, 1]));
        let (comps, poly) = partial_fractions(&r, &[PlaceValuation::at(&f, 0)]).unwrap();
        assert!(comps.is_empty());
        assert_eq!(RatFunc::from_poly(poly), r);
        let bad = RatFunc::new(Poly::one(&f), Poly::new(&f, vec![1, 0, 1]));
        assert!(matches!(
            partial_fractions(&bad, &[PlaceValuation::at(&f, 0)]),
            Err(FieldError::IrreducibleFactorizationFailure(_))
        ));
    }

    proptest! {
        #[test]
        fn resums_exactly(n in prop::collection::vec(0u16..3, 0..7), d in prop::collection::vec(0u16..3, 1..6), e in 0usize..3) {
            let f = FiniteField::new(3).unwrap();
            let den = &Poly::new(&f, d) * &Poly::t(&f).pow(e as u64);
            prop_assume!(!den.is_zero());
            let r = RatFunc::new(Poly::new(&f, n), den);
            let places = vec![
                PlaceValuation::at(&f, 0),
                PlaceValuation::at(&f, 1),
                PlaceValuation::Finite(Poly::new(&f, vec![1, 0, 1])),
                PlaceValuation::Infinite,
            ];
            let s = split_by_places(&r, &places).unwrap();
            prop_assert_eq!(s.resum(), r.clone());
            prop_assert!(s.rest.num().degree() < s.rest.den().degree() || s.rest.is_zero());
            for (p, c) in &s.components {
                for q in &places {
                    if q != p {
                        prop_assert!(q.valuation(c).leading().unwrap() >= 0.into());
                    }
                }
            }
        }
    }
}

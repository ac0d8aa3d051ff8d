use proptest::prelude::*;
use tame_core::funcfield::{FiniteField, PlaceValuation, Poly, RatFunc};
use tame_core::huber::{HuberPairDesc, PointClass, RingDesc, SpaPoint};

const QS: [u32; 4] = [2, 3, 4, 5];

fn poly(f: &FiniteField, c: &[u16]) -> Poly {
    Poly::new(f, c.iter().map(|&x| x % f.q() as u16).collect())
}

fn ratfunc(f: &FiniteField, n: &[u16], d: &[u16]) -> RatFunc {
    let den = poly(f, d);
    let den = if den.is_zero() { Poly::one(f) } else { den };
    RatFunc::new(poly(f, n), den)
}

fn coeffs() -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(0u16..81, 1..4)
}

/// Places of degree one or two plus infinity.
fn candidate_places(f: &FiniteField) -> Vec<PlaceValuation> {
    let mut out = vec![PlaceValuation::Infinite];
    out.extend(f.elements().map(|a| PlaceValuation::at(f, a)));
    for a in f.elements() {
        for b in f.elements() {
            if let Ok(p) = PlaceValuation::finite(Poly::new(f, vec![b, a, 1])) {
                out.push(p);
            }
        }
    }
    out
}

fn pair_from_mask(f: &FiniteField, mask: u32) -> HuberPairDesc {
    let all = candidate_places(f);
    let mut s: Vec<PlaceValuation> =
        all.iter().take(6).enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p.clone()).collect();
    if s.is_empty() {
        s.push(all[1].clone());
    }
    HuberPairDesc::place_set(f, s).unwrap()
}

fn points(f: &FiniteField) -> Vec<SpaPoint> {
    let mut pts: Vec<SpaPoint> = candidate_places(f).into_iter().take(8).map(SpaPoint::new).collect();
    pts.push(SpaPoint::new(PlaceValuation::Trivial));
    pts.push(SpaPoint::new(PlaceValuation::composite(PlaceValuation::Trivial, PlaceValuation::at(f, 0)).unwrap()));
    pts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn plus_is_a_subring(qi in 0usize..4, mask in 1u32..64, a in (coeffs(), coeffs()), b in (coeffs(), coeffs())) {
        let f = FiniteField::new(QS[qi]).unwrap();
        let pair = pair_from_mask(&f, mask);
        let a = ratfunc(&f, &a.0, &a.1);
        let b = ratfunc(&f, &b.0, &b.1);
        if pair.in_plus(&a).unwrap() && pair.in_plus(&b).unwrap() {
            prop_assert!(pair.in_plus(&(&a + &b)).unwrap());
            prop_assert!(pair.in_plus(&(&a * &b)).unwrap());
            prop_assert!(pair.in_plus(&(-&a)).unwrap());
        }
        prop_assert!(pair.in_plus(&RatFunc::one(&f)).unwrap());
    }

    #[test]
    fn plus_is_integrally_closed(qi in 0usize..4, mask in 1u32..64, use_closure in any::<bool>(),
                                 x in (coeffs(), coeffs()), c in (coeffs(), coeffs())) {
        let f = FiniteField::new(QS[qi]).unwrap();
        let pair = if use_closure {
            HuberPairDesc::closure(&f, RingDesc::Field, vec![RatFunc::t(&f), ratfunc(&f, &[1], &[0, 1, 1])])
        } else {
            pair_from_mask(&f, mask)
        };
        let x = ratfunc(&f, &x.0, &x.1);
        let c = ratfunc(&f, &c.0, &c.1);
        prop_assume!(pair.in_plus(&c).unwrap());
        // x is a root of X^2 + cX - (x^2 + cx)
        let constant = &(&x * &x) + &(&c * &x);
        if pair.in_plus(&constant).unwrap() {
            prop_assert!(pair.in_plus(&x).unwrap());
        }
        if pair.in_plus(&x).unwrap() {
            prop_assert!(pair.in_plus(&constant).unwrap());
        }
    }

    #[test]
    fn rational_subsets_cover(qi in 0usize..4, mask in 1u32..64, g in (coeffs(), coeffs())) {
        let f = FiniteField::new(QS[qi]).unwrap();
        let pair = pair_from_mask(&f, mask);
        let g = ratfunc(&f, &g.0, &g.1);
        prop_assume!(!g.is_zero());
        let (plus, minus, both) = pair.rational_subset(&g).unwrap();
        prop_assert!(plus.in_plus(&g).unwrap());
        prop_assert!(minus.in_plus(&g.inv().unwrap()).unwrap());
        for x in points(&f) {
            let member = |p: &HuberPairDesc| matches!(p.classify_point(&x).unwrap(), PointClass::Member(_));
            if member(&pair) {
                prop_assert!(member(&plus) || member(&minus));
                prop_assert_eq!(member(&both), member(&plus) && member(&minus));
            }
        }
    }

    #[test]
    fn classification_agrees_with_membership(qi in 0usize..4, mask in 1u32..64, use_closure in any::<bool>(),
                                             a in (coeffs(), coeffs())) {
        let f = FiniteField::new(QS[qi]).unwrap();
        let pair = if use_closure {
            HuberPairDesc::closure(&f, RingDesc::Poly, vec![RatFunc::t(&f)])
        } else {
            pair_from_mask(&f, mask)
        };
        let a = if use_closure { RatFunc::from_poly(poly(&f, &a.0)) } else { ratfunc(&f, &a.0, &a.1) };
        for x in points(&f) {
            match pair.classify_point(&x).unwrap() {
                PointClass::Member(_) => {
                    if pair.in_plus(&a).unwrap() {
                        prop_assert!(x.valuation.valuation(&a).is_bounded());
                    }
                }
                PointClass::NotMember(w) => {
                    prop_assert!(pair.in_plus(&w).unwrap());
                    prop_assert!(!x.valuation.valuation(&w).is_bounded());
                }
            }
        }
    }
}

#[test]
fn infinity_against_two_integral_structures() {
    let f = FiniteField::new(3).unwrap();
    let inf = SpaPoint::new(PlaceValuation::Infinite);
    let constants = HuberPairDesc::closure(&f, RingDesc::Poly, vec![]);
    let polys = HuberPairDesc::closure(&f, RingDesc::Poly, vec![RatFunc::t(&f)]);
    assert!(matches!(constants.classify_point(&inf).unwrap(), PointClass::Member(_)));
    assert_eq!(polys.classify_point(&inf).unwrap(), PointClass::NotMember(RatFunc::t(&f)));
}

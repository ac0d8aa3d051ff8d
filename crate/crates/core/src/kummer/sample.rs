//! Seeded random elements of `B_n` clustered around the integrality
//! thresholds, for oracle sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{KummerAlgebra, TensorElement};
use crate::funcfield::RatFunc;
use crate::valgroup::ceil;

/// Random element of `B_level` whose support generates a subgroup of order
/// at most `max_subgroup`, with 1 to `max_terms` terms. Each coefficient is
/// `c·u^k·(1 + b·u)` with `k` within one of the term's threshold.
pub fn random_element<R: Rng>(
    alg: &KummerAlgebra,
    level: usize,
    max_subgroup: usize,
    max_terms: usize,
    rng: &mut R,
) -> TensorElement {
    let d = alg.degree();
    let field = alg.field().clone();
    let q = field.q() as u16;
    let group = loop {
        let ngen = rng.gen_range(1..=2);
        let gens: Vec<Vec<usize>> = (0..ngen).map(|_| (0..level).map(|_| rng.gen_range(0..d)).collect()).collect();
        let refs: Vec<&Vec<usize>> = gens.iter().collect();
        let h = alg.generated_subgroup(level, &refs);
        if h.len() <= max_subgroup {
            break h;
        }
    };
    let nterms = rng.gen_range(1..=max_terms.min(group.len()));
    let keys: Vec<&Vec<usize>> = group.choose_multiple(rng, nterms).collect();
    let u = alg.uniformizer();
    let mut x = TensorElement::zero(level);
    for key in keys {
        let k = ceil(alg.threshold(key)) + [-1, 0, 0, 1][rng.gen_range(0..4)];
        let c = rng.gen_range(1..q);
        let b = rng.gen_range(0..q);
        let unit = &RatFunc::one(&field) + &u.scale(b);
        x.add_term(key.clone(), &u.pow(k).scale(c) * &unit);
    }
    x
}

/// The oracle-sweep configurations: for each `m` in 2..=5 one rank-1
/// algebra and one rank-2 algebra with a coprime partner exponent, over the
/// least field containing the needed roots of unity.
pub fn standard_configs() -> Vec<(u32, Vec<(u32, &'static str)>)> {
    vec![
        (3, vec![(2, "t + t^2")]),
        (4, vec![(3, "t + t^2")]),
        (5, vec![(4, "t + t^2")]),
        (11, vec![(5, "t + t^2")]),
        (7, vec![(2, "t + t^2"), (3, "2*t")]),
        (7, vec![(3, "t + t^2"), (2, "3*t")]),
        (13, vec![(4, "t + t^2"), (3, "2*t")]),
        (11, vec![(5, "t + t^2"), (2, "2*t")]),
    ]
}

/// Build one of [`standard_configs`] at the place `t`.
pub fn build_config(q: u32, gens: &[(u32, &str)]) -> KummerAlgebra {
    let f = crate::funcfield::FiniteField::new(q).unwrap();
    let gens = gens.iter().map(|(m, a)| (*m, crate::funcfield::parse_ratfunc(&f, a).unwrap())).collect();
    KummerAlgebra::new(&f, crate::funcfield::PlaceValuation::at(&f, 0), gens).unwrap()
}

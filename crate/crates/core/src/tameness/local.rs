//! Branches of a separable polynomial over the completion of `F_q(t)` at a
//! place, via Newton polygons.
//!
//! Coefficients are kept exact: after base change to `F_Q` and the
//! substitution `u = w^N` they are rational functions in `w`, valued at
//! `w = 0`. First pass (`N = 1`): a segment whose residual factor is simple
//! gives one branch directly (Ore); a repeated linear factor on an integral
//! slope is peeled off by a `K`-rational shift `T ↦ c·u^s + T`. Anything else
//! falls back to the second pass, which enlarges `N` and `F_Q` until every
//! root is an explicit Puiseux prefix and reads `e` and `f` off the Galois
//! orbits of those prefixes.

use num_integer::Integer;
use num_rational::Rational64;

use crate::funcfield::field::MAX_Q;
use crate::funcfield::{factor, Elem, FiniteField, PlaceValuation, Poly, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawBranch {
    pub e: u32,
    pub f: u32,
    /// Valuation of the roots on the branch; `None` for the root `0`.
    pub slope: Option<Rational64>,
}

#[derive(Debug, PartialEq, Eq)]
pub enum LocalError {
    /// Wild ramification that the first pass cannot resolve.
    WildIrregular,
    /// Needs a residue field beyond the supported table size.
    FieldTooLarge(u64),
}

enum Stop {
    Extend { ram: u32, deg: u32 },
    Wild,
}

fn map_poly(p: &Poly, emb: &[Elem], big: &FiniteField) -> Poly {
    Poly::new(big, p.coeffs().iter().map(|&c| emb[c as usize]).collect())
}

/// Coefficients as rational functions in `w`, `u = w^n`, over `big`.
fn localize(poly: &[RatFunc], place: &PlaceValuation, big: &FiniteField, n: usize) -> Vec<RatFunc> {
    let small = poly[0].field();
    let emb = small.embedding(big).expect("residue field embeds");
    let wn = Poly::monomial(big, 1, n);
    poly.iter()
        .map(|c| {
            let (num, den) = (map_poly(c.num(), &emb, big), map_poly(c.den(), &emb, big));
            match place {
                PlaceValuation::Finite(pi) => {
                    let pi = map_poly(pi, &emb, big);
                    let a = big.elements().find(|&a| pi.eval(a) == 0).expect("place splits over its residue field");
                    let sub = &wn + &Poly::constant(big, a);
                    RatFunc::new(num.compose(&sub), den.compose(&sub))
                }
                _ => {
                    if num.is_zero() {
                        return RatFunc::zero(big);
                    }
                    // t = w^{-n}
                    let (dn, dd) = (num.degree().unwrap(), den.degree().unwrap());
                    let r = RatFunc::new(num.reverse(dn).compose(&wn), den.reverse(dd).compose(&wn));
                    &r * &RatFunc::monomial(big, 1, (n * dd) as i64 - (n * dn) as i64)
                }
            }
        })
        .collect()
}

fn valuation(c: &RatFunc) -> Option<i64> {
    (!c.is_zero()).then(|| c.num().low_degree().unwrap() as i64 - c.den().low_degree().unwrap() as i64)
}

fn lead(c: &RatFunc) -> Elem {
    let f = c.field();
    f.div(c.num().coeff(c.num().low_degree().unwrap()), c.den().coeff(c.den().low_degree().unwrap())).unwrap()
}

/// `g(c·w^h + T)`.
fn shift(g: &[RatFunc], field: &FiniteField, c: Elem, h: i64) -> Vec<RatFunc> {
    let x = RatFunc::monomial(field, c, h);
    let mut res: Vec<RatFunc> = vec![g.last().unwrap().clone()];
    for gi in g.iter().rev().skip(1) {
        let mut next = Vec::with_capacity(res.len() + 1);
        for k in 0..=res.len() {
            let mut acc = if k == 0 { gi.clone() } else { res[k - 1].clone() };
            if k < res.len() {
                acc = &acc + &(&res[k] * &x);
            }
            next.push(acc);
        }
        res = next;
    }
    res
}

struct Ctx<'a> {
    field: &'a FiniteField,
    p: u32,
    full: bool,
}

enum Leaf {
    Branch(RawBranch),
    Root(Vec<(i64, Elem)>),
}

fn cross(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i128 {
    (b.0 - a.0) as i128 * (c.1 - a.1) as i128 - (b.1 - a.1) as i128 * (c.0 - a.0) as i128
}

/// Roots of `g` with valuation above `floor`; there are exactly `n` of them.
fn analyze(
    ctx: &Ctx,
    g: &[RatFunc],
    n: usize,
    floor: Option<Rational64>,
    prefix: &[(i64, Elem)],
    out: &mut Vec<Leaf>,
) -> Result<(), Stop> {
    let root_slope = |lambda: Rational64| prefix.first().map_or(lambda, |&(k, _)| Rational64::from(k));
    if g[0].is_zero() {
        // the prefix itself is a root
        out.push(if ctx.full {
            Leaf::Root(prefix.to_vec())
        } else {
            Leaf::Branch(RawBranch { e: 1, f: 1, slope: prefix.first().map(|&(k, _)| Rational64::from(k)) })
        });
        return if n > 1 { analyze(ctx, &g[1..], n - 1, floor, prefix, out) } else { Ok(()) };
    }
    let pts: Vec<(i64, i64)> = (0..=n).filter_map(|i| valuation(&g[i]).map(|v| (i as i64, v))).collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    for w in hull.windows(2) {
        let ((i1, v1), (i2, v2)) = (w[0], w[1]);
        let slope = Rational64::new(v2 - v1, i2 - i1);
        let lambda = -slope;
        debug_assert!(floor.map_or(true, |fl| lambda > fl));
        let e = *lambda.denom();
        let len = (i2 - i1) / e;
        let coeffs: Vec<Elem> = (0..=len)
            .map(|j| {
                let i = i1 + j * e;
                let on_line = Rational64::from(v1) + slope * (i - i1);
                match valuation(&g[i as usize]) {
                    Some(v) if Rational64::from(v) == on_line => lead(&g[i as usize]),
                    _ => 0,
                }
            })
            .collect();
        let factors = factor(&Poly::new(ctx.field, coeffs));
        if ctx.full {
            if e > 1 {
                return Err(if e as u32 % ctx.p == 0 { Stop::Wild } else { Stop::Extend { ram: e as u32, deg: 1 } });
            }
            let deg = factors.iter().map(|(phi, _)| phi.degree().unwrap() as u32).fold(1, |a, b| a.lcm(&b));
            if deg > 1 {
                return Err(Stop::Extend { ram: 1, deg });
            }
        }
        let h = *lambda.numer();
        for (phi, mult) in factors {
            let linear = phi.degree() == Some(1);
            if mult == 1 {
                out.push(if ctx.full {
                    let mut path = prefix.to_vec();
                    path.push((h, ctx.field.neg(phi.coeff(0))));
                    Leaf::Root(path)
                } else {
                    Leaf::Branch(RawBranch { e: e as u32, f: phi.degree().unwrap() as u32, slope: Some(root_slope(lambda)) })
                });
            } else if linear && e == 1 {
                let c = ctx.field.neg(phi.coeff(0));
                let mut path = prefix.to_vec();
                path.push((h, c));
                let shifted = shift(g, ctx.field, c, h);
                analyze(ctx, &shifted, mult as usize, Some(lambda), &path, out)?;
            } else if e as u32 % ctx.p == 0 {
                return Err(Stop::Wild);
            } else {
                return Err(Stop::Extend { ram: e as u32, deg: phi.degree().unwrap() as u32 });
            }
        }
    }
    Ok(())
}

fn multiplicative_order(q: u64, n: u64) -> u32 {
    let mut x = q % n;
    let mut k = 1;
    while x != 1 % n {
        x = x * q % n;
        k += 1;
    }
    k
}

/// Branches of the monic separable `poly` (non-zero constant term) at a
/// finite or infinite place.
pub fn local_branches(poly: &[RatFunc], place: &PlaceValuation) -> Result<Vec<RawBranch>, LocalError> {
    let base = poly[0].field();
    let d = place.degree().unwrap_or(1) as u32;
    let qv = (base.q() as u64).pow(d);
    if qv > MAX_Q as u64 {
        return Err(LocalError::FieldTooLarge(qv));
    }
    let loc = FiniteField::new(qv as u32).unwrap();
    let deg = poly.len() - 1;
    let ctx = Ctx { field: &loc, p: base.p(), full: false };
    let g = localize(poly, place, &loc, 1);
    let mut leaves = Vec::new();
    match analyze(&ctx, &g, deg, None, &[], &mut leaves) {
        Ok(()) => {
            return Ok(leaves
                .into_iter()
                .map(|l| match l {
                    Leaf::Branch(b) => b,
                    Leaf::Root(_) => unreachable!(),
                })
                .collect())
        }
        Err(Stop::Wild) => return Err(LocalError::WildIrregular),
        Err(Stop::Extend { .. }) => {}
    }

    // second pass over F_Q((w)), w^n = u
    let (mut n, mut j) = (1u32, 1u32);
    loop {
        j = j.lcm(&multiplicative_order(qv, n as u64));
        let big_q = qv.checked_pow(j).unwrap_or(u64::MAX);
        if big_q > MAX_Q as u64 {
            return Err(LocalError::FieldTooLarge(big_q));
        }
        let big = FiniteField::new(big_q as u32).unwrap();
        let ctx = Ctx { field: &big, p: base.p(), full: true };
        let g = localize(poly, place, &big, n as usize);
        let mut leaves = Vec::new();
        match analyze(&ctx, &g, deg, None, &[], &mut leaves) {
            Ok(()) => {
                let roots: Vec<Vec<(i64, Elem)>> = leaves
                    .into_iter()
                    .map(|l| match l {
                        Leaf::Root(r) => r,
                        Leaf::Branch(_) => unreachable!(),
                    })
                    .collect();
                return Ok(orbits(&big, qv, n, &roots));
            }
                Err(Stop::Wild) => return Err(LocalError::WildIrregular),
            Err(Stop::Extend { ram, deg }) => {
                n *= ram;
                j *= deg;
            }
        }
    }
}

/// Group Puiseux prefixes into orbits under Frobenius `c ↦ c^qv` and the
/// twist `w ↦ ζ_n w`.
fn orbits(field: &FiniteField, qv: u64, n: u32, roots: &[Vec<(i64, Elem)>]) -> Vec<RawBranch> {
    let zeta = field.root_of_unity(n).unwrap();
    let frob = |r: &Vec<(i64, Elem)>| r.iter().map(|&(k, c)| (k, field.pow(c, qv))).collect::<Vec<_>>();
    let twist = |r: &Vec<(i64, Elem)>| {
        r.iter().map(|&(k, c)| (k, field.mul(c, field.pow(zeta, k.rem_euclid(n as i64) as u64)))).collect::<Vec<_>>()
    };
    // the root tree is Galois-equivariant, so images are again leaves
    let find = |r: &Vec<(i64, Elem)>| roots.iter().position(|x| x == r).expect("conjugate prefix is a root");
    let mut seen = vec![false; roots.len()];
    let mut out = Vec::new();
    for start in 0..roots.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < orbit.len() {
            let r = &roots[orbit[k]];
            for img in [frob(r), twist(r)] {
                let i = find(&img);
                if !seen[i] {
                    seen[i] = true;
                    orbit.push(i);
                }
            }
            k += 1;
        }
        let mut e = 1;
        let mut x = twist(&roots[start]);
        while x != roots[start] {
            x = twist(&x);
            e += 1;
        }
        let slope = roots[start].first().map(|&(k, _)| Rational64::new(k, n as i64));
        out.push(RawBranch { e, f: orbit.len() as u32 / e, slope });
    }
    out
}

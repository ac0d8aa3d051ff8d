//! The Laurent cover `0 → A⁺ → A⁺[f] ⊕ A⁺[1/f] → A⁺[f, 1/f] → 0` of a
//! place-set pair.
//!
//! Window `W`: functions `g/D` with `D = Π π_P^W` over a fixed finite set
//! `Σ` of places (those of `S`, one auxiliary place and `∞`) and
//! `deg g <= deg D + W`, i.e. poles of order at most `W`, only on `Σ`.
//! Each piece is cut out by linear conditions on the coefficients of `g`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{stabilize, CechError, CohomologyReport, Window};
use crate::funcfield::{split_by_places, Elem, FiniteField, PlaceValuation, Poly, RatFunc};
use crate::huber::HuberPairDesc;
use crate::linalg;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    pub h: String,
    pub plus_part: String,
    pub minus_part: String,
    /// `plus_part − minus_part = h`, with each part in its ring.
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaurentCech {
    pub report: CohomologyReport,
    /// Renderings of `A⁺[f]`, `A⁺[1/f]`, `A⁺[f, 1/f]`.
    pub pieces: Vec<String>,
    pub splits: Vec<SplitWitness>,
}

impl LaurentCech {
    pub fn exact(&self) -> bool {
        self.report.higher_vanish() && self.splits.iter().all(|s| s.ok)
    }
}

struct WindowSpace {
    field: FiniteField,
    finite: Vec<Poly>,
    w: usize,
    den: Poly,
    n: usize,
}

impl WindowSpace {
    fn new(field: &FiniteField, finite: &[Poly], w: usize) -> Self {
        let den = finite.iter().fold(Poly::one(field), |acc, pi| &acc * &pi.pow(w as u64));
        let n = den.degree().unwrap() + w + 1;
        WindowSpace { field: field.clone(), finite: finite.to_vec(), w, den, n }
    }

    /// Basis (as coefficient vectors of `g`) of the functions in the window
    /// with `v_P >= 0` for every `P` in `places`.
    fn subspace(&self, places: &[PlaceValuation]) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for p in places {
            match p {
                PlaceValuation::Finite(pi) => {
                    debug_assert!(self.finite.contains(pi));
                    let m = pi.pow(self.w as u64);
                    let dm = m.degree().unwrap();
                    // columns: t^j mod π^W
                    let mut cols = Vec::with_capacity(self.n);
                    let mut x = Poly::one(f);
                    for _ in 0..self.n {
                        cols.push((0..dm).map(|r| x.coeff(r)).collect::<Vec<_>>());
                        x = x.shift(1).rem(&m);
                    }
                    rows.extend((0..dm).map(|r| cols.iter().map(|c| c[r]).collect()));
                }
                PlaceValuation::Infinite => {
                    let dd = self.den.degree().unwrap();
                    rows.extend((dd + 1..self.n).map(|j| (0..self.n).map(|i| (i == j) as Elem).collect()));
                }
                _ => unreachable!("place sets hold places"),
            }
        }
        linalg::kernel(f, &rows, self.n)
    }

    fn element(&self, g: &[Elem]) -> RatFunc {
        RatFunc::new(Poly::new(&self.field, g.to_vec()), self.den.clone())
    }
}

struct Setup {
    field: FiniteField,
    finite: Vec<Poly>,
    s: Vec<PlaceValuation>,
    pieces: [HuberPairDesc; 3],
}

impl Setup {
    fn dims(&self, window: Window) -> Vec<usize> {
        let ws = WindowSpace::new(&self.field, &self.finite, window.radius() as usize);
        let plus = ws.subspace(self.pieces[0].places().unwrap());
        let minus = ws.subspace(self.pieces[1].places().unwrap());
        let both = ws.subspace(self.pieces[2].places().unwrap());
        // d(b, c) = b − c: its rank is dim(M⁺ + M⁻)
        let rows: Vec<Vec<Elem>> = plus.iter().chain(&minus).cloned().collect();
        let r = linalg::rank(&self.field, &rows);
        vec![plus.len() + minus.len() - r, both.len() - r]
    }

    fn sections(&self, window: Window) -> usize {
        WindowSpace::new(&self.field, &self.finite, window.radius() as usize).subspace(&self.s).len()
    }
}

pub fn laurent_cech(pair: &HuberPairDesc, f: &RatFunc) -> Result<LaurentCech, CechError> {
    laurent_cech_with(pair, f, Window::default(), 16, 0)
}

/// Window homology of the Laurent cover plus `witnesses` random elements of
/// `A⁺[f, 1/f]` split by partial fractions into `A⁺[f]` and `A⁺[1/f]`.
pub fn laurent_cech_with(
    pair: &HuberPairDesc,
    f: &RatFunc,
    window: Window,
    witnesses: usize,
    seed: u64,
) -> Result<LaurentCech, CechError> {
    let (plus, minus, both) = pair.rational_subset(f)?;
    let field = pair.field.clone();
    let s = pair.places().unwrap().to_vec();
    let mut finite: Vec<Poly> = s
        .iter()
        .filter_map(|p| match p {
            PlaceValuation::Finite(pi) => Some(pi.clone()),
            _ => None,
        })
        .collect();
    if let Some(a) = field.elements().find(|&a| !finite.contains(&Poly::linear(&field, a))) {
        finite.push(Poly::linear(&field, a));
    }
    let setup = Setup { field: field.clone(), finite, s, pieces: [plus, minus, both] };
    let report = stabilize(window, |w| Ok(setup.dims(w)), |w| Some(("≅ A⁺".to_string(), setup.sections(w))))?;

    // poles at places where f has positive valuation go to the A⁺[1/f] side
    let to_minus: Vec<PlaceValuation> = setup.pieces[0]
        .places()
        .unwrap()
        .iter()
        .filter(|p| !setup.pieces[1].places().unwrap().contains(p))
        .cloned()
        .collect();
    let ws = WindowSpace::new(&field, &setup.finite, window.radius() as usize);
    let basis = ws.subspace(setup.pieces[2].places().unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.q() as Elem;
    let mut splits = Vec::new();
    for _ in 0..witnesses {
        let mut g = vec![0; ws.n];
        for b in &basis {
            let c = rng.gen_range(0..q);
            for (x, &y) in g.iter_mut().zip(b) {
                *x = field.add(*x, field.mul(c, y));
            }
        }
        let h = ws.element(&g);
        let split = split_by_places(&h, &to_minus)?;
        let c = split.components.iter().fold(RatFunc::zero(&field), |acc, (_, x)| &acc - x);
        let b = &h + &c;
        let ok = &b - &c == h && setup.pieces[0].in_plus(&b)? && setup.pieces[1].in_plus(&c)?;
        splits.push(SplitWitness { h: h.render(), plus_part: b.render(), minus_part: c.render(), ok });
    }
    Ok(LaurentCech { report, pieces: setup.pieces.iter().map(|p| p.render()).collect(), splits })
}

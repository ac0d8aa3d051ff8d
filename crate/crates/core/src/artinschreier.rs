//! The Artin–Schreier map `℘(x) = x^p − x` on rings of functions over
//! `F_q`, its cokernel, and the tame `Z/p`-cohomology tables built from it.
//!
//! Cokernels are truncated by pole order: `V_N` is the space of functions
//! regular away from a finite pole set `Σ` with poles of order at most `N`.
//! Since `℘` multiplies pole orders by `p`, `℘(g) ∈ V_N` iff
//! `g ∈ V_{⌊N/p⌋}`, so `V_N / ℘(V_{⌊N/p⌋})` embeds in the full cokernel.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cech::{cech_o_plus, cech_p1_o, CechError, ChartCover, Window};
use crate::funcfield::parse::parse_field;
use crate::funcfield::{parse_ratfunc, Elem, FieldError, FiniteField, PlaceValuation, Poly, RatFunc};
use crate::huber::{HuberError, HuberPairDesc};
use crate::linalg;

pub const MAX_DEGREE_BOUND: usize = 512;

/// Truncation bounds used by the cohomology tables.
pub const DEFAULT_BOUNDS: [usize; 4] = [8, 16, 32, 64];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AsError {
    #[error("oracle mismatch for {ring} at N = {n}: linear algebra gives {linear_algebra}, canonical forms give {canonical}")]
    OracleMismatch { ring: String, n: usize, linear_algebra: usize, canonical: usize },
    #[error("degree bound {0} exceeds {MAX_DEGREE_BOUND}")]
    DegreeBound(usize),
    #[error("unsupported descriptor: {0}")]
    UnsupportedDescriptor(String),
    #[error("{0}")]
    Cech(#[from] CechError),
    #[error("{0}")]
    Huber(#[from] HuberError),
    #[error("{0}")]
    Field(#[from] FieldError),
}

/// Canonical representative of a class in `F_q[t] / ℘(F_q[t])`: no
/// exponent `>= 1` is divisible by `p`, and the constant term is
/// `constant_class · c₀` for the fixed element `c₀` of trace 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpClass {
    pub representative: Poly,
    pub constant_class: u32,
}

/// Least element of `F_q` with absolute trace 1; its `F_p`-multiples are
/// a transversal of `℘(F_q) = ker(Tr)`.
pub fn trace_one(f: &FiniteField) -> Elem {
    f.elements().find(|&c| f.trace(c) == 1).expect("the trace is surjective")
}

pub fn wp_reduce(g: &Poly) -> WpClass {
    let f = g.field();
    let p = f.p() as usize;
    let mut c = g.coeffs().to_vec();
    // a·t^{pk} ≡ a^{1/p}·t^k, top-down so each exponent is visited once
    for e in (1..c.len()).rev() {
        if e % p == 0 && c[e] != 0 {
            let r = f.frobenius_root(c[e]);
            c[e] = 0;
            c[e / p] = f.add(c[e / p], r);
        }
    }
    let class = if c.is_empty() { 0 } else { f.trace(c[0]) as u32 };
    if !c.is_empty() {
        c[0] = f.mul(f.from_int(class as i64), trace_one(f));
    }
    WpClass { representative: Poly::new(f, c), constant_class: class }
}

/// `℘(g) = g^p − g`.
pub fn wp(g: &RatFunc) -> RatFunc {
    &g.pow(g.field().p() as i64) - g
}

#[derive(Clone, Debug)]
pub enum CokerRing {
    /// Functions on `P¹` regular away from `poles`; `F_q` when empty.
    Regular { field: FiniteField, poles: Vec<PlaceValuation> },
    /// `∩_{p ∈ S} O_p`, truncated to poles at the degree-1 places and `∞`
    /// outside `S`.
    PlaceSet(HuberPairDesc),
}

impl CokerRing {
    pub fn constants(f: &FiniteField) -> Self {
        CokerRing::Regular { field: f.clone(), poles: vec![] }
    }

    pub fn polynomials(f: &FiniteField) -> Self {
        CokerRing::Regular { field: f.clone(), poles: vec![PlaceValuation::Infinite] }
    }

    pub fn field(&self) -> &FiniteField {
        match self {
            CokerRing::Regular { field, .. } => field,
            CokerRing::PlaceSet(p) => &p.field,
        }
    }

    /// Pole set `Σ` of the truncation spaces.
    pub fn window_poles(&self) -> Vec<PlaceValuation> {
        match self {
            CokerRing::Regular { poles, .. } => poles.clone(),
            CokerRing::PlaceSet(pair) => {
                let f = &pair.field;
                let s = pair.places().unwrap_or(&[]);
                f.elements()
                    .map(|a| PlaceValuation::at(f, a))
                    .chain([PlaceValuation::Infinite])
                    .filter(|p| !s.contains(p))
                    .collect()
            }
        }
    }

    /// `GF(q)`, `GF(q)[t]`, `GF(q)[1/t]`, `GF(q)[t,1/t]`, `GF(q)[t,1/(t+1)]`
    /// or a place-set pair `pair(field=GF(q)(t), places=[…])`.
    pub fn parse(s: &str) -> Result<Self, AsError> {
        let s = s.trim();
        if s.starts_with("pair(") {
            let pair = HuberPairDesc::parse(s)?;
            if pair.places().is_none() {
                return Err(AsError::UnsupportedDescriptor(s.into()));
            }
            return Ok(CokerRing::PlaceSet(pair));
        }
        let (head, tail) = match s.find('[') {
            Some(i) if s.ends_with(']') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            Some(_) => return Err(AsError::UnsupportedDescriptor(s.into())),
            None => (s, None),
        };
        let field = parse_field(head)?;
        let mut poles = Vec::new();
        for item in tail.map(|t| t.split(',').collect::<Vec<_>>()).unwrap_or_default() {
            let item = item.trim();
            let g = parse_ratfunc(&field, item)?;
            let place = if g.is_polynomial() && g.num().degree() == Some(1) && g.num().coeff(0) == 0 {
                PlaceValuation::Infinite
            } else if g.num().is_constant() && !g.den().is_constant() {
                PlaceValuation::finite(g.den().clone())?
            } else {
                return Err(AsError::UnsupportedDescriptor(format!("generator {item}")));
            };
            if !poles.contains(&place) {
                poles.push(place);
            }
        }
        Ok(CokerRing::Regular { field, poles })
    }

    pub fn render(&self) -> String {
        match self {
            CokerRing::Regular { field, poles } => {
                let head = crate::funcfield::parse::render_field(field);
                if poles.is_empty() {
                    return head;
                }
                let gens: Vec<String> = poles
                    .iter()
                    .map(|p| match p {
                        PlaceValuation::Finite(pi) if pi.is_monomial() => format!("1/{pi}"),
                        PlaceValuation::Finite(pi) => format!("1/({pi})"),
                        _ => "t".into(),
                    })
                    .collect();
                format!("{head}[{}]", gens.join(","))
            }
            CokerRing::PlaceSet(p) => p.render(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CokerReport {
    pub ring: String,
    pub n: usize,
    /// `F_p`-dimension of the truncated cokernel.
    pub dim: usize,
    /// `F_p`-dimension of `ker ℘` on the truncation.
    pub kernel: usize,
    pub linear_algebra: usize,
    pub canonical: usize,
    /// Canonical monomials (each spans `F_q`, or `F_{q^d}` at a place of
    /// degree `d`) after the constant-class generator.
    pub canonical_basis: Vec<String>,
}

fn window_denominator(f: &FiniteField, poles: &[PlaceValuation], n: usize) -> (Poly, usize) {
    let mut d = Poly::one(f);
    let mut extra = 0;
    for p in poles {
        match p {
            PlaceValuation::Finite(pi) => d = &d * &pi.pow(n as u64),
            _ => extra = n,
        }
    }
    let dim = d.degree().unwrap() + extra + 1;
    (d, dim)
}

/// `(coker, ker)` of `℘: V_{⌊N/p⌋} → V_N` over `F_p`, with `V_M` spanned
/// over `F_q` by `t^i / D_M`.
fn linear_algebra_route(f: &FiniteField, poles: &[PlaceValuation], n: usize) -> (usize, usize) {
    let p = f.p() as usize;
    let k = f.k() as usize;
    let m = n / p;
    let (dn, dim_n) = window_denominator(f, poles, n);
    let (dm, dim_m) = window_denominator(f, poles, m);
    let dn = RatFunc::from_poly(dn);
    let fp = FiniteField::new(p as u32).unwrap();
    let mut rows = Vec::with_capacity(dim_m * k);
    for i in 0..dim_m {
        for j in 0..k {
            let mut e = vec![0u32; k];
            e[j] = 1;
            let beta = f.from_coords(&e);
            let h = RatFunc::new(Poly::monomial(f, beta, i), dm.clone());
            let image = &wp(&h) * &dn;
            debug_assert!(image.is_polynomial());
            let mut row = Vec::with_capacity(dim_n * k);
            for c in 0..dim_n {
                row.extend(f.coords(image.num().coeff(c)).into_iter().map(|x| x as Elem));
            }
            rows.push(row);
        }
    }
    let rank = linalg::rank(&fp, &rows);
    (k * dim_n - rank, k * dim_m - rank)
}

fn local_monomial(f: &FiniteField, place: &PlaceValuation, j: usize) -> String {
    match place {
        PlaceValuation::Finite(pi) => RatFunc::new(Poly::one(f), pi.pow(j as u64)).render(),
        _ => RatFunc::monomial(f, 1, j as i64).render(),
    }
}

/// Count canonical forms: reduce each local monomial `u_P^j`, `j <= N`,
/// in the local parameter at `P` and collect the distinct survivors.
fn canonical_route(f: &FiniteField, poles: &[PlaceValuation], n: usize) -> (usize, Vec<String>) {
    let k = f.k() as usize;
    let mut count = 1;
    let mut basis = vec![f.fmt_elem(trace_one(f))];
    for place in poles {
        let d = match place {
            PlaceValuation::Finite(pi) => pi.degree().unwrap(),
            _ => 1,
        };
        let mut survivors = BTreeSet::new();
        for j in 1..=n {
            let rep = wp_reduce(&Poly::monomial(f, 1, j));
            if let Some(e) = rep.representative.degree().filter(|&e| e > 0) {
                survivors.insert(e);
            }
        }
        count += k * d * survivors.len();
        basis.extend(survivors.into_iter().map(|j| local_monomial(f, place, j)));
    }
    (count, basis)
}

/// Both routes, without the agreement check.
pub fn coker_routes(ring: &CokerRing, n: usize) -> Result<CokerReport, AsError> {
    if n > MAX_DEGREE_BOUND {
        return Err(AsError::DegreeBound(n));
    }
    let f = ring.field();
    let poles = ring.window_poles();
    let (la, kernel) = linear_algebra_route(f, &poles, n);
    let (canonical, canonical_basis) = canonical_route(f, &poles, n);
    Ok(CokerReport { ring: ring.render(), n, dim: la, kernel, linear_algebra: la, canonical, canonical_basis })
}

pub fn check_agreement(r: &CokerReport) -> Result<(), AsError> {
    if r.linear_algebra != r.canonical {
        return Err(AsError::OracleMismatch {
            ring: r.ring.clone(),
            n: r.n,
            linear_algebra: r.linear_algebra,
            canonical: r.canonical,
        });
    }
    Ok(())
}

/// `F_p`-dimension of the cokernel of `℘` truncated at pole order `n`;
/// fails if the two routes disagree.
pub fn coker_dim(ring: &CokerRing, n: usize) -> Result<CokerReport, AsError> {
    let r = coker_routes(ring, n)?;
    check_agreement(&r)?;
    Ok(r)
}

/// Instances with a tame cohomology table.
#[derive(Clone, Debug)]
pub enum Space {
    /// A chart cover preset, see [`crate::cech::PRESETS`].
    Cover { name: String, q: u32 },
    /// A place-set pair `(F_q(t), ∩ O_p)`.
    PlaceSet(HuberPairDesc),
}

impl Space {
    /// A cover preset name, or `prufer:` followed by a place list.
    pub fn parse(s: &str, q: u32) -> Result<Self, AsError> {
        if let Some(places) = s.strip_prefix("prufer:") {
            let f = FiniteField::new(q)?;
            let places = crate::funcfield::parse::parse_places(&f, places)?;
            return Ok(Space::PlaceSet(HuberPairDesc::place_set(&f, places)?));
        }
        if !crate::cech::PRESETS.contains(&s) {
            return Err(AsError::UnsupportedDescriptor(format!("space {s}")));
        }
        Ok(Space::Cover { name: s.into(), q })
    }

    pub fn render(&self) -> String {
        match self {
            Space::Cover { name, q } => format!("{name} over GF({q})"),
            Space::PlaceSet(p) => p.render(),
        }
    }

    /// The ring of global `O⁺`-sections, after checking that the Čech
    /// complex identifies `H⁰(O⁺)` and has `H^{>=1}(O⁺) = 0`.
    fn sections(&self) -> Result<CokerRing, AsError> {
        match self {
            Space::Cover { name, q } => {
                let cover = ChartCover::preset(name, *q)?;
                let r = cech_o_plus(&cover, Window::default())?;
                if r.degrees[0].description.is_empty() || !r.higher_vanish() {
                    return Err(AsError::UnsupportedDescriptor(format!("{name}: H¹(O⁺) is not zero")));
                }
                let g = cover.global_sections()?;
                let f = FiniteField::new(*q)?;
                let mut poles = Vec::new();
                if g.lo.is_none() {
                    poles.push(PlaceValuation::at(&f, 0));
                }
                if g.hi.is_none() {
                    poles.push(PlaceValuation::Infinite);
                }
                Ok(CokerRing::Regular { field: f, poles })
            }
            Space::PlaceSet(p) => Ok(CokerRing::PlaceSet(p.clone())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimEntry {
    pub dim: usize,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedDim {
    pub n: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H1Entry {
    /// `None` when the truncated dimensions keep growing.
    pub dim: Option<usize>,
    pub truncated: Vec<TruncatedDim>,
    pub stable: bool,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub space: String,
    pub sections: String,
    #[serde(rename = "H0")]
    pub h0: DimEntry,
    #[serde(rename = "H1")]
    pub h1: H1Entry,
    #[serde(rename = "H2")]
    pub h2: DimEntry,
    pub verdict: String,
}

fn zp_power(d: usize) -> String {
    match d {
        0 => "0".into(),
        1 => "Z/p".into(),
        _ => format!("(Z/p)^{d}"),
    }
}

pub fn tame_cohomology(space: &Space) -> Result<CohomologyTable, AsError> {
    tame_cohomology_with(space, &DEFAULT_BOUNDS)
}

/// `H⁰ = ker ℘`, `H¹ = coker ℘` on global `O⁺`-sections and `H² = 0`,
/// with `H¹` truncated at each pole-order bound in `bounds`.
pub fn tame_cohomology_with(space: &Space, bounds: &[usize]) -> Result<CohomologyTable, AsError> {
    if bounds.is_empty() {
        return Err(AsError::UnsupportedDescriptor("no truncation bounds".into()));
    }
    let ring = space.sections()?;
    let reports = bounds.iter().map(|&n| coker_dim(&ring, n)).collect::<Result<Vec<_>, _>>()?;
    let h0 = reports[0].kernel;
    let truncated: Vec<TruncatedDim> = reports.iter().map(|r| TruncatedDim { n: r.n, dim: r.dim }).collect();
    let stable = truncated.windows(2).all(|w| w[0].dim == w[1].dim);
    let last = truncated.last().unwrap().dim;
    let h1 = H1Entry {
        dim: stable.then_some(last),
        truncated,
        stable,
        description: if stable { zp_power(last) } else { "infinite".into() },
    };
    Ok(CohomologyTable {
        space: space.render(),
        sections: ring.render(),
        h0: DimEntry { dim: h0, description: zp_power(h0) },
        h1,
        h2: DimEntry { dim: 0, description: "0".into() },
        verdict: if stable { "finite".into() } else { "infinite".into() },
    })
}

/// `(H⁰, H¹)` of `Z/p` on `P¹_{F_q}` from the Artin–Schreier sequence:
/// `ker` and `coker` of `℘` on `H⁰(P¹, O)`, using `H¹(P¹, O) = 0`.
pub fn etale_p1_reference(q: u32) -> Result<(usize, usize), AsError> {
    let r = cech_p1_o(q, Window::default())?;
    if r.dims() != [1, 0] || r.degrees[0].description != "≅ F_q" {
        return Err(AsError::UnsupportedDescriptor(format!("P¹ over GF({q}): unexpected {:?}", r.dims())));
    }
    let c = coker_dim(&CokerRing::constants(&FiniteField::new(q)?), 0)?;
    Ok((c.kernel, c.dim))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub open: CohomologyTable,
    pub ambient: CohomologyTable,
    pub equal: bool,
    pub verdict: String,
}

fn same_groups(a: &CohomologyTable, b: &CohomologyTable) -> bool {
    a.h0.dim == b.h0.dim && a.h1.stable && b.h1.stable && a.h1.dim == b.h1.dim && a.h2.dim == b.h2.dim
}

/// Compare tame cohomology of an open piece with that of its ambient space.
pub fn purity_check(open: &Space, ambient: &Space, bounds: &[usize]) -> Result<Comparison, AsError> {
    let open = tame_cohomology_with(open, bounds)?;
    let ambient = tame_cohomology_with(ambient, bounds)?;
    let equal = same_groups(&open, &ambient);
    Ok(Comparison { open, ambient, equal, verdict: if equal { "equal".into() } else { "unequal".into() } })
}

/// Named purity instances: `gm-in-a1` (`G_m ⊂ A¹` over `Spec F_q`), `same`
/// (`U = X`) and `control` (`Spa(A¹, A¹)` against `Spa(A¹, P¹)`, where the
/// hypotheses fail).
pub fn purity_instance(name: &str, q: u32) -> Result<(Space, Space), AsError> {
    let s = |n: &str| Space::parse(n, q);
    match name {
        "gm-in-a1" => Ok((s("spa-gm-spec")?, s("spa-a1-spec")?)),
        "same" => Ok((s("spa-a1-spec")?, s("spa-a1-spec")?)),
        "control" => Ok((s("affine-line")?, s("spa-a1-p1")?)),
        other => Err(AsError::UnsupportedDescriptor(format!("purity instance {other}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyInvariance {
    pub q: u32,
    /// `H⁰, H¹` of `Spec F_q`: `ker` and `coker` of `℘` on `F_q`.
    pub point: CokerReport,
    /// `Spa(A¹, Spec F_q)`.
    pub line: CohomologyTable,
    pub holds: bool,
    pub verdict: String,
}

/// `X = S = Spec F_q`: compare `H^i_t(Spa(X, S))` with
/// `H^i_t(Spa(A¹_X, S))`.
pub fn homotopy_check(q: u32) -> Result<HomotopyInvariance, AsError> {
    let f = FiniteField::new(q)?;
    let point = coker_dim(&CokerRing::constants(&f), 0)?;
    let line = tame_cohomology(&Space::parse("spa-a1-spec", q)?)?;
    let holds = line.h0.dim == point.kernel && line.h1.stable && line.h1.dim == Some(point.dim) && line.h2.dim == 0;
    Ok(HomotopyInvariance { q, point, line, holds, verdict: if holds { "invariant".into() } else { "differs".into() } })
}

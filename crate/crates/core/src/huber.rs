//! Huber pairs `(A, A⁺)` over `F_q(t)` at desk scale: membership in `A⁺`,
//! rational subsets of place-set pairs and classification of valuations as
//! points of `Spa(A, A⁺)`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::funcfield::parse::{parse_field, parse_places, parse_ratfunc, split_top_level};
use crate::funcfield::{FieldError, FiniteField, PlaceValuation, Poly, RatFunc};
use crate::kummer::KummerAlgebra;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HuberError {
    #[error("unsupported descriptor: {0}")]
    UnsupportedDescriptor(String),
    #[error("{0} is not an element of the ring")]
    NotInRing(String),
    #[error("{0}")]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug)]
pub enum RingDesc {
    /// `F_q[t]`
    Poly,
    /// `F_q[t, 1/f]`
    LaurentLoc(Poly),
    /// `F_q(t)`
    Field,
    Kummer(Arc<KummerAlgebra>),
}

#[derive(Clone, Debug)]
pub enum PlusDesc {
    /// Integral closure of `F_q[g_1, …, g_k]` in `A`; no generators means
    /// the closure of `F_q`.
    IntegralClosureOfImage(Vec<RatFunc>),
    /// `∩_{p ∈ S} O_p`; the empty set stands for `F_q(t)` itself.
    PlaceSet(Vec<PlaceValuation>),
    /// A threshold module, described in words.
    Threshold(String),
}

#[derive(Clone, Debug)]
pub struct HuberPairDesc {
    pub field: FiniteField,
    pub ring: RingDesc,
    pub plus: PlusDesc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointType {
    Classical,
    Gauss,
    Rank2,
    Trivial,
    AtInfinity,
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PointType::Classical => "classical",
            PointType::Gauss => "Gauss",
            PointType::Rank2 => "rank-2",
            PointType::Trivial => "trivial",
            PointType::AtInfinity => "at-infinity",
        };
        write!(f, "{s}")
    }
}

/// A valuation of `F_q(t)` regarded as a candidate point; its support is
/// the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaPoint {
    pub valuation: PlaceValuation,
}

impl SpaPoint {
    pub fn new(valuation: PlaceValuation) -> Self {
        SpaPoint { valuation }
    }

    pub fn point_type(&self) -> PointType {
        match &self.valuation {
            PlaceValuation::Finite(_) => PointType::Classical,
            PlaceValuation::Infinite => PointType::AtInfinity,
            PlaceValuation::Gauss(g) if *g.numer() == 0 => PointType::Trivial,
            PlaceValuation::Gauss(_) => PointType::Gauss,
            PlaceValuation::Trivial => PointType::Trivial,
            PlaceValuation::Composite(..) => PointType::Rank2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointClass {
    Member(PointType),
    /// `a ∈ A⁺` with `|a(x)| > 1`.
    NotMember(RatFunc),
}

impl HuberPairDesc {
    pub fn place_set(field: &FiniteField, places: Vec<PlaceValuation>) -> Result<Self, HuberError> {
        if places.is_empty() {
            return Err(HuberError::UnsupportedDescriptor("place set must be non-empty".into()));
        }
        for p in &places {
            if !matches!(p, PlaceValuation::Finite(_) | PlaceValuation::Infinite) {
                return Err(HuberError::UnsupportedDescriptor(format!("{p} is not a place")));
            }
        }
        Ok(HuberPairDesc { field: field.clone(), ring: RingDesc::Field, plus: PlusDesc::PlaceSet(canonical(places)) })
    }

    pub fn closure(field: &FiniteField, ring: RingDesc, gens: Vec<RatFunc>) -> Self {
        HuberPairDesc { field: field.clone(), ring, plus: PlusDesc::IntegralClosureOfImage(gens) }
    }

    pub fn places(&self) -> Option<&[PlaceValuation]> {
        match &self.plus {
            PlusDesc::PlaceSet(s) => Some(s),
            _ => None,
        }
    }

    pub fn contains_in_ring(&self, f: &RatFunc) -> Result<bool, HuberError> {
        Ok(match &self.ring {
            RingDesc::Poly => f.is_polynomial(),
            RingDesc::LaurentLoc(g) => divides_power(f.den(), g),
            RingDesc::Field => true,
            RingDesc::Kummer(_) => return Err(HuberError::UnsupportedDescriptor("Kummer ring elements".into())),
        })
    }

    /// Whether `f ∈ A⁺`.
    pub fn in_plus(&self, f: &RatFunc) -> Result<bool, HuberError> {
        if !self.contains_in_ring(f)? {
            return Err(HuberError::NotInRing(f.render()));
        }
        match &self.plus {
            PlusDesc::PlaceSet(s) => Ok(s.iter().all(|p| p.valuation(f).is_bounded())),
            PlusDesc::IntegralClosureOfImage(gens) => Ok(in_integral_closure(f, gens)),
            PlusDesc::Threshold(d) => Err(HuberError::UnsupportedDescriptor(format!("threshold module {d}"))),
        }
    }

    /// `(A⁺[f], A⁺[1/f], A⁺[f, 1/f])` in the place-set model.
    pub fn rational_subset(&self, f: &RatFunc) -> Result<(Self, Self, Self), HuberError> {
        let Some(s) = self.places() else {
            return Err(HuberError::UnsupportedDescriptor("rational subsets need a place-set pair".into()));
        };
        if f.is_zero() {
            return Err(HuberError::Field(FieldError::Invalid("f must be non-zero".into())));
        }
        let keep = |pred: &dyn Fn(i64) -> bool| {
            let places =
                s.iter().filter(|p| pred(*p.valuation(f).leading().unwrap().numer())).cloned().collect::<Vec<_>>();
            HuberPairDesc { field: self.field.clone(), ring: RingDesc::Field, plus: PlusDesc::PlaceSet(places) }
        };
        Ok((keep(&|v| v >= 0), keep(&|v| v <= 0), keep(&|v| v == 0)))
    }

    pub fn classify_point(&self, x: &SpaPoint) -> Result<PointClass, HuberError> {
        let v = &x.valuation;
        match &self.plus {
            PlusDesc::PlaceSet(s) => {
                let centre = v.constituents(&self.field);
                match centre.first() {
                    None => Ok(PointClass::Member(x.point_type())),
                    Some(p) if s.contains(p) => Ok(PointClass::Member(x.point_type())),
                    Some(p) => Ok(PointClass::NotMember(pole_only_at(&self.field, p))),
                }
            }
            PlusDesc::IntegralClosureOfImage(gens) => {
                for g in gens {
                    if !v.valuation(g).is_bounded() {
                        return Ok(PointClass::NotMember(g.clone()));
                    }
                }
                Ok(PointClass::Member(x.point_type()))
            }
            PlusDesc::Threshold(d) => Err(HuberError::UnsupportedDescriptor(format!("threshold module {d}"))),
        }
    }

    /// Canonical text, e.g. `pair(field=GF(3)(t), places=[t, t + 2])`.
    pub fn render(&self) -> String {
        let q = self.field.q();
        let ring = match &self.ring {
            RingDesc::Poly => format!("GF({q})[t]"),
            RingDesc::LaurentLoc(g) => {
                let s = g.to_string();
                let s = if g.is_monomial() { s } else { format!("({s})") };
                format!("GF({q})[t,1/{s}]")
            }
            RingDesc::Field => format!("GF({q})(t)"),
            RingDesc::Kummer(k) => format!("kummer({})", k.describe()),
        };
        match &self.plus {
            PlusDesc::PlaceSet(s) => {
                let ps: Vec<String> = s.iter().map(|p| p.render()).collect();
                format!("pair(field={ring}, places=[{}])", ps.join(", "))
            }
            PlusDesc::IntegralClosureOfImage(g) if g.is_empty() => format!("pair(ring={ring}, plus=const)"),
            PlusDesc::IntegralClosureOfImage(g) => {
                let gs: Vec<String> = g.iter().map(|x| x.render()).collect();
                format!("pair(ring={ring}, plus=[{}])", gs.join(", "))
            }
            PlusDesc::Threshold(d) => format!("pair(ring={ring}, plus=threshold({d}))"),
        }
    }

    /// Parse `pair(field=GF(4)(t), places=[t,t-1])` or
    /// `pair(ring=GF(2)[t], plus=const)`, `plus=[g1, g2]`.
    pub fn parse(s: &str) -> Result<Self, HuberError> {
        let bad = |m: &str| HuberError::Field(FieldError::Parse(format!("{m} in '{s}'")));
        let body = s.trim().strip_prefix("pair(").and_then(|r| r.strip_suffix(')')).ok_or_else(|| bad("expected pair(...)"))?;
        let mut ring_s = None;
        let mut plus_s = None;
        let mut places_s = None;
        for part in split_top_level(body, ',') {
            let (k, v) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match k.trim() {
                "field" | "ring" => ring_s = Some(v.trim()),
                "plus" => plus_s = Some(v.trim()),
                "places" => places_s = Some(v.trim()),
                other => return Err(bad(&format!("unknown key '{other}'"))),
            }
        }
        let ring_s = ring_s.ok_or_else(|| bad("missing ring"))?;
        let (field, ring) = parse_ring(ring_s).map_err(|_| bad("bad ring"))?;
        if let Some(ps) = places_s {
            let inner = ps.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(|| bad("places need [..]"))?;
            if !matches!(ring, RingDesc::Field) {
                return Err(HuberError::UnsupportedDescriptor("place sets live in the field F_q(t)".into()));
            }
            return Self::place_set(&field, parse_places(&field, inner)?);
        }
        let plus_s = plus_s.ok_or_else(|| bad("missing plus"))?;
        let gens = if plus_s == "const" {
            vec![]
        } else {
            let inner = plus_s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(|| bad("plus needs [..]"))?;
            split_top_level(inner, ',')
                .into_iter()
                .filter(|x| !x.trim().is_empty())
                .map(|g| parse_ratfunc(&field, g))
                .collect::<Result<Vec<_>, _>>()?
        };
        let pair = HuberPairDesc::closure(&field, ring, gens.clone());
        for g in &gens {
            if !pair.contains_in_ring(g)? {
                return Err(HuberError::NotInRing(g.render()));
            }
        }
        Ok(pair)
    }
}

impl fmt::Display for HuberPairDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn parse_ring(s: &str) -> Result<(FiniteField, RingDesc), FieldError> {
    let close = s.find(')').ok_or_else(|| FieldError::Parse(s.into()))?;
    let field = parse_field(&s[..=close])?;
    let rest = s[close + 1..].trim();
    let ring = match rest {
        "(t)" => RingDesc::Field,
        "[t]" => RingDesc::Poly,
        _ => {
            let inner = rest
                .strip_prefix("[t,")
                .and_then(|r| r.strip_suffix(']'))
                .and_then(|r| r.trim().strip_prefix("1/"))
                .ok_or_else(|| FieldError::Parse(format!("bad ring '{s}'")))?;
            let g = crate::funcfield::parse_poly(&field, inner)?;
            if g.is_constant() {
                return Err(FieldError::Parse("localize at a non-constant polynomial".into()));
            }
            RingDesc::LaurentLoc(g.monic())
        }
    };
    Ok((field, ring))
}

fn canonical(mut places: Vec<PlaceValuation>) -> Vec<PlaceValuation> {
    let mut out: Vec<PlaceValuation> = Vec::new();
    places.drain(..).for_each(|p| {
        if !out.contains(&p) {
            out.push(p)
        }
    });
    out
}

/// Whether every irreducible factor of `d` divides `g`.
fn divides_power(d: &Poly, g: &Poly) -> bool {
    let mut d = d.monic();
    while !d.is_constant() {
        let h = d.gcd(g);
        if h.is_constant() {
            return false;
        }
        while let Some(q) = d.div_exact(&h) {
            d = q;
            if d.is_constant() {
                break;
            }
        }
    }
    true
}

/// `f` lies in the integral closure of `F_q[gens]` iff every pole of `f` is
/// a pole of some generator.
fn in_integral_closure(f: &RatFunc, gens: &[RatFunc]) -> bool {
    let field = f.field();
    let nonconstant: Vec<&RatFunc> = gens.iter().filter(|g| !g.is_constant()).collect();
    if nonconstant.is_empty() {
        return f.is_constant();
    }
    let mut dens = Poly::one(field);
    for g in &nonconstant {
        dens = &dens * g.den();
    }
    if !divides_power(f.den(), &dens) {
        return false;
    }
    let pole_inf = |h: &RatFunc| !PlaceValuation::Infinite.valuation(h).is_bounded();
    !pole_inf(f) || nonconstant.iter().any(|g| pole_inf(g))
}

/// An element with its only pole at `p`.
fn pole_only_at(field: &FiniteField, p: &PlaceValuation) -> RatFunc {
    match p {
        PlaceValuation::Finite(pi) => RatFunc::new(Poly::one(field), pi.clone()),
        _ => RatFunc::t(field),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::parse_place;
    use num_rational::Rational64;

    fn r(f: &FiniteField, s: &str) -> RatFunc {
        parse_ratfunc(f, s).unwrap()
    }

    #[test]
    fn membership_examples() {
        let f = FiniteField::new(3).unwrap();
        let pair = HuberPairDesc::place_set(&f, vec![PlaceValuation::at(&f, 0)]).unwrap();
        assert!(pair.in_plus(&r(&f, "1/(t+1)")).unwrap());
        assert!(!pair.in_plus(&r(&f, "1/t")).unwrap());
        let pc = HuberPairDesc::parse("pair(ring=GF(3)[t], plus=const)").unwrap();
        assert!(!pc.in_plus(&r(&f, "t")).unwrap());
        assert!(pc.in_plus(&r(&f, "2")).unwrap());
        assert!(matches!(pc.in_plus(&r(&f, "1/t")), Err(HuberError::NotInRing(_))));
    }

    #[test]
    fn closure_of_image() {
        let f = FiniteField::new(5).unwrap();
        // F_q[t, 1/t] with A⁺ the closure of F_q[1/t]: poles allowed only at t
        let pair = HuberPairDesc::parse("pair(ring=GF(5)[t,1/t], plus=[1/t])").unwrap();
        assert!(pair.in_plus(&r(&f, "1/t^3 + 2/t")).unwrap());
        assert!(!pair.in_plus(&r(&f, "t")).unwrap());
        let pair = HuberPairDesc::parse("pair(ring=GF(5)(t), plus=[t, 1/(t^2+2)])").unwrap();
        assert!(pair.in_plus(&r(&f, "t^4/(t^2+2)^3")).unwrap());
        assert!(!pair.in_plus(&r(&f, "1/(t+1)")).unwrap());
    }

    #[test]
    fn rational_subset_examples() {
        let f = FiniteField::new(3).unwrap();
        let pair = HuberPairDesc::parse("pair(field=GF(3)(t), places=[t,t-1])").unwrap();
        let (plus, minus, both) = pair.rational_subset(&r(&f, "(t-1)/t")).unwrap();
        assert_eq!(plus.places().unwrap(), &[parse_place(&f, "t-1").unwrap()]);
        assert_eq!(minus.places().unwrap(), &[PlaceValuation::at(&f, 0)]);
        assert!(both.places().unwrap().is_empty());
        let pair = HuberPairDesc::parse("pair(field=GF(3)(t), places=[t])").unwrap();
        let (plus, minus, _) = pair.rational_subset(&r(&f, "t")).unwrap();
        assert_eq!(plus.places().unwrap(), pair.places().unwrap());
        assert!(minus.places().unwrap().is_empty());
        // a unit of A⁺ changes nothing
        let pair = HuberPairDesc::parse("pair(field=GF(3)(t), places=[t,inf])").unwrap();
        let (a, b, c) = pair.rational_subset(&r(&f, "(t+1)/(t+2)")).unwrap();
        for x in [a, b, c] {
            assert_eq!(x.places(), pair.places());
        }
    }

    #[test]
    fn point_examples() {
        let f = FiniteField::new(2).unwrap();
        let pc = HuberPairDesc::parse("pair(ring=GF(2)[t], plus=const)").unwrap();
        let at = |s: &str| SpaPoint::new(parse_place(&f, s).unwrap());
        assert_eq!(pc.classify_point(&at("t")).unwrap(), PointClass::Member(PointType::Classical));
        assert_eq!(pc.classify_point(&at("inf")).unwrap(), PointClass::Member(PointType::AtInfinity));
        let pt = HuberPairDesc::parse("pair(ring=GF(2)[t], plus=[t])").unwrap();
        assert_eq!(pt.classify_point(&at("inf")).unwrap(), PointClass::NotMember(r(&f, "t")));
        assert_eq!(pt.classify_point(&at("gauss(1/2)")).unwrap(), PointClass::Member(PointType::Gauss));
        assert_eq!(pt.classify_point(&at("trivial;t")).unwrap(), PointClass::Member(PointType::Rank2));
        let ps = HuberPairDesc::parse("pair(field=GF(2)(t), places=[t])").unwrap();
        assert_eq!(ps.classify_point(&at("t+1")).unwrap(), PointClass::NotMember(r(&f, "1/(t+1)")));
        assert_eq!(ps.classify_point(&at("inf")).unwrap(), PointClass::NotMember(r(&f, "t")));
        assert_eq!(ps.classify_point(&at("trivial")).unwrap(), PointClass::Member(PointType::Trivial));
        assert_eq!(
            ps.classify_point(&SpaPoint::new(PlaceValuation::Gauss(Rational64::new(3, 2)))).unwrap(),
            PointClass::Member(PointType::Gauss)
        );
    }

    #[test]
    fn render_roundtrip() {
        for s in [
            "pair(field=GF(4)(t), places=[t, t + 1])",
            "pair(ring=GF(2)[t], plus=const)",
            "pair(ring=GF(3)[t,1/(t^2 + 1)], plus=[t, 1/(t^2 + 1)])",
            "pair(ring=GF(5)(t), plus=[1/t])",
        ] {
            let p = HuberPairDesc::parse(s).unwrap();
            assert_eq!(p.render(), s);
        }
        assert_eq!(HuberPairDesc::parse("pair(field=GF(4)(t), places=[t,t-1])").unwrap().render(), "pair(field=GF(4)(t), places=[t, t + 1])");
        assert!(HuberPairDesc::parse("pair(ring=GF(3)[t], plus=[1/t])").is_err());
    }
}

//! Ramification of finite separable extensions of `F_q(t)` at a place, and
//! admissibility of covers for the étale, strongly étale and tame sites.

mod local;
pub mod tpoly;

use std::fmt;

use num_rational::Rational64;
use serde::Serialize;

use crate::funcfield::{FieldError, FiniteField, PlaceValuation, RatFunc};
use crate::huber::{HuberError, HuberPairDesc, PointClass, RingDesc, SpaPoint};
use local::{local_branches, LocalError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TameError {
    #[error("inseparable extension: {0}")]
    InseparableExtension(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("{0}")]
    Huber(#[from] HuberError),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionDesc {
    /// `T^m - α`
    Kummer { m: u32, alpha: RatFunc },
    /// `T^p - T - a`
    ArtinSchreier { a: RatFunc },
    /// A monic polynomial, coefficients lowest degree first.
    General(Vec<RatFunc>),
}

impl ExtensionDesc {
    pub fn field(&self) -> &FiniteField {
        match self {
            ExtensionDesc::Kummer { alpha, .. } => alpha.field(),
            ExtensionDesc::ArtinSchreier { a } => a.field(),
            ExtensionDesc::General(c) => c[0].field(),
        }
    }

    /// Parse a polynomial in `T`; it is normalized to be monic.
    pub fn parse(field: &FiniteField, s: &str) -> Result<Self, TameError> {
        let c = tpoly::parse(field, s)?;
        let d = tpoly::degree(&c).filter(|&d| d >= 1).ok_or_else(|| TameError::Invalid(format!("'{s}' has degree 0")))?;
        let l = c[d].inv().unwrap();
        Ok(ExtensionDesc::General(c[..=d].iter().map(|x| x * &l).collect()))
    }

    /// Coefficients of the defining polynomial, lowest degree first.
    pub fn polynomial(&self) -> Vec<RatFunc> {
        let f = self.field();
        match self {
            ExtensionDesc::Kummer { m, alpha } => {
                let mut c = vec![RatFunc::zero(f); *m as usize + 1];
                c[0] = -alpha;
                c[*m as usize] = RatFunc::one(f);
                c
            }
            ExtensionDesc::ArtinSchreier { a } => {
                let p = f.p() as usize;
                let mut c = vec![RatFunc::zero(f); p + 1];
                c[0] = -a;
                c[1] = -&RatFunc::one(f);
                c[p] = RatFunc::one(f);
                c
            }
            ExtensionDesc::General(c) => c.clone(),
        }
    }

    pub fn degree(&self) -> usize {
        self.polynomial().len() - 1
    }

    pub fn render(&self) -> String {
        tpoly::render(&self.polynomial())
    }

    /// Checks the shape invariants and separability.
    pub fn validate(&self) -> Result<(), TameError> {
        let p = self.field().p();
        match self {
            ExtensionDesc::Kummer { m, alpha } => {
                if *m == 0 || alpha.is_zero() {
                    return Err(TameError::Invalid("Kummer data needs m >= 1 and α != 0".into()));
                }
                if m % p == 0 {
                    return Err(TameError::InseparableExtension(format!("p = {p} divides m = {m}")));
                }
            }
            ExtensionDesc::ArtinSchreier { .. } => {}
            ExtensionDesc::General(c) => {
                if tpoly::degree(c).unwrap_or(0) == 0 || !c.last().unwrap().is_one() {
                    return Err(TameError::Invalid("polynomial must be monic of degree >= 1".into()));
                }
                if c.len() - 1 > tpoly::MAX_T_DEGREE {
                    return Err(TameError::Unsupported(format!("degree {} in T", c.len() - 1)));
                }
                if !tpoly::is_separable(c) {
                    return Err(TameError::InseparableExtension(self.render()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RamClass {
    Unramified,
    Tame,
    Wild,
}

impl fmt::Display for RamClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RamClass::Unramified => "unramified",
            RamClass::Tame => "tame",
            RamClass::Wild => "wild",
        };
        write!(f, "{s}")
    }
}

pub fn classify_ramification(e: u32, p: u32, residue_separable: bool) -> RamClass {
    if !residue_separable || e % p == 0 {
        RamClass::Wild
    } else if e == 1 {
        RamClass::Unramified
    } else {
        RamClass::Tame
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub e: u32,
    pub f: u32,
    /// Valuation of a root on this branch, `inf` for the root `0`.
    #[serde(serialize_with = "ser_slope")]
    pub slope: Option<Rational64>,
    pub class: RamClass,
}

fn ser_slope<S: serde::Serializer>(s: &Option<Rational64>, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&render_slope(s))
}

pub fn render_slope(s: &Option<Rational64>) -> String {
    match s {
        None => "inf".into(),
        Some(r) if r.is_integer() => r.numer().to_string(),
        Some(r) => format!("{}/{}", r.numer(), r.denom()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationReport {
    pub place: PlaceValuation,
    pub branches: Vec<Branch>,
    /// Worst class over the branches.
    pub class: RamClass,
}

impl RamificationReport {
    /// `Σ e·f` over the branches.
    pub fn total_degree(&self) -> u32 {
        self.branches.iter().map(|b| b.e * b.f).sum()
    }
}

/// Decomposition of the extension over the completion at a finite or
/// infinite place. Residue fields are finite, hence residue extensions are
/// separable.
pub fn extend_valuation(base: &PlaceValuation, ext: &ExtensionDesc) -> Result<RamificationReport, TameError> {
    if !matches!(base, PlaceValuation::Finite(_) | PlaceValuation::Infinite) {
        return Err(TameError::Unsupported(format!("{base} is not a place; use its rank-1 constituents")));
    }
    ext.validate()?;
    let field = ext.field();
    let mut poly = ext.polynomial();
    let mut branches = Vec::new();
    if poly[0].is_zero() {
        branches.push(Branch { e: 1, f: 1, slope: None, class: RamClass::Unramified });
        poly.remove(0);
    }
    if poly.len() > 1 {
        let raw = local_branches(&poly, base).map_err(|e| match e {
            LocalError::WildIrregular => TameError::Unsupported(
                "wild ramification with a repeated residual factor needs higher-order Newton polygons".into(),
            ),
            LocalError::FieldTooLarge(q) => TameError::Unsupported(format!("residue field of size {q} exceeds 256")),
        })?;
        for b in raw {
            branches.push(Branch { e: b.e, f: b.f, slope: b.slope, class: classify_ramification(b.e, field.p(), true) });
        }
    }
    branches.sort_by(|a, b| {
        (a.slope.is_none(), a.slope, a.e, a.f).cmp(&(b.slope.is_none(), b.slope, b.e, b.f))
    });
    let class = branches.iter().map(|b| b.class).max().unwrap_or(RamClass::Unramified);
    let report = RamificationReport { place: base.clone(), branches, class };
    debug_assert_eq!(report.total_degree() as usize, ext.degree());
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Site {
    Etale,
    StronglyEtale,
    Tame,
}

impl Site {
    pub fn parse(s: &str) -> Option<Site> {
        match s {
            "etale" => Some(Site::Etale),
            "strongly_etale" | "strongly-etale" => Some(Site::StronglyEtale),
            "tame" => Some(Site::Tame),
            _ => None,
        }
    }

    pub fn accepts(&self, class: RamClass) -> bool {
        match self {
            Site::Etale => true,
            Site::StronglyEtale => class == RamClass::Unramified,
            Site::Tame => class != RamClass::Wild,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valuation: PlaceValuation,
    /// The rank-1 place the verdict was computed at; absent for valuations
    /// trivial on `F_q(t)`.
    pub constituent: Option<PlaceValuation>,
    pub class: RamClass,
    pub admissible: bool,
    pub report: Option<RamificationReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub site: Site,
    pub verdicts: Vec<Verdict>,
    pub admissible: bool,
}

/// Per-valuation verdicts over the boundary valuations, which must be points
/// of `Spa(A, A⁺)`. Higher-rank and Gauss valuations are decided at their
/// rank-1 constituent place.
pub fn cover_admissible(
    ext: &ExtensionDesc,
    site: Site,
    pair: &HuberPairDesc,
    boundary: &[PlaceValuation],
) -> Result<Admissibility, TameError> {
    ext.validate()?;
    if matches!(pair.ring, RingDesc::Kummer(_)) {
        return Err(TameError::Unsupported("boundaries over Kummer rings".into()));
    }
    if pair.field != *ext.field() {
        return Err(TameError::Invalid("extension and pair live over different fields".into()));
    }
    let mut verdicts = Vec::new();
    for v in boundary {
        if let PointClass::NotMember(w) = pair.classify_point(&SpaPoint::new(v.clone()))? {
            return Err(TameError::Invalid(format!("{v} is not a point of {pair}: |{}| > 1", w.render())));
        }
        let constituent = v.constituents(&pair.field).into_iter().next();
        let (class, report) = match &constituent {
            None => (RamClass::Unramified, None),
            Some(c) => {
                let r = extend_valuation(c, ext)?;
                (r.class, Some(r))
            }
        };
        verdicts.push(Verdict { valuation: v.clone(), constituent, class, admissible: site.accepts(class), report });
    }
    let admissible = verdicts.iter().all(|v| v.admissible);
    Ok(Admissibility { site, verdicts, admissible })
}

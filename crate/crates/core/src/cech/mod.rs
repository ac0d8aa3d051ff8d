//! Cochain complexes of monomial modules and their homology inside a finite
//! exponent window: Amitsur complexes of Kummer algebras, Laurent covers of
//! place-set pairs, and Čech complexes of chart covers.
//!
//! Every complex here has differentials with constant coefficients, so it
//! splits by the exponent `k` of the uniformizer; the homology in a window
//! is a sum of finite-dimensional pieces, one per `k`.

mod amitsur;
mod charts;
mod laurent;

use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::Serialize;

use crate::funcfield::{Elem, FieldError, FiniteField};
use crate::huber::HuberError;
use crate::kummer::KummerError;
use crate::linalg;

pub use amitsur::{amitsur_complex, verify_homotopy, verify_homotopy_with, AmitsurComplex, HomotopyReport, Violation};
pub use charts::{cech_o_plus, cech_p1_o, ChartCover, PRESETS};
pub use laurent::{laurent_cech, laurent_cech_with, LaurentCech, SplitWitness};

pub const DEFAULT_WINDOW: i64 = 16;
pub const WINDOW_CAP: i64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CechError {
    #[error("level {0} exceeds the cap of 4")]
    LevelCap(usize),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("unsupported descriptor: {0}")]
    UnsupportedDescriptor(String),
    #[error("invalid complex: {0}")]
    Invalid(String),
    #[error("{0}")]
    Kummer(#[from] KummerError),
    #[error("{0}")]
    Huber(#[from] HuberError),
    #[error("{0}")]
    Field(#[from] FieldError),
}

/// Exponent interval `[lo, hi]` of the uniformizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn symmetric(w: i64) -> Self {
        Window { lo: -w, hi: w }
    }

    pub fn doubled(&self) -> Self {
        Window { lo: 2 * self.lo, hi: 2 * self.hi }
    }

    pub fn radius(&self) -> i64 {
        self.hi.max(-self.lo)
    }

    fn validate(&self) -> Result<(), CechError> {
        if self.lo > 0 || self.hi < 0 || self.lo == self.hi {
            return Err(CechError::WindowTooSmall(format!("[{}, {}] must contain 0 in its interior", self.lo, self.hi)));
        }
        if self.radius() > WINDOW_CAP {
            return Err(CechError::Invalid(format!("window exceeds the cap {WINDOW_CAP}")));
        }
        Ok(())
    }

    fn can_double(&self) -> bool {
        2 * self.radius() <= WINDOW_CAP
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::symmetric(DEFAULT_WINDOW)
    }
}

/// One rank-one summand `A·e` of a module: `u^k·e` belongs to the module
/// iff `lo <= k <= hi` (missing bounds are unbounded).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub label: String,
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Summand {
    pub fn new(label: impl Into<String>, lo: Option<i64>, hi: Option<i64>) -> Self {
        Summand { label: label.into(), lo, hi }
    }

    pub fn allows(&self, k: i64) -> bool {
        self.lo.is_none_or(|l| k >= l) && self.hi.is_none_or(|h| k <= h)
    }

    fn within(&self, o: &Summand) -> bool {
        let lo_ok = match (self.lo, o.lo) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a >= b,
        };
        let hi_ok = match (self.hi, o.hi) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        };
        lo_ok && hi_ok
    }

    fn count_in(&self, w: Window) -> usize {
        let lo = self.lo.map_or(w.lo, |l| l.max(w.lo));
        let hi = self.hi.map_or(w.hi, |h| h.min(w.hi));
        (hi - lo + 1).max(0) as usize
    }
}

/// `Σ a_e·e` with `a_e ∈ A`, belonging to the module iff
/// `v(a_e) >= threshold(e)` for every `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdModule {
    pub labels: Vec<Vec<usize>>,
    pub thresholds: Vec<Rational64>,
}

impl ThresholdModule {
    pub fn threshold(&self, i: usize) -> crate::valgroup::Value {
        crate::valgroup::Value::new(vec![self.thresholds[i]]).unwrap()
    }

    pub fn index_of(&self, label: &[usize]) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_slice().cmp(label)).ok()
    }

    /// Membership from coefficient valuations `(label, v(a_e))`; zero
    /// coefficients are omitted by the caller.
    pub fn contains_valuations<'a>(&self, terms: impl IntoIterator<Item = (&'a [usize], i64)>) -> bool {
        terms.into_iter().all(|(label, v)| {
            self.index_of(label).is_some_and(|i| Rational64::from_integer(v) >= self.thresholds[i])
        })
    }

    fn summands(&self) -> Vec<Summand> {
        self.labels
            .iter()
            .zip(&self.thresholds)
            .map(|(l, t)| Summand::new(format!("{l:?}"), Some(crate::valgroup::ceil(*t)), None))
            .collect()
    }
}

/// Sparse matrix with constant entries: `rows[j]` lists the image of the
/// `j`-th source summand as `(target, coefficient)`.
pub type Differential = Vec<Vec<(usize, Elem)>>;

#[derive(Clone, Debug)]
pub struct Complex {
    field: FiniteField,
    modules: Vec<Vec<Summand>>,
    differentials: Vec<Differential>,
    /// The last module is a truncation of a longer complex; its homology
    /// is not reported.
    open_top: bool,
    h0_model: Option<(String, Summand)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub i: usize,
    pub dim: usize,
    pub stable: bool,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub window: Window,
    pub degrees: Vec<DegreeReport>,
}

impl CohomologyReport {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.dim).collect()
    }

    /// `H^i = 0` for all `i >= 1`, with stabilization.
    pub fn higher_vanish(&self) -> bool {
        self.degrees.iter().skip(1).all(|d| d.dim == 0 && d.stable)
    }

    /// Assemble from dimensions at a window and at its double.
    fn from_dims(window: Window, cur: &[usize], next: &[usize], h0: Option<(&str, usize)>) -> Self {
        let degrees = cur
            .iter()
            .zip(next)
            .enumerate()
            .map(|(i, (&dim, &n))| {
                let description = match h0 {
                    _ if dim == 0 && n == 0 => "0".to_string(),
                    Some((name, d)) if i == 0 && d == dim => name.to_string(),
                    _ => String::new(),
                };
                DegreeReport { i, dim, stable: dim == n, description }
            })
            .collect();
        CohomologyReport { window, degrees }
    }
}

impl Complex {
    /// Build and check: matching sizes, each differential maps every
    /// summand into the summands it hits, and `d∘d = 0` on the basis.
    pub fn new(
        field: &FiniteField,
        modules: Vec<Vec<Summand>>,
        differentials: Vec<Differential>,
        open_top: bool,
    ) -> Result<Self, CechError> {
        let c = Self::new_unchecked(field, modules, differentials, open_top)?;
        if let Some((i, j)) = c.d_squared_violations().first() {
            return Err(CechError::Invalid(format!("d∘d ≠ 0 on basis element {} of degree {i}", c.modules[*i][*j].label)));
        }
        Ok(c)
    }

    /// Like [`Complex::new`] without the `d∘d = 0` check, for fixtures.
    pub fn new_unchecked(
        field: &FiniteField,
        modules: Vec<Vec<Summand>>,
        differentials: Vec<Differential>,
        open_top: bool,
    ) -> Result<Self, CechError> {
        if differentials.len() + 1 != modules.len().max(1) {
            return Err(CechError::Invalid("need one differential between consecutive modules".into()));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.len() != modules[i].len() {
                return Err(CechError::Invalid(format!("differential {i} has the wrong number of rows")));
            }
            for (j, row) in d.iter().enumerate() {
                for &(t, c) in row {
                    let target = modules[i + 1]
                        .get(t)
                        .ok_or_else(|| CechError::Invalid(format!("differential {i} targets a missing summand")))?;
                    if c != 0 && !modules[i][j].within(target) {
                        return Err(CechError::Invalid(format!(
                            "d maps {} outside the submodule at {}",
                            modules[i][j].label, target.label
                        )));
                    }
                }
            }
        }
        Ok(Complex { field: field.clone(), modules, differentials, open_top, h0_model: None })
    }

    pub fn zero(field: &FiniteField) -> Self {
        Complex { field: field.clone(), modules: vec![], differentials: vec![], open_top: false, h0_model: None }
    }

    /// Name the expected `H⁰` (e.g. `≅ A⁺`) and give it as a summand.
    pub fn with_h0_model(mut self, name: &str, model: Summand) -> Self {
        self.h0_model = Some((name.into(), model));
        self
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn modules(&self) -> &[Vec<Summand>] {
        &self.modules
    }

    pub fn differentials(&self) -> &[Differential] {
        &self.differentials
    }

    /// Number of degrees whose homology is reported.
    pub fn reported_degrees(&self) -> usize {
        self.modules.len().saturating_sub(self.open_top as usize)
    }

    /// `(degree, basis index)` of basis elements with `d(d(e)) ≠ 0`.
    pub fn d_squared_violations(&self) -> Vec<(usize, usize)> {
        let f = &self.field;
        let mut out = Vec::new();
        for i in 0..self.differentials.len().saturating_sub(1) {
            let (d1, d2) = (&self.differentials[i], &self.differentials[i + 1]);
            for (j, row) in d1.iter().enumerate() {
                let mut acc = vec![0; self.modules[i + 2].len()];
                for &(t, c) in row {
                    for &(s, c2) in &d2[t] {
                        acc[s] = f.add(acc[s], f.mul(c, c2));
                    }
                }
                if acc.iter().any(|&x| x != 0) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Connected components of the graph whose edges are the non-zero
    /// differential entries; nodes are `(degree, index)`.
    fn components(&self) -> Vec<Vec<(usize, usize)>> {
        let offsets: Vec<usize> = self
            .modules
            .iter()
            .scan(0, |acc, m| {
                let o = *acc;
                *acc += m.len();
                Some(o)
            })
            .collect();
        let total: usize = self.modules.iter().map(|m| m.len()).sum();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, d) in self.differentials.iter().enumerate() {
            for (j, row) in d.iter().enumerate() {
                for &(t, c) in row {
                    if c != 0 {
                        let (a, b) = (find(&mut parent, offsets[i] + j), find(&mut parent, offsets[i + 1] + t));
                        parent[a] = b;
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
        for (i, m) in self.modules.iter().enumerate() {
            for j in 0..m.len() {
                let r = find(&mut parent, offsets[i] + j);
                groups.entry(r).or_default().push((i, j));
            }
        }
        groups.into_values().collect()
    }

    /// Homology dimensions of the window restriction, one per reported
    /// degree.
    fn dims(&self, w: Window) -> Vec<usize> {
        let n = self.modules.len();
        let mut out = vec![0usize; self.reported_degrees()];
        if n == 0 {
            return out;
        }
        // exponents where some summand changes membership
        let mut cuts: BTreeSet<i64> = [w.lo, w.hi + 1].into();
        for s in self.modules.iter().flatten() {
            for b in [s.lo, s.hi.map(|h| h + 1)].into_iter().flatten() {
                if b > w.lo && b <= w.hi {
                    cuts.insert(b);
                }
            }
        }
        let cuts: Vec<i64> = cuts.into_iter().collect();
        let comps = self.components();
        for seg in cuts.windows(2) {
            let (k, count) = (seg[0], (seg[1] - seg[0]) as usize);
            for comp in &comps {
                let h = self.component_homology(comp, k);
                for (o, x) in out.iter_mut().zip(h) {
                    *o += x * count;
                }
            }
        }
        out
    }

    fn component_homology(&self, comp: &[(usize, usize)], k: i64) -> Vec<usize> {
        let n = self.modules.len();
        let mut local: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(i, j) in comp {
            if self.modules[i][j].allows(k) {
                local[i].push(j);
            }
        }
        let ranks: Vec<usize> = (0..n.saturating_sub(1))
            .map(|i| {
                if local[i].is_empty() || local[i + 1].is_empty() {
                    return 0;
                }
                let col: std::collections::HashMap<usize, usize> =
                    local[i + 1].iter().enumerate().map(|(c, &t)| (t, c)).collect();
                let rows: Vec<Vec<Elem>> = local[i]
                    .iter()
                    .map(|&j| {
                        let mut r = vec![0; local[i + 1].len()];
                        for &(t, c) in &self.differentials[i][j] {
                            if let Some(&ci) = col.get(&t) {
                                r[ci] = self.field.add(r[ci], c);
                            }
                        }
                        r
                    })
                    .collect();
                linalg::rank(&self.field, &rows)
            })
            .collect();
        (0..self.reported_degrees())
            .map(|i| {
                let out_rank = ranks.get(i).copied().unwrap_or(0);
                let in_rank = if i == 0 { 0 } else { ranks[i - 1] };
                local[i].len() - out_rank - in_rank
            })
            .collect()
    }
}

/// Run a dimension function on `window`, doubling while some degree `>= 1`
/// changes and the cap allows; degree 0 may keep growing (it holds the
/// sections) and its flag reports that honestly.
fn stabilize(
    window: Window,
    dims: impl Fn(Window) -> Result<Vec<usize>, CechError>,
    h0: impl Fn(Window) -> Option<(String, usize)>,
) -> Result<CohomologyReport, CechError> {
    window.validate()?;
    let mut w = window;
    let mut cur = dims(w)?;
    loop {
        if !w.can_double() {
            let model = h0(w);
            let never: Vec<usize> = cur.iter().map(|d| d + 1).collect();
            let mut r = CohomologyReport::from_dims(w, &cur, &never, model.as_ref().map(|(s, d)| (s.as_str(), *d)));
            for d in &mut r.degrees {
                d.stable = false;
                if d.description == "0" {
                    d.description.clear();
                }
            }
            return Ok(r);
        }
        let next = dims(w.doubled())?;
        let settled = cur.iter().zip(&next).skip(1).all(|(a, b)| a == b);
        if settled || !w.doubled().can_double() {
            let model = h0(w);
            return Ok(CohomologyReport::from_dims(w, &cur, &next, model.as_ref().map(|(s, d)| (s.as_str(), *d))));
        }
        w = w.doubled();
        cur = next;
    }
}

/// Homology of `c` restricted to exponents in `window`, doubled until the
/// positive degrees stabilize or the cap is reached.
pub fn truncated_homology(c: &Complex, window: Window) -> Result<CohomologyReport, CechError> {
    stabilize(window, |w| Ok(c.dims(w)), |w| c.h0_model.as_ref().map(|(name, s)| (name.clone(), s.count_in(w))))
}

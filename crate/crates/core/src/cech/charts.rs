//! Čech complexes of `O⁺` for user-supplied chart covers with monomial
//! charts, and the scheme-side reference computation for `P¹`.

use std::collections::BTreeMap;

use super::{stabilize, truncated_homology, CechError, CohomologyReport, Complex, Summand, Window};
use crate::funcfield::{Elem, FiniteField, Poly, RatFunc};
use crate::huber::{HuberPairDesc, PlusDesc, RingDesc};
use crate::linalg;

/// Charts `U_i` and their intersections `U_σ`, keyed by sorted index sets
/// of size at least two.
#[derive(Clone, Debug)]
pub struct ChartCover {
    pub charts: Vec<HuberPairDesc>,
    pub overlaps: BTreeMap<Vec<usize>, HuberPairDesc>,
}

/// Named covers accepted by [`ChartCover::preset`].
pub const PRESETS: [&str; 4] = ["spa-a1-p1", "spa-gm-spec", "spa-a1-spec", "affine-line"];

impl ChartCover {
    pub fn preset(name: &str, q: u32) -> Result<Self, CechError> {
        let f = FiniteField::new(q)?;
        let t = RatFunc::t(&f);
        let inv_t = t.inv().unwrap();
        let laurent = || RingDesc::LaurentLoc(Poly::t(&f));
        let chart = |ring: RingDesc, gens: Vec<RatFunc>| HuberPairDesc::closure(&f, ring, gens);
        let two = |a: HuberPairDesc, b: HuberPairDesc, ab: HuberPairDesc| ChartCover {
            charts: vec![a, b],
            overlaps: [(vec![0, 1], ab)].into(),
        };
        Ok(match name {
            // (F_q[t], F_q[t]) and (F_q[t,1/t], F_q[1/t])
            "spa-a1-p1" => two(
                chart(RingDesc::Poly, vec![t.clone()]),
                chart(laurent(), vec![inv_t.clone()]),
                chart(laurent(), vec![t, inv_t]),
            ),
            // {|t| <= 1} and {|t| >= 1} inside Spa(F_q[t,1/t], F_q)
            "spa-gm-spec" => two(
                chart(laurent(), vec![t.clone()]),
                chart(laurent(), vec![inv_t.clone()]),
                chart(laurent(), vec![t, inv_t]),
            ),
            "spa-a1-spec" => ChartCover { charts: vec![chart(RingDesc::Poly, vec![])], overlaps: BTreeMap::new() },
            "affine-line" => ChartCover { charts: vec![chart(RingDesc::Poly, vec![t])], overlaps: BTreeMap::new() },
            other => return Err(CechError::UnsupportedDescriptor(format!("unknown cover {other}"))),
        })
    }

    fn piece(&self, sigma: &[usize]) -> Result<&HuberPairDesc, CechError> {
        if sigma.len() == 1 {
            return Ok(&self.charts[sigma[0]]);
        }
        self.overlaps.get(sigma).ok_or_else(|| CechError::Invalid(format!("missing intersection {sigma:?}")))
    }
}

fn is_monomial(f: &RatFunc) -> bool {
    f.num().is_monomial() && f.den().is_monomial()
}

/// `O⁺` of a monomial chart as the exponent interval of the monomials
/// `t^k` it contains.
fn sections(chart: &HuberPairDesc, label: String) -> Result<Summand, CechError> {
    let unsupported = || CechError::UnsupportedDescriptor(chart.render());
    match &chart.ring {
        RingDesc::Poly | RingDesc::Field => {}
        RingDesc::LaurentLoc(g) if g.is_monomial() && !g.is_constant() => {}
        _ => return Err(unsupported()),
    }
    match &chart.plus {
        PlusDesc::IntegralClosureOfImage(gens) if gens.iter().all(is_monomial) => {}
        _ => return Err(unsupported()),
    }
    let f = &chart.field;
    let member = |k: i64| -> Result<bool, CechError> {
        let x = RatFunc::monomial(f, 1, k);
        Ok(chart.contains_in_ring(&x)? && chart.in_plus(&x)?)
    };
    if !member(0)? {
        return Err(unsupported());
    }
    let lo = if member(-1)? { None } else { Some(0) };
    let hi = if member(1)? { None } else { Some(0) };
    let s = Summand::new(label, lo, hi);
    for k in [-3, -2, 2, 3] {
        if member(k)? != s.allows(k) {
            return Err(unsupported());
        }
    }
    Ok(s)
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|last| subsets(last, size - 1).into_iter().map(move |mut s| {
            s.push(last);
            s
        }))
        .collect()
}

impl ChartCover {
    /// Intersection of the charts' sections, the expected `H⁰`.
    pub fn global_sections(&self) -> Result<Summand, CechError> {
        let mut acc = Summand::new("global", None, None);
        for (i, c) in self.charts.iter().enumerate() {
            let s = sections(c, format!("U{i}"))?;
            acc.lo = acc.lo.max(s.lo);
            acc.hi = match (acc.hi, s.hi) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        Ok(acc)
    }

    /// `C^p = ⊕_{|σ| = p+1} O⁺(U_σ)` with the alternating restriction
    /// differential.
    pub fn complex(&self) -> Result<Complex, CechError> {
        let n = self.charts.len();
        if n == 0 {
            return Err(CechError::Invalid("empty cover".into()));
        }
        let field = &self.charts[0].field;
        let levels: Vec<Vec<Vec<usize>>> = (1..=n).map(|s| subsets(n, s)).collect();
        let modules = levels
            .iter()
            .map(|lv| lv.iter().map(|sigma| sections(self.piece(sigma)?, format!("U{sigma:?}"))).collect())
            .collect::<Result<Vec<Vec<Summand>>, CechError>>()?;
        let mut diffs = Vec::new();
        for p in 0..n - 1 {
            let rows = levels[p]
                .iter()
                .map(|tau| {
                    let mut row = Vec::new();
                    for (t, sigma) in levels[p + 1].iter().enumerate() {
                        if tau.iter().all(|i| sigma.contains(i)) {
                            let j = sigma.iter().position(|i| !tau.contains(i)).unwrap();
                            row.push((t, if j % 2 == 0 { 1 } else { field.neg(1) }));
                        }
                    }
                    row
                })
                .collect();
            diffs.push(rows);
        }
        let global = self.global_sections()?;
        let name = if global.lo == Some(0) && global.hi == Some(0) { "≅ F_q" } else { "≅ O⁺(X)" };
        Ok(Complex::new(field, modules, diffs, false)?.with_h0_model(name, global))
    }
}

/// Čech homology of `O⁺` on the cover, truncated to `window`.
pub fn cech_o_plus(cover: &ChartCover, window: Window) -> Result<CohomologyReport, CechError> {
    truncated_homology(&cover.complex()?, window)
}

/// `H^i(P¹, O)` from `F_q[t] ⊕ F_q[1/t] → F_q[t, 1/t]`, `(a, b) ↦ b − a`,
/// as one dense matrix over the monomials in the window.
pub fn cech_p1_o(q: u32, window: Window) -> Result<CohomologyReport, CechError> {
    let f = FiniteField::new(q)?;
    let dims = |w: Window| {
        let target: Vec<i64> = (w.lo..=w.hi).collect();
        let col = |k: i64| (k - w.lo) as usize;
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for k in 0..=w.hi {
            let mut r = vec![0; target.len()];
            r[col(k)] = f.neg(1);
            rows.push(r);
        }
        for k in w.lo..=0 {
            let mut r = vec![0; target.len()];
            r[col(k)] = 1;
            rows.push(r);
        }
        let rank = linalg::rank(&f, &rows);
        Ok(vec![rows.len() - rank, target.len() - rank])
    };
    stabilize(window, dims, |_| Some(("≅ F_q".to_string(), 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line_both_ways() {
        for q in [2, 3, 4, 9] {
            let a = cech_o_plus(&ChartCover::preset("spa-a1-p1", q).unwrap(), Window::default()).unwrap();
            let b = cech_p1_o(q, Window::default()).unwrap();
            assert_eq!(a.dims(), vec![1, 0]);
            assert_eq!(a, b);
            assert!(a.degrees.iter().all(|d| d.stable));
            assert_eq!(a.degrees[0].description, "≅ F_q");
        }
    }

    #[test]
    fn other_presets() {
        let r = cech_o_plus(&ChartCover::preset("spa-gm-spec", 5).unwrap(), Window::default()).unwrap();
        assert_eq!(r.dims(), vec![1, 0]);
        let r = cech_o_plus(&ChartCover::preset("spa-a1-spec", 5).unwrap(), Window::default()).unwrap();
        assert_eq!(r.dims(), vec![1]);
        let r = cech_o_plus(&ChartCover::preset("affine-line", 5).unwrap(), Window::symmetric(8)).unwrap();
        assert_eq!(r.dims(), vec![9]);
        assert_eq!(r.degrees[0].description, "≅ O⁺(X)");
        assert!(ChartCover::preset("p2", 5).is_err());
    }

    #[test]
    fn unsupported_chart() {
        let f = FiniteField::new(3).unwrap();
        let g = crate::funcfield::parse_poly(&f, "t + 1").unwrap();
        let cover = ChartCover {
            charts: vec![HuberPairDesc::closure(&f, RingDesc::LaurentLoc(g), vec![RatFunc::t(&f)])],
            overlaps: BTreeMap::new(),
        };
        assert!(matches!(cover.complex(), Err(CechError::UnsupportedDescriptor(_))));
    }
}

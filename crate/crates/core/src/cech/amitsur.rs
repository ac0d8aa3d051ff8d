//! The Amitsur complex `0 → A⁺ → B⁺ → (B ⊗_A B)⁺ → … → B_N⁺` of a Kummer
//! algebra and its contracting homotopy.
//!
//! Degree `i` of the complex is `B_{i+1}⁺`; the augmentation `A⁺ → B⁺` is
//! `I`, so exactness means `H⁰ = A⁺` and `H^i = 0` for `i >= 1`.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{CechError, Complex, Summand, ThresholdModule};
use crate::funcfield::RatFunc;
use crate::kummer::sample::random_element;
use crate::kummer::{KummerAlgebra, KummerError, TensorElement};
use crate::valgroup::ceil;

#[derive(Clone, Debug)]
pub struct AmitsurComplex {
    alg: KummerAlgebra,
    top: usize,
    modules: Vec<ThresholdModule>,
    // signs[n][k]: sign of the coface inserting 1 at slot k, B_n → B_{n+1}
    signs: Vec<Vec<i64>>,
    complex: Complex,
}

fn all_keys(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|k| (0..d).map(move |g| [k.clone(), vec![g]].concat())).collect();
    }
    out
}

fn standard_signs(top: usize) -> Vec<Vec<i64>> {
    (0..top).map(|n| (0..=n).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect()).collect()
}

/// Differentials `d: B_n → B_{n+1}`, `n = 1..top-1`, as sparse maps on the
/// coset-tuple bases.
fn build_complex(
    alg: &KummerAlgebra,
    modules: &[ThresholdModule],
    signs: &[Vec<i64>],
    checked: bool,
) -> Result<Complex, CechError> {
    let f = alg.field();
    let mut diffs = Vec::new();
    for n in 1..modules.len() {
        let target: HashMap<&Vec<usize>, usize> = modules[n].labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let rows = modules[n - 1]
            .labels
            .iter()
            .map(|key| {
                let mut acc: HashMap<usize, u16> = HashMap::new();
                for (k, &s) in signs[n].iter().enumerate() {
                    let mut k2 = key.clone();
                    k2.insert(k, 0);
                    let e = acc.entry(target[&k2]).or_insert(0);
                    *e = f.add(*e, f.from_int(s));
                }
                let mut row: Vec<(usize, u16)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
                row.sort();
                row
            })
            .collect();
        diffs.push(rows);
    }
    let summands: Vec<Vec<Summand>> = modules.iter().map(|m| m.summands()).collect();
    let c = if checked {
        Complex::new(f, summands, diffs, true)?
    } else {
        Complex::new_unchecked(f, summands, diffs, true)?
    };
    Ok(c.with_h0_model("≅ A⁺", Summand::new("A+", Some(0), None)))
}

/// The complex up to `B_top⁺` (`top <= 4`); `d∘d = 0` is checked on the
/// basis at construction.
pub fn amitsur_complex(alg: &KummerAlgebra, top: usize) -> Result<AmitsurComplex, CechError> {
    match alg.check_level(top) {
        Err(KummerError::LevelCap(n)) => return Err(CechError::LevelCap(n)),
        other => other?,
    }
    let modules: Vec<ThresholdModule> = (1..=top)
        .map(|n| {
            let labels = all_keys(alg.degree(), n);
            let thresholds = labels.iter().map(|k| alg.threshold(k)).collect();
            ThresholdModule { labels, thresholds }
        })
        .collect();
    let signs = standard_signs(top);
    let complex = build_complex(alg, &modules, &signs, true)?;
    Ok(AmitsurComplex { alg: alg.clone(), top, modules, signs, complex })
}

impl AmitsurComplex {
    pub fn algebra(&self) -> &KummerAlgebra {
        &self.alg
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// `B_n⁺` for `1 <= n <= top`.
    pub fn module(&self, n: usize) -> &ThresholdModule {
        &self.modules[n - 1]
    }

    /// Test fixture: flip the sign of one coface in `d: B_n → B_{n+1}`.
    pub fn with_corrupted_sign(mut self, n: usize, slot: usize) -> Self {
        self.signs[n][slot] = -self.signs[n][slot];
        self.complex = build_complex(&self.alg, &self.modules, &self.signs, false).expect("same shapes");
        self
    }

    pub fn contains(&self, x: &TensorElement) -> bool {
        let m = self.module(x.level());
        m.contains_valuations(x.terms().iter().map(|(k, c)| (k.as_slice(), self.alg.valuation(c).unwrap())))
    }

    /// `I: A → B_1`.
    pub fn inclusion(&self, a: &RatFunc) -> TensorElement {
        TensorElement::scalar(a.clone(), 1)
    }

    /// `d: B_n → B_{n+1}`, the signed sum of cofaces.
    pub fn d(&self, x: &TensorElement) -> TensorElement {
        let f = self.alg.field();
        let mut out = TensorElement::zero(x.level() + 1);
        for (k, &s) in self.signs[x.level()].iter().enumerate() {
            let c = self.alg.coface(k, x);
            out = out.add(&c.scale(&RatFunc::constant(f, f.from_int(s)))).unwrap();
        }
        out
    }

    /// `I∘Φ` on `B_n`: the `1 ⊗ … ⊗ 1` coefficient times `1 ⊗ … ⊗ 1`.
    pub fn projection(&self, x: &TensorElement) -> TensorElement {
        TensorElement::scalar(self.alg.phi(x), x.level())
    }

    /// Homotopy `D: B_n → B_{n-1}` with `I∘Φ − id = dD + Dd`, namely
    /// `(I∘Φ − id)∘h` for the contraction `h(c_1 ⊗ c_2 ⊗ …) = s(c_1)·c_2 ⊗ …`;
    /// zero on `B_1`.
    pub fn homotopy(&self, x: &TensorElement) -> TensorElement {
        if x.level() == 1 {
            return TensorElement::zero(0);
        }
        let y = self.alg.contraction(x);
        self.projection(&y).sub(&y).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub level: usize,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyReport {
    pub pass: bool,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

const MAX_VIOLATIONS: usize = 32;

pub fn verify_homotopy(c: &AmitsurComplex) -> HomotopyReport {
    verify_homotopy_with(c, 16, 0)
}

/// Check `Φ∘I = id`, `I∘Φ − id = dD + Dd`, `d∘d = 0` and that `Φ`, `D` and
/// every `D_i` preserve the integral modules, on each basis element
/// `u^⌈τ⌉·e` and on `samples` random integral elements per level.
pub fn verify_homotopy_with(c: &AmitsurComplex, samples: usize, seed: u64) -> HomotopyReport {
    let alg = &c.alg;
    let u = alg.uniformizer();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut checked = 0;
    fn fail(v: &mut Vec<Violation>, check: &str, level: usize, witness: String) {
        v.push(Violation { check: check.into(), level, witness });
    }

    for k in 0..4 {
        let a = u.pow(k);
        checked += 1;
        if alg.phi(&c.inclusion(&a)) != a || !c.contains(&c.inclusion(&a)) {
            fail(&mut violations, "phi-after-inclusion", 0, a.render());
        }
    }

    for n in 1..=c.top {
        let mut elements: Vec<TensorElement> = c
            .module(n)
            .labels
            .iter()
            .zip(&c.module(n).thresholds)
            .map(|(key, t)| TensorElement::basis(key.clone(), u.pow(ceil(*t))))
            .collect();
        let mut tries = 0;
        let mut drawn = 0;
        while drawn < samples && tries < 50 * samples {
            tries += 1;
            let x = random_element(alg, n, 64, 4, &mut rng);
            if c.contains(&x) {
                elements.push(x);
                drawn += 1;
            }
        }
        for x in &elements {
            checked += 1;
            let w = || alg.render_tensor(x);
            if alg.valuation(&alg.phi(x)).is_some_and(|v| v < 0) {
                fail(&mut violations, "phi-threshold", n, w());
            }
            for i in 1..=n {
                let di = alg.homotopy_d(i, x).unwrap();
                if !c.contains(&di) {
                    fail(&mut violations, &format!("D_{i}-threshold"), n, w());
                }
            }
            if n >= 2 && !c.contains(&c.homotopy(x)) {
                fail(&mut violations, "D-threshold", n, w());
            }
            if n < c.top {
                let lhs = c.projection(x).sub(x).unwrap();
                let d_x = c.d(x);
                let mut rhs = c.homotopy(&d_x);
                if n >= 2 {
                    rhs = rhs.add(&c.d(&c.homotopy(x))).unwrap();
                }
                if lhs != rhs {
                    fail(&mut violations, "homotopy-identity", n, w());
                }
                if !c.contains(&d_x) {
                    fail(&mut violations, "d-threshold", n, w());
                }
                if n + 1 < c.top && !c.d(&d_x).is_zero() {
                    fail(&mut violations, "d-squared", n, w());
                }
            }
        }
        if violations.len() > MAX_VIOLATIONS {
            break;
        }
    }
    violations.truncate(MAX_VIOLATIONS);
    HomotopyReport { pass: violations.is_empty(), checked, violations }
}

#[cfg(test)]
mod tests {
    use super::super::{truncated_homology, Window};
    use super::*;
    use crate::kummer::sample::build_config;

    fn sqrt_t() -> KummerAlgebra {
        build_config(9, &[(2, "t")])
    }

    #[test]
    fn first_differential() {
        let c = amitsur_complex(&sqrt_t(), 3).unwrap();
        let alg = c.algebra();
        let t = alg.parse_tensor("T", 1).unwrap();
        let d = c.d(&t);
        assert_eq!(d, alg.parse_tensor("1(x)T - T(x)1", 2).unwrap());
        assert_eq!(d.coeff(&[0, 1]).map(|c| c.is_one()), Some(true));
        assert!(d.coeff(&[1, 0]).is_some());
        assert!(matches!(amitsur_complex(&sqrt_t(), 5), Err(CechError::LevelCap(5))));
    }

    #[test]
    fn homotopy_on_square_root() {
        let c = amitsur_complex(&sqrt_t(), 3).unwrap();
        let r = verify_homotopy(&c);
        assert!(r.pass, "{:?}", r.violations);
        let one = c.algebra().one(2);
        assert!(c.d(&c.homotopy(&one)).add(&c.homotopy(&c.d(&one))).unwrap().is_zero());
        assert!(c.projection(&one).sub(&one).unwrap().is_zero());
    }

    #[test]
    fn corrupted_sign_is_caught() {
        let c = amitsur_complex(&sqrt_t(), 3).unwrap().with_corrupted_sign(1, 1);
        let r = verify_homotopy(&c);
        assert!(!r.pass);
        assert!(r.violations.iter().any(|v| v.check == "homotopy-identity"));
        assert!(!r.violations[0].witness.is_empty());
        assert!(!c.complex().d_squared_violations().is_empty());
    }

    #[test]
    fn window_homology() {
        let c = amitsur_complex(&sqrt_t(), 4).unwrap();
        let r = truncated_homology(c.complex(), Window::symmetric(8)).unwrap();
        assert_eq!(r.window, Window::symmetric(8));
        assert_eq!(r.dims(), vec![9, 0, 0]);
        assert_eq!(r.degrees[0].description, "≅ A⁺");
        assert!(r.higher_vanish());
    }
}

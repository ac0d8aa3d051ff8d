//! Elements of `B_n = B ⊗_A … ⊗_A B` as coefficient maps on coset tuples.

use std::collections::BTreeMap;

use num_rational::Rational64;

use super::{KummerAlgebra, KummerError};
use crate::funcfield::parse::{eval, parse_expr, Ops, RatFuncOps};
use crate::funcfield::{FieldError, RatFunc};
use crate::valgroup::Value;

/// `Σ a_key · e_{key_1} ⊗ … ⊗ e_{key_n}`; absent keys are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    level: usize,
    terms: BTreeMap<Vec<usize>, RatFunc>,
}

impl TensorElement {
    pub fn zero(level: usize) -> Self {
        TensorElement { level, terms: BTreeMap::new() }
    }

    pub fn scalar(a: RatFunc, level: usize) -> Self {
        let mut x = Self::zero(level);
        x.add_term(vec![0; level], a);
        x
    }

    pub fn basis(key: Vec<usize>, a: RatFunc) -> Self {
        let mut x = Self::zero(key.len());
        x.add_term(key, a);
        x
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, RatFunc> {
        &self.terms
    }

    pub fn coeff(&self, key: &[usize]) -> Option<&RatFunc> {
        self.terms.get(key)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: Vec<usize>, a: RatFunc) {
        debug_assert_eq!(key.len(), self.level);
        if a.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                let s = &*c + &a;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(key, a);
            }
        }
    }

    pub fn add(&self, o: &TensorElement) -> Result<TensorElement, KummerError> {
        if self.level != o.level {
            return Err(KummerError::LevelMismatch(self.level, o.level));
        }
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> TensorElement {
        TensorElement { level: self.level, terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &TensorElement) -> Result<TensorElement, KummerError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: &RatFunc) -> TensorElement {
        let mut out = Self::zero(self.level);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * a);
        }
        out
    }

    /// Whether only the all-trivial key occurs.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|k| k.iter().all(|&g| g == 0))
    }
}

impl KummerAlgebra {
    pub fn one(&self, level: usize) -> TensorElement {
        TensorElement::scalar(RatFunc::one(&self.field), level)
    }

    /// Ring product in `B_n`, reducing `T_k^{m_k} = α_k` slotwise.
    pub fn multiply(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement, KummerError> {
        if x.level != y.level {
            return Err(KummerError::LevelMismatch(x.level, y.level));
        }
        let mut out = TensorElement::zero(x.level);
        for (k1, c1) in &x.terms {
            for (k2, c2) in &y.terms {
                let mut c = c1 * c2;
                let mut key = Vec::with_capacity(x.level);
                for (&a, &b) in k1.iter().zip(k2) {
                    let (s, carry) = self.mul_basis(a, b);
                    if !carry.is_one() {
                        c = &c * carry;
                    }
                    key.push(s);
                }
                out.add_term(key, c);
            }
        }
        Ok(out)
    }

    /// `m_σ(b_1 ⊗ … ⊗ b_n) = σ_1(b_1)···σ_{n-1}(b_{n-1})·b_n` as a level-1
    /// element; `sigmas` has length `n - 1`.
    pub fn m_sigma(&self, x: &TensorElement, sigmas: &[usize]) -> Result<TensorElement, KummerError> {
        if sigmas.len() + 1 != x.level {
            return Err(KummerError::LevelMismatch(sigmas.len() + 1, x.level));
        }
        let f = &self.field;
        let mut out = TensorElement::zero(1);
        for (key, c) in &x.terms {
            let mut scal = 1;
            for (s, &g) in sigmas.iter().zip(key) {
                scal = f.mul(scal, self.character(*s, g));
            }
            let (idx, carry) = self.collapse(key);
            out.add_term(vec![idx], (c * &carry).scale(scal));
        }
        Ok(out)
    }

    /// `e_{γ_1}···e_{γ_n} = carry·e_γ`.
    pub fn collapse(&self, key: &[usize]) -> (usize, RatFunc) {
        let mut idx = 0;
        let mut carry = RatFunc::one(&self.field);
        for &g in key {
            let (s, c) = self.mul_basis(idx, g);
            if !c.is_one() {
                carry = &carry * c;
            }
            idx = s;
        }
        (idx, carry)
    }

    /// Value of a level-1 element: `min_γ v(c_γ) + v(e_γ)`, exact because
    /// the `v(e_γ)` are distinct modulo the base value group.
    pub fn b_value(&self, b: &TensorElement) -> Value {
        b.terms
            .iter()
            .map(|(k, c)| Rational64::from_integer(self.valuation(c).unwrap()) + self.e_value(k[0]))
            .min()
            .map_or(Value::zero(1), |v| Value::new(vec![v]).unwrap())
    }

    /// `max_σ |m_σ(x)|`, i.e. the additive minimum over all twist tuples.
    pub fn sup_value(&self, x: &TensorElement) -> Value {
        let n = x.level;
        let g = self.degree();
        let count = g.pow((n - 1) as u32);
        let mut best = Value::zero(1);
        let mut sig = vec![0usize; n - 1];
        for c in 0..count {
            let mut r = c;
            for s in sig.iter_mut().rev() {
                *s = r % g;
                r /= g;
            }
            let v = self.b_value(&self.m_sigma(x, &sig).unwrap());
            best = best.min_additive(&v).unwrap();
        }
        best
    }

    /// Threshold criterion: `v(a) + Σ v(e_{γ_i}) >= 0` for every term.
    pub fn is_integral(&self, x: &TensorElement) -> bool {
        x.terms.iter().all(|(k, c)| Rational64::from_integer(self.valuation(c).unwrap()) >= self.threshold(k))
    }

    /// Coefficient of `1 ⊗ … ⊗ 1`.
    pub fn phi(&self, x: &TensorElement) -> RatFunc {
        x.terms.get(&vec![0; x.level]).cloned().unwrap_or_else(|| RatFunc::zero(&self.field))
    }

    /// Apply the coefficient-of-1 projection to the first `i - 1` slots.
    pub fn homotopy_d(&self, i: usize, x: &TensorElement) -> Result<TensorElement, KummerError> {
        if i < 1 || i > x.level {
            return Err(KummerError::IndexOutOfRange(i, x.level));
        }
        let mut out = TensorElement::zero(x.level);
        for (k, c) in &x.terms {
            if k[..i - 1].iter().all(|&g| g == 0) {
                out.add_term(k.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Insert `1` at slot position `pos` (0-based), `B_n → B_{n+1}`.
    pub fn coface(&self, pos: usize, x: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero(x.level + 1);
        for (k, c) in &x.terms {
            let mut key = k.clone();
            key.insert(pos, 0);
            out.add_term(key, c.clone());
        }
        out
    }

    /// `c_1 ⊗ c_2 ⊗ … ↦ s(c_1)·c_2 ⊗ …`, `B_n → B_{n-1}` (`n >= 2`).
    pub fn contraction(&self, x: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero(x.level - 1);
        for (k, c) in &x.terms {
            if k[0] == 0 {
                out.add_term(k[1..].to_vec(), c.clone());
            }
        }
        out
    }

    fn slot_string(&self, g: usize) -> String {
        let parts: Vec<String> = self
            .coset(g)
            .iter()
            .enumerate()
            .filter(|(_, &i)| i > 0)
            .map(|(k, &i)| if i == 1 { format!("T{}", k + 1) } else { format!("T{}^{}", k + 1, i) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.concat()
        }
    }

    /// Text form such as `1/t * T1(x)T1 + 2 * 1(x)1`.
    pub fn render_tensor(&self, x: &TensorElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in &x.terms {
            let slots: Vec<String> = k.iter().map(|&g| self.slot_string(g)).collect();
            let slots = slots.join("(x)");
            if c.is_one() {
                parts.push(slots);
            } else {
                let s = c.render();
                let s = if crate::funcfield::ratfunc::has_top_level_sum(&s) { format!("({s})") } else { s };
                parts.push(format!("{s} * {slots}"));
            }
        }
        parts.join(" + ")
    }

    /// Parse an element of `B_level`. Slots are separated by `(x)`, slot
    /// generators are `T1..Tr` (or `T` when `r = 1`), scalars broadcast.
    pub fn parse_tensor(&self, s: &str, level: usize) -> Result<TensorElement, KummerError> {
        self.check_level(level)?;
        let e = parse_expr(s)?;
        let x = eval(&e, &TensorOps(self))?;
        if x.level == level {
            Ok(x)
        } else if x.level == 1 && x.is_scalar() {
            Ok(TensorElement::scalar(self.phi(&x), level))
        } else {
            Err(KummerError::LevelMismatch(x.level, level))
        }
    }
}

struct TensorOps<'a>(&'a KummerAlgebra);

fn perr(e: KummerError) -> FieldError {
    match e {
        KummerError::Field(f) => f,
        other => FieldError::Parse(other.to_string()),
    }
}

impl TensorOps<'_> {
    fn align(&self, a: TensorElement, b: TensorElement) -> Result<(TensorElement, TensorElement), FieldError> {
        if a.level == b.level {
            return Ok((a, b));
        }
        let alg = self.0;
        if a.level == 1 && a.is_scalar() {
            return Ok((TensorElement::scalar(alg.phi(&a), b.level), b));
        }
        if b.level == 1 && b.is_scalar() {
            let l = a.level;
            return Ok((a, TensorElement::scalar(alg.phi(&b), l)));
        }
        Err(perr(KummerError::LevelMismatch(a.level, b.level)))
    }
}

impl Ops<TensorElement> for TensorOps<'_> {
    fn num(&self, n: i64) -> Result<TensorElement, FieldError> {
        Ok(TensorElement::scalar(RatFuncOps(&self.0.field).num(n)?, 1))
    }

    fn var(&self, name: &str) -> Result<TensorElement, FieldError> {
        let alg = self.0;
        let k = if name == "T" && alg.rank() == 1 {
            Some(0)
        } else {
            name.strip_prefix('T').and_then(|d| d.parse::<usize>().ok()).filter(|&k| k >= 1 && k <= alg.rank()).map(|k| k - 1)
        };
        match k {
            Some(k) => {
                let mut tuple = vec![0u32; alg.rank()];
                tuple[k] = 1;
                Ok(TensorElement::basis(vec![alg.index_of(&tuple)], RatFunc::one(&alg.field)))
            }
            None => Ok(TensorElement::scalar(RatFuncOps(&alg.field).var(name)?, 1)),
        }
    }

    fn add(&self, a: TensorElement, b: TensorElement) -> Result<TensorElement, FieldError> {
        let (a, b) = self.align(a, b)?;
        a.add(&b).map_err(perr)
    }

    fn neg(&self, a: TensorElement) -> Result<TensorElement, FieldError> {
        Ok(a.neg())
    }

    fn mul(&self, a: TensorElement, b: TensorElement) -> Result<TensorElement, FieldError> {
        let (a, b) = self.align(a, b)?;
        self.0.multiply(&a, &b).map_err(perr)
    }

    fn div(&self, a: TensorElement, b: TensorElement) -> Result<TensorElement, FieldError> {
        if !(b.level == 1 && b.is_scalar()) {
            return Err(FieldError::Parse("can only divide by scalars".into()));
        }
        let inv = self.0.phi(&b).inv().ok_or_else(|| FieldError::Invalid("division by zero".into()))?;
        Ok(a.scale(&inv))
    }

    fn pow(&self, a: TensorElement, e: i64) -> Result<TensorElement, FieldError> {
        if a.level == 1 && a.is_scalar() {
            return Ok(TensorElement::scalar(RatFuncOps(&self.0.field).pow(self.0.phi(&a), e)?, 1));
        }
        if e < 0 {
            return Err(FieldError::Parse("negative powers only for scalars".into()));
        }
        let mut acc = self.0.one(a.level);
        for _ in 0..e.min(64) {
            acc = self.0.multiply(&acc, &a).map_err(perr)?;
        }
        Ok(acc)
    }

    fn tensor(&self, parts: Vec<TensorElement>) -> Result<TensorElement, FieldError> {
        let mut acc = TensorElement::scalar(RatFunc::one(&self.0.field), 0);
        for p in parts {
            let mut out = TensorElement::zero(acc.level + p.level);
            for (k1, c1) in &acc.terms {
                for (k2, c2) in &p.terms {
                    let mut key = k1.clone();
                    key.extend_from_slice(k2);
                    out.add_term(key, c1 * c2);
                }
            }
            acc = out;
        }
        if acc.level > super::MAX_LEVEL {
            return Err(perr(KummerError::LevelCap(acc.level)));
        }
        Ok(acc)
    }
}

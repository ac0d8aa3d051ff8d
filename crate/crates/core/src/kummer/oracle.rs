//! Integrality by linear algebra: the characteristic polynomial of
//! multiplication by `x` must have coefficients in the valuation ring.
//!
//! Multiplication by `x` preserves the subalgebra `A[H]` spanned by the
//! basis monomials of the subgroup `H` generated by the support of `x`, so
//! the matrix is taken there. After a diagonal similarity and scaling by
//! `u^s` the matrix lies over `O`, and its characteristic polynomial is
//! computed modulo `u^{d·s}`, which is exactly the precision needed.

use std::collections::BTreeMap;

use num_rational::Rational64;

use super::{KummerAlgebra, TensorElement};
use crate::funcfield::{Elem, FiniteField, RatFunc, Series};

/// Diagnostic data of one oracle run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRun {
    pub subalgebra_dim: usize,
    pub scale: i64,
    pub precision: usize,
    pub integral: bool,
}

impl KummerAlgebra {
    /// Elements of the subgroup of `(Γ_B/Γ_A)^n` generated by `gens`.
    pub fn generated_subgroup(&self, n: usize, gens: &[&Vec<usize>]) -> Vec<Vec<usize>> {
        let mut seen: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
        let mut stack = vec![vec![0usize; n]];
        seen.insert(vec![0; n], ());
        while let Some(h) = stack.pop() {
            for g in gens {
                let s: Vec<usize> = h.iter().zip(g.iter()).map(|(&a, &b)| self.add_cosets(a, b)).collect();
                if seen.insert(s.clone(), ()).is_none() {
                    stack.push(s);
                }
            }
        }
        seen.into_keys().collect()
    }

    fn support_subgroup(&self, x: &TensorElement) -> Vec<Vec<usize>> {
        let gens: Vec<&Vec<usize>> = x.terms().keys().collect();
        self.generated_subgroup(x.level(), &gens)
    }

    /// Order of the subgroup generated by the support of `x`.
    pub fn support_subgroup_order(&self, x: &TensorElement) -> usize {
        self.support_subgroup(x).len()
    }

    pub fn is_integral_oracle(&self, x: &TensorElement) -> bool {
        self.oracle_run(x).integral
    }

    pub fn oracle_run(&self, x: &TensorElement) -> OracleRun {
        let basis = self.support_subgroup(x);
        let d = basis.len();
        let pos: BTreeMap<&Vec<usize>, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();

        // multiplication matrix: column c is x·e_{basis[c]}
        let mut entries: Vec<(usize, usize, RatFunc)> = Vec::new();
        let mut acc: BTreeMap<(usize, usize), RatFunc> = BTreeMap::new();
        for (c, g) in basis.iter().enumerate() {
            for (h, a) in x.terms() {
                let mut coeff = a.clone();
                let mut key = Vec::with_capacity(g.len());
                for (&hi, &gi) in h.iter().zip(g) {
                    let (s, carry) = self.mul_basis(hi, gi);
                    if !carry.is_one() {
                        coeff = &coeff * carry;
                    }
                    key.push(s);
                }
                let r = pos[&key];
                let e = acc.entry((r, c)).or_insert_with(|| RatFunc::zero(&self.field));
                *e = &*e + &coeff;
            }
        }
        for ((r, c), v) in acc {
            if !v.is_zero() {
                entries.push((r, c, v));
            }
        }

        // diagonal conditioning u^{w_r - w_c}
        let w: Vec<i64> =
            basis.iter().map(|k| k.iter().map(|&g| self.e_value(g)).sum::<Rational64>().floor().to_integer()).collect();
        let vals: Vec<i64> = entries.iter().map(|(r, c, v)| self.valuation(v).unwrap() + w[*r] - w[*c]).collect();
        let s = vals.iter().map(|&v| -v).max().unwrap_or(0).max(0);
        if s == 0 {
            return OracleRun { subalgebra_dim: d, scale: 0, precision: 0, integral: true };
        }
        let prec = d * s as usize;
        let ring = Trunc { f: &self.field, p: prec };
        let mut m = vec![ring.zero(); d * d];
        for ((r, c, v), &val) in entries.iter().zip(&vals) {
            let shift = w[*r] - w[*c] + s;
            let ev = val - w[*r] + w[*c];
            let rel = prec as i64 - shift - ev;
            if rel <= 0 {
                continue;
            }
            let ser = Series::expand(v, &self.place, rel).unwrap();
            let mut coeffs = ring.zero();
            for (j, slot) in coeffs.iter_mut().enumerate() {
                *slot = ser.coeff(j as i64 - shift);
            }
            m[r * d + c] = coeffs;
        }
        let cp = ring.charpoly(m, d);
        let integral = (1..=d).all(|k| ring.val(&cp[k]) >= k * s as usize);
        OracleRun { subalgebra_dim: d, scale: s, precision: prec, integral }
    }
}

/// Arithmetic in `F_q[u]/(u^p)` on coefficient vectors of length `p`.
struct Trunc<'a> {
    f: &'a FiniteField,
    p: usize,
}

impl Trunc<'_> {
    fn zero(&self) -> Vec<Elem> {
        vec![0; self.p]
    }

    fn val(&self, a: &[Elem]) -> usize {
        a.iter().position(|&c| c != 0).unwrap_or(self.p)
    }

    fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = self.f;
        let mut out = self.zero();
        let (va, vb) = (self.val(a), self.val(b));
        for i in va..self.p {
            if a[i] == 0 {
                continue;
            }
            for j in vb..self.p - i {
                if b[j] != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
                }
            }
        }
        out
    }

    /// `acc -= a·b`.
    fn sub_mul(&self, acc: &mut [Elem], a: &[Elem], b: &[Elem]) {
        let f = self.f;
        let vb = self.val(b);
        for i in self.val(a)..self.p {
            if a[i] == 0 {
                continue;
            }
            for j in vb..self.p - i {
                if b[j] != 0 {
                    acc[i + j] = f.sub(acc[i + j], f.mul(a[i], b[j]));
                }
            }
        }
    }

    /// Some `m` with `m·b ≡ a`, given `val(a) >= val(b) < p`.
    fn quotient(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = self.f;
        let vb = self.val(b);
        let n = self.p - vb;
        let bb = &b[vb..];
        let aa = &a[vb..];
        let inv0 = f.inv(bb[0]).unwrap();
        let mut m = vec![0; self.p];
        for k in 0..n {
            let mut acc = aa[k];
            for j in 1..=k {
                if bb[j] != 0 && m[k - j] != 0 {
                    acc = f.sub(acc, f.mul(bb[j], m[k - j]));
                }
            }
            m[k] = f.mul(acc, inv0);
        }
        m
    }

    /// Characteristic polynomial `det(X - M)` as coefficients of
    /// `X^d, X^{d-1}, …, X^0`, via Hessenberg reduction with
    /// minimal-valuation pivots.
    fn charpoly(&self, mut m: Vec<Vec<Elem>>, d: usize) -> Vec<Vec<Elem>> {
        let idx = |r: usize, c: usize| r * d + c;
        for j in 0..d.saturating_sub(2) {
            let piv = (j + 1..d).min_by_key(|&r| self.val(&m[idx(r, j)])).unwrap();
            if self.val(&m[idx(piv, j)]) == self.p {
                continue;
            }
            if piv != j + 1 {
                for c in 0..d {
                    m.swap(idx(piv, c), idx(j + 1, c));
                }
                for r in 0..d {
                    m.swap(idx(r, piv), idx(r, j + 1));
                }
            }
            let pivot = m[idx(j + 1, j)].clone();
            for i in j + 2..d {
                if self.val(&m[idx(i, j)]) == self.p {
                    continue;
                }
                let mu = self.quotient(&m[idx(i, j)], &pivot);
                // row_i -= mu·row_{j+1}
                for c in j..d {
                    let src = m[idx(j + 1, c)].clone();
                    self.sub_mul(&mut m[idx(i, c)], &mu, &src);
                }
                m[idx(i, j)] = self.zero();
                // col_{j+1} += mu·col_i
                let neg_mu: Vec<Elem> = mu.iter().map(|&c| self.f.neg(c)).collect();
                for r in 0..d {
                    let src = m[idx(r, i)].clone();
                    self.sub_mul(&mut m[idx(r, j + 1)], &neg_mu, &src);
                }
            }
        }
        // p_k(X) = (X - h_kk) p_{k-1} - Σ_{i<k} h_ik (Π_{l=i+1}^{k} h_{l,l-1}) p_{i-1}
        // polynomials stored lowest degree first
        let mut polys: Vec<Vec<Vec<Elem>>> = vec![vec![self.one()]];
        for k in 0..d {
            let prev = &polys[k];
            let mut next = vec![self.zero(); k + 2];
            for (e, c) in prev.iter().enumerate() {
                for t in 0..self.p {
                    next[e + 1][t] = self.f.add(next[e + 1][t], c[t]);
                }
                self.sub_mul(&mut next[e], &m[idx(k, k)], c);
            }
            let mut prod = self.one();
            for i in (0..k).rev() {
                prod = self.mul(&prod, &m[idx(i + 1, i)]);
                if self.val(&prod) == self.p {
                    break;
                }
                let coef = self.mul(&m[idx(i, k)], &prod);
                if self.val(&coef) == self.p {
                    continue;
                }
                for (e, c) in polys[i].iter().enumerate() {
                    self.sub_mul(&mut next[e], &coef, c);
                }
            }
            polys.push(next);
        }
        let mut cp = polys.pop().unwrap();
        cp.reverse();
        cp
    }

    fn one(&self) -> Vec<Elem> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }
}

/// Exact characteristic polynomial over `F_q(t)` (coefficients of
/// `X^d … X^0`) by Hessenberg reduction; for small cross-checks.
pub fn charpoly_exact(m: &[Vec<RatFunc>]) -> Vec<RatFunc> {
    let d = m.len();
    let field = if d > 0 { m[0][0].field().clone() } else { return vec![] };
    let mut h: Vec<Vec<RatFunc>> = m.to_vec();
    for j in 0..d.saturating_sub(2) {
        let Some(piv) = (j + 1..d).find(|&r| !h[r][j].is_zero()) else { continue };
        h.swap(piv, j + 1);
        for row in h.iter_mut() {
            row.swap(piv, j + 1);
        }
        for i in j + 2..d {
            if h[i][j].is_zero() {
                continue;
            }
            let mu = &h[i][j] / &h[j + 1][j];
            for c in j..d {
                let t = &mu * &h[j + 1][c];
                h[i][c] = &h[i][c] - &t;
            }
            for r in 0..d {
                let t = &mu * &h[r][i];
                h[r][j + 1] = &h[r][j + 1] + &t;
            }
        }
    }
    let zero = RatFunc::zero(&field);
    let mut polys: Vec<Vec<RatFunc>> = vec![vec![RatFunc::one(&field)]];
    for k in 0..d {
        let mut next = vec![zero.clone(); k + 2];
        for (e, c) in polys[k].iter().enumerate() {
            next[e + 1] = &next[e + 1] + c;
            next[e] = &next[e] - &(&h[k][k] * c);
        }
        let mut prod = RatFunc::one(&field);
        for i in (0..k).rev() {
            prod = &prod * &h[i + 1][i];
            let coef = &h[i][k] * &prod;
            for (e, c) in polys[i].iter().enumerate() {
                next[e] = &next[e] - &(&coef * c);
            }
        }
        polys.push(next);
    }
    let mut cp = polys.pop().unwrap();
    cp.reverse();
    cp
}

#[cfg(test)]
mod tests {
    use super::super::tests::sqrt_t;
    use super::*;
    use crate::funcfield::{parse_ratfunc, PlaceValuation};

    #[test]
    fn examples() {
        let b = sqrt_t(3);
        assert!(b.is_integral_oracle(&b.parse_tensor("t^-1 * T1(x)T1", 2).unwrap()));
        assert!(!b.is_integral_oracle(&b.parse_tensor("t^-1 * T1(x)1", 2).unwrap()));
        assert!(b.is_integral_oracle(&b.parse_tensor("t^3 + 2", 2).unwrap()));
        assert!(!b.is_integral_oracle(&b.parse_tensor("1/t", 2).unwrap()));
    }

    #[test]
    fn minimal_polynomials() {
        // t^-1·(T⊗T) squares to 1; t^-1·(T⊗1) squares to t^-1
        let f = FiniteField::new(3).unwrap();
        let r = |s: &str| parse_ratfunc(&f, s).unwrap();
        let z = RatFunc::zero(&f);
        let m = vec![vec![z.clone(), r("1")], vec![r("1"), z.clone()]];
        assert_eq!(charpoly_exact(&m), vec![r("1"), z.clone(), r("-1")]);
        let m = vec![vec![z.clone(), r("1")], vec![r("1/t"), z.clone()]];
        assert_eq!(charpoly_exact(&m), vec![r("1"), z, r("-1/t")]);
    }

    #[test]
    fn truncated_matches_exact() {
        // compare valuations of the truncated and exact characteristic polynomials
        let f = FiniteField::new(7).unwrap();
        let t = RatFunc::t(&f);
        let b = KummerAlgebra::new(&f, PlaceValuation::at(&f, 0), vec![(2, t.clone()), (3, t.clone())]).unwrap();
        let samples = [
            ("t^-2 * T1T2(x)T2^2 + t^-1 * T2(x)T1", 2),
            ("(t + 1)/t * T1(x)T1 + t^-1 * T2^2(x)T2", 2),
            ("t^-1 * T2(x)T2(x)T2 + 3", 3),
            ("t^-2 * T1T2^2(x)T1T2", 2),
            ("t^-1 * T1T2(x)T2 + t^-1 * T1(x)T2^2", 2),
        ];
        for (s, n) in samples {
            let x = b.parse_tensor(s, n).unwrap();
            let basis = b.support_subgroup(&x);
            let d = basis.len();
            let mut m = vec![vec![RatFunc::zero(&f); d]; d];
            for (c, g) in basis.iter().enumerate() {
                let e = b.multiply(&x, &TensorElement::basis(g.clone(), RatFunc::one(&f))).unwrap();
                for (k, v) in e.terms() {
                    let r = basis.iter().position(|h| h == k).unwrap();
                    m[r][c] = v.clone();
                }
            }
            let cp = charpoly_exact(&m);
            let exact = cp.iter().skip(1).all(|c| c.is_zero() || b.valuation(c).unwrap() >= 0);
            assert_eq!(b.is_integral_oracle(&x), exact, "{s}");
        }
    }
}

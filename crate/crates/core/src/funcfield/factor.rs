//! Factorization of polynomials over `F_q`: square-free decomposition,
//! distinct-degree and equal-degree (Cantor–Zassenhaus) splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::FiniteField;
use super::poly::Poly;

/// `x^(q^k) mod f` by repeated `q`-th powering.
fn pow_q_mod(x: &Poly, f: &Poly, k: u32) -> Poly {
    let q = x.field().q() as u64;
    let mut r = x.rem(f);
    for _ in 0..k {
        r = pow_mod(&r, q, f);
    }
    r
}

pub fn pow_mod(base: &Poly, mut e: u64, m: &Poly) -> Poly {
    let mut acc = Poly::one(base.field()).rem(m);
    let mut b = base.rem(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &b).rem(m);
        }
        e >>= 1;
        if e > 0 {
            b = (&b * &b).rem(m);
        }
    }
    acc
}

/// `p`-th root of a polynomial all of whose exponents are divisible by `p`.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.p() as usize;
    let v = f.coeffs().iter().step_by(p).map(|&c| field.frobenius_root(c)).collect();
    Poly::new(field, v)
}

/// Square-free decomposition of a monic polynomial: `(g_i, i)` with
/// `f = Π g_i^i`, each `g_i` square-free and pairwise coprime.
pub fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field().clone();
    let p = field.p();
    let mut out = Vec::new();
    let f = f.monic();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree(&pth_root(&f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).unwrap();
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w).unwrap();
        i += 1;
    }
    if !c.is_one() {
        for (g, m) in squarefree(&pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial.
fn distinct_degree(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field();
    let x = Poly::t(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = pow_q_mod(&h, &rest, 1);
        let g = (&h - &x).gcd(&rest);
        if !g.is_one() {
            out.push((g.clone(), d as u32));
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest);
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        let deg = rest.degree().unwrap() as u32;
        out.push((rest, deg));
    }
    out
}

/// Split a product of distinct irreducibles of degree `d`.
fn equal_degree(f: &Poly, d: u32, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().unwrap() as u32;
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field().clone();
    let q = field.q() as u64;
    loop {
        let a = Poly::new(&field, (0..n).map(|_| rng.gen_range(0..q) as u16).collect());
        if a.is_constant() {
            continue;
        }
        let b = if q % 2 == 1 {
            let e = (q.pow(d) - 1) / 2;
            &pow_mod(&a, e, f) - &Poly::one(&field)
        } else {
            // trace map a + a^2 + ... + a^(2^(k d - 1))
            let mut acc = a.rem(f);
            let mut cur = a.rem(f);
            for _ in 1..field.k() * d {
                cur = (&cur * &cur).rem(f);
                acc = &acc + &cur;
            }
            acc
        };
        let g = b.gcd(f);
        if !g.is_one() && g.degree() != f.degree() {
            let h = f.div_exact(&g).unwrap();
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// Monic irreducible factors with multiplicity, sorted by degree then
/// coefficients. Deterministic.
pub fn factor(f: &Poly) -> Vec<(Poly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a3e);
    let mut out = Vec::new();
    for (g, m) in squarefree(f) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|a, b| (a.0.degree(), a.0.coeffs()).cmp(&(b.0.degree(), b.0.coeffs())));
    out
}

/// Rabin-style irreducibility test.
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let f = f.monic();
    let x = Poly::t(f.field());
    if !(&pow_q_mod(&x, &f, n as u32) - &x).rem(&f).is_zero() {
        return false;
    }
    for pr in (2..=n).filter(|d| n % d == 0 && (2..*d).all(|e| d % e != 0)) {
        let h = &pow_q_mod(&x, &f, (n / pr) as u32) - &x;
        if !h.gcd(&f).is_one() {
            return false;
        }
    }
    true
}

/// Roots of `f` in `F_q` (with multiplicity ignored).
pub fn roots(f: &Poly) -> Vec<u16> {
    let field: &FiniteField = f.field();
    field.elements().filter(|&a| f.eval(a) == 0).collect()
}

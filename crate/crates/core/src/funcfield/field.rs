//! Finite fields `F_q`, `q = p^k <= 256`, with full lookup tables.
//!
//! Elements are `u16` indices: the element `Σ c_i u^i` (with `u` the class of
//! the generator modulo the defining polynomial) is stored as `Σ c_i p^i`.

use std::fmt;
use std::sync::Arc;

use super::FieldError;

pub type Elem = u16;

/// Largest supported field size.
pub const MAX_Q: u32 = 256;

#[derive(Debug)]
struct Inner {
    p: u32,
    k: u32,
    q: u32,
    // coefficients c_0..c_k of the monic modulus over F_p
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    generator: Elem,
}

/// A finite field descriptor; cheap to clone and share.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Split `q` as `p^k`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1 && is_prime(p)).then_some((p, k))
}

// Dense F_p polynomial helpers used only while building tables.
fn fp_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = fp_trim(a.to_vec());
    let b = fp_trim(b.to_vec());
    let lb = *b.last().unwrap();
    let inv_lb = pow_mod(lb, p - 2, p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * inv_lb % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u32;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Irreducibility over `F_p` by trial division by every monic polynomial of
/// degree `1..=deg/2`.
fn fp_irreducible(f: &[u32], p: u32) -> bool {
    let f = fp_trim(f.to_vec());
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as usize).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                g.push((x % p as usize) as u32);
                x /= p as usize;
            }
            g.push(1);
            if fp_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// `GF(q)` with the lexicographically first monic irreducible modulus.
    pub fn new(q: u32) -> Result<Self, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_Q {
            return Err(FieldError::FieldTooLarge(q));
        }
        if k == 1 {
            return Self::with_modulus(p, vec![0, 1]);
        }
        for idx in 0..q {
            let mut m = Vec::with_capacity(k as usize + 1);
            let mut x = idx;
            for _ in 0..k {
                m.push(x % p);
                x /= p;
            }
            m.push(1);
            if m[0] != 0 && fp_irreducible(&m, p) {
                return Self::with_modulus(p, m);
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    /// Field `F_p[u]/(modulus)`; the modulus is checked for irreducibility.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrimePower(p));
        }
        let modulus = fp_trim(modulus.into_iter().map(|c| c % p).collect());
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(FieldError::BadModulus("modulus must be monic of degree >= 1".into()));
        }
        let k = (modulus.len() - 1) as u32;
        let q = p.checked_pow(k).filter(|&q| q <= MAX_Q).ok_or(FieldError::FieldTooLarge(p.saturating_pow(k)))?;
        if !fp_irreducible(&modulus, p) {
            return Err(FieldError::BadModulus(format!("{modulus:?} is reducible over F_{p}")));
        }
        let to_vec = |e: u32| {
            let mut v = Vec::with_capacity(k as usize);
            let mut x = e;
            for _ in 0..k {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let from_vec = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let qu = q as usize;
        let mut add = vec![0; qu * qu];
        let mut mul = vec![0; qu * qu];
        for a in 0..q {
            let va = to_vec(a);
            for b in 0..q {
                let vb = to_vec(b);
                let s: Vec<u32> = va.iter().zip(&vb).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = from_vec(&s) as Elem;
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in va.iter().enumerate() {
                    for (j, y) in vb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = fp_rem(&prod, &modulus, p);
                r.resize(k as usize, 0);
                mul[(a * q + b) as usize] = from_vec(&r) as Elem;
            }
        }
        let neg: Vec<Elem> = (0..q)
            .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap() as Elem)
            .collect();
        let inv: Vec<Elem> = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap() as Elem })
            .collect();
        let order = |g: u32| {
            let mut x = g;
            let mut n = 1;
            while x != 1 {
                x = mul[(x * q + g) as usize] as u32;
                n += 1;
            }
            n
        };
        let generator = (1..q).find(|&g| order(g) == q - 1).unwrap() as Elem;
        Ok(FiniteField(Arc::new(Inner { p, k, q, modulus, add, mul, neg, inv, generator })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[a as usize * self.0.q as usize + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.0.neg[b as usize])
    }
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul[a as usize * self.0.q as usize + b as usize]
    }
    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.0.inv[a as usize])
    }
    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.0.p as i64) as Elem
    }

    /// The class of the generator `u` of `F_p[u]/(modulus)`.
    pub fn u(&self) -> Elem {
        if self.0.k == 1 {
            // F_p[u]/(u) identifies u with 0
            0
        } else {
            self.0.p as Elem
        }
    }

    /// A fixed generator of the cyclic group `F_q^×`.
    pub fn primitive_element(&self) -> Elem {
        self.0.generator
    }

    /// Primitive `m`-th root of unity, if `m | q - 1`.
    pub fn root_of_unity(&self, m: u32) -> Option<Elem> {
        (m >= 1 && (self.0.q - 1) % m == 0).then(|| self.pow(self.0.generator, ((self.0.q - 1) / m) as u64))
    }

    /// Frobenius `x ↦ x^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.0.p as u64)
    }

    /// Unique `d` with `d^p = c`.
    pub fn frobenius_root(&self, c: Elem) -> Elem {
        // Frobenius has order k on F_q
        self.pow(c, (self.0.q / self.0.p) as u64)
    }

    /// Absolute trace `F_q → F_p`, returned as an element of the prime field.
    pub fn trace(&self, a: Elem) -> Elem {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.0.k {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        acc
    }

    /// Coordinates of `a` in the basis `1, u, …, u^{k-1}` over `F_p`.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.0.k as usize);
        let mut x = a as u32;
        for _ in 0..self.0.k {
            v.push(x % self.0.p);
            x /= self.0.p;
        }
        v
    }

    pub fn from_coords(&self, v: &[u32]) -> Elem {
        v.iter().rev().fold(0u32, |acc, &c| acc * self.0.p + c % self.0.p) as Elem
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q as Elem
    }

    /// Render an element: an integer for the prime field, a polynomial in
    /// `u` otherwise.
    pub fn fmt_elem(&self, a: Elem) -> String {
        if self.0.k == 1 {
            return a.to_string();
        }
        let c = self.coords(a);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{i}"),
            };
            terms.push(match (ci, mono.is_empty()) {
                (_, true) => ci.to_string(),
                (1, false) => mono,
                (_, false) => format!("{ci}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Table of a field embedding `self → big`, sending the generator `u`
    /// to the least root of its modulus in `big`.
    pub fn embedding(&self, big: &FiniteField) -> Option<Vec<Elem>> {
        if self.p() != big.p() || big.k() % self.k() != 0 {
            return None;
        }
        let m = self.modulus();
        let eval = |x: Elem| m.iter().rev().fold(0, |acc, &c| big.add(big.mul(acc, x), big.from_int(c as i64)));
        let r = if self.k() == 1 { 0 } else { big.elements().find(|&x| eval(x) == 0)? };
        Some(
            self.elements()
                .map(|a| self.coords(a).iter().rev().fold(0, |acc, &c| big.add(big.mul(acc, r), big.from_int(c as i64))))
                .collect(),
        )
    }

    /// Whether `fmt_elem` output is a single term (no parentheses needed
    /// as a coefficient).
    pub fn is_monomial_elem(&self, a: Elem) -> bool {
        self.coords(a).iter().filter(|&&c| c != 0).count() <= 1
    }
}

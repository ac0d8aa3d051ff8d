//! Tame Kummer algebras `B = A[T_1..T_r]/(T_k^{m_k} - α_k)` over the valued
//! field `(F_q(t), v)` at a rational place, their tensor powers `B_n`, and
//! the integrality criterion for `B_n`.

mod oracle;
pub mod sample;
mod tensor;
mod vandermonde;

use num_integer::Integer;
use num_rational::Rational64;

use crate::funcfield::{Elem, FieldError, FiniteField, PlaceValuation, RatFunc};
use crate::valgroup::{GroupLattice, Value};

pub use oracle::{charpoly_exact, OracleRun};
pub use tensor::TensorElement;
pub use vandermonde::{vandermonde, Matrix};

/// Largest supported tensor level.
pub const MAX_LEVEL: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KummerError {
    #[error("exponent {m} is divisible by the characteristic {p}")]
    NotTame { m: u32, p: u32 },
    #[error("no primitive {0}-th root of unity in the base field")]
    RootOfUnityUnavailable(u32),
    #[error("basis values collide modulo the base value group: {0}")]
    DegeneratePresentation(String),
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("level {0} exceeds the cap of {MAX_LEVEL}")]
    LevelCap(usize),
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("base place must be a rational place, got {0}")]
    UnsupportedPlace(String),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug)]
pub struct KummerAlgebra {
    field: FiniteField,
    place: PlaceValuation,
    ms: Vec<u32>,
    alphas: Vec<RatFunc>,
    alpha_vals: Vec<i64>,
    lcm: u32,
    zeta: Elem,
    // mixed-radix tuples, T_1 exponent most significant
    cosets: Vec<Vec<u32>>,
    e_vals: Vec<Rational64>,
    // product table: e_a·e_b = carry·e_c
    mul_table: Vec<Vec<(usize, RatFunc)>>,
}

impl KummerAlgebra {
    pub fn new(field: &FiniteField, place: PlaceValuation, gens: Vec<(u32, RatFunc)>) -> Result<Self, KummerError> {
        if !place.is_rational_place() {
            return Err(KummerError::UnsupportedPlace(place.render()));
        }
        if gens.is_empty() {
            return Err(KummerError::Invalid("at least one generator needed".into()));
        }
        let p = field.p();
        let mut lcm = 1u32;
        for (m, a) in &gens {
            if *m < 1 {
                return Err(KummerError::Invalid("exponents must be positive".into()));
            }
            if m % p == 0 {
                return Err(KummerError::NotTame { m: *m, p });
            }
            if a.is_zero() {
                return Err(KummerError::Invalid("α must be non-zero".into()));
            }
            lcm = lcm.lcm(m);
        }
        let zeta = field.root_of_unity(lcm).ok_or(KummerError::RootOfUnityUnavailable(lcm))?;
        let ms: Vec<u32> = gens.iter().map(|g| g.0).collect();
        let alphas: Vec<RatFunc> = gens.into_iter().map(|g| g.1).collect();
        let alpha_vals: Vec<i64> = alphas.iter().map(|a| *place.valuation(a).leading().unwrap().numer()).collect();

        let total: usize = ms.iter().map(|&m| m as usize).product();
        let cosets: Vec<Vec<u32>> = (0..total).map(|i| mixed_radix(i, &ms)).collect();
        let e_vals: Vec<Rational64> = cosets
            .iter()
            .map(|c| c.iter().zip(&ms).zip(&alpha_vals).map(|((&i, &m), &a)| Rational64::new(i as i64 * a, m as i64)).sum())
            .collect();

        // the presentation must realize Γ_B/Γ_A = Π Z/m_k
        let lattice = GroupLattice::new(1, vec![Value::integer(1)]).unwrap();
        for a in 0..total {
            for b in a + 1..total {
                let diff = Value::new(vec![e_vals[a] - e_vals[b]]).unwrap();
                if lattice.contains(&diff).unwrap() {
                    return Err(KummerError::DegeneratePresentation(format!(
                        "{:?} and {:?} have the same value modulo the base group",
                        cosets[a], cosets[b]
                    )));
                }
            }
        }

        let mut alg = KummerAlgebra {
            field: field.clone(),
            place,
            ms,
            alphas,
            alpha_vals,
            lcm,
            zeta,
            cosets,
            e_vals,
            mul_table: vec![],
        };
        alg.mul_table = (0..total).map(|a| (0..total).map(|b| alg.basis_product(a, b)).collect()).collect();
        Ok(alg)
    }

    fn basis_product(&self, a: usize, b: usize) -> (usize, RatFunc) {
        let mut carry = RatFunc::one(&self.field);
        let mut out = Vec::with_capacity(self.ms.len());
        for k in 0..self.ms.len() {
            let s = self.cosets[a][k] + self.cosets[b][k];
            if s >= self.ms[k] {
                carry = &carry * &self.alphas[k];
                out.push(s - self.ms[k]);
            } else {
                out.push(s);
            }
        }
        (self.index_of(&out), carry)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn place(&self) -> &PlaceValuation {
        &self.place
    }
    pub fn exponents(&self) -> &[u32] {
        &self.ms
    }
    pub fn alphas(&self) -> &[RatFunc] {
        &self.alphas
    }
    pub fn alpha_valuations(&self) -> &[i64] {
        &self.alpha_vals
    }
    pub fn zeta(&self) -> Elem {
        self.zeta
    }
    pub fn rank(&self) -> usize {
        self.ms.len()
    }

    /// `[B : A] = Π m_k`.
    pub fn degree(&self) -> usize {
        self.cosets.len()
    }

    pub fn coset(&self, idx: usize) -> &[u32] {
        &self.cosets[idx]
    }

    pub fn index_of(&self, tuple: &[u32]) -> usize {
        tuple.iter().zip(&self.ms).fold(0, |acc, (&i, &m)| acc * m as usize + (i % m) as usize)
    }

    /// Additive value of the basis element `e_γ`.
    pub fn e_value(&self, idx: usize) -> Rational64 {
        self.e_vals[idx]
    }

    /// `e_a·e_b = carry·e_c`, returned as `(c, carry)`.
    pub fn mul_basis(&self, a: usize, b: usize) -> (usize, &RatFunc) {
        let (c, ref r) = self.mul_table[a][b];
        (c, r)
    }

    /// Coset sum without the carry.
    pub fn add_cosets(&self, a: usize, b: usize) -> usize {
        self.mul_table[a][b].0
    }

    /// Galois elements share the indexing of the cosets: `σ = (j_k)` acts by
    /// `T_k ↦ ζ_k^{j_k} T_k` with `ζ_k = ζ^{L/m_k}`. Returns `c` with
    /// `σ(e_γ) = c·e_γ`.
    pub fn character(&self, sigma: usize, gamma: usize) -> Elem {
        let mut e = 0u64;
        for k in 0..self.ms.len() {
            let step = (self.lcm / self.ms[k]) as u64;
            e += step * self.cosets[sigma][k] as u64 * self.cosets[gamma][k] as u64;
        }
        self.field.pow(self.zeta, e % self.lcm as u64)
    }

    pub fn uniformizer(&self) -> RatFunc {
        self.place.uniformizer(&self.field).unwrap()
    }

    /// Integer valuation at the base place; `None` for zero.
    pub fn valuation(&self, f: &RatFunc) -> Option<i64> {
        self.place.valuation(f).leading().map(|v| *v.numer())
    }

    /// Additive threshold `-Σ v(e_{γ_i})` a coefficient at `key` must meet.
    pub fn threshold(&self, key: &[usize]) -> Rational64 {
        -key.iter().map(|&g| self.e_vals[g]).sum::<Rational64>()
    }

    pub fn check_level(&self, n: usize) -> Result<(), KummerError> {
        if n == 0 {
            return Err(KummerError::Invalid("level must be at least 1".into()));
        }
        if n > MAX_LEVEL {
            return Err(KummerError::LevelCap(n));
        }
        Ok(())
    }

    /// Human-readable description, e.g. `T1^2 = t, T2^3 = t + 1 at t`.
    pub fn describe(&self) -> String {
        let rels: Vec<String> =
            self.ms.iter().zip(&self.alphas).enumerate().map(|(k, (m, a))| format!("T{}^{} = {}", k + 1, m, a)).collect();
        format!("{} at {}", rels.join(", "), self.place)
    }
}

fn mixed_radix(mut i: usize, ms: &[u32]) -> Vec<u32> {
    let mut out = vec![0; ms.len()];
    for k in (0..ms.len()).rev() {
        out[k] = (i % ms[k] as usize) as u32;
        i /= ms[k] as usize;
    }
    out
}

/// Least prime power `q <= 81` with `q ≡ 1 mod l` and `p ∤ l`.
pub fn least_field_for(l: u32) -> Option<FiniteField> {
    (2..=81u32).filter_map(|q| FiniteField::new(q).ok()).find(|f| (f.q() - 1) % l == 0 && l % f.p() != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sqrt_t(q: u32) -> KummerAlgebra {
        let f = FiniteField::new(q).unwrap();
        KummerAlgebra::new(&f, PlaceValuation::at(&f, 0), vec![(2, RatFunc::t(&f))]).unwrap()
    }

    #[test]
    fn basis_and_values() {
        let b = sqrt_t(3);
        assert_eq!(b.degree(), 2);
        assert_eq!(b.e_value(1), Rational64::new(1, 2));
        let (c, carry) = b.mul_basis(1, 1);
        assert_eq!(c, 0);
        assert_eq!(carry, &RatFunc::t(b.field()));
        assert_eq!(b.character(1, 1), 2);
    }

    #[test]
    fn constructor_guards() {
        let f = FiniteField::new(4).unwrap();
        let t = RatFunc::t(&f);
        assert!(matches!(
            KummerAlgebra::new(&f, PlaceValuation::at(&f, 0), vec![(2, t.clone())]),
            Err(KummerError::NotTame { .. })
        ));
        let f = FiniteField::new(7).unwrap();
        let t = RatFunc::t(&f);
        assert!(matches!(
            KummerAlgebra::new(&f, PlaceValuation::at(&f, 0), vec![(5, t.clone())]),
            Err(KummerError::RootOfUnityUnavailable(5))
        ));
        // T^2 = t^2 does not adjoin a new value
        assert!(matches!(
            KummerAlgebra::new(&f, PlaceValuation::at(&f, 0), vec![(2, t.pow(2))]),
            Err(KummerError::DegeneratePresentation(_))
        ));
        // T1^2 = t, T2^2 = t: both adjoin the same half-value
        assert!(matches!(
            KummerAlgebra::new(&f, PlaceValuation::at(&f, 0), vec![(2, t.clone()), (2, t.clone())]),
            Err(KummerError::DegeneratePresentation(_))
        ));
        assert!(KummerAlgebra::new(&f, PlaceValuation::at(&f, 0), vec![(2, t.clone()), (3, t.clone())]).is_ok());
        assert!(matches!(
            KummerAlgebra::new(&f, PlaceValuation::Trivial, vec![(2, t)]),
            Err(KummerError::UnsupportedPlace(_))
        ));
    }

    #[test]
    fn least_fields() {
        let q = |l| least_field_for(l).unwrap().q();
        assert_eq!((q(2), q(3), q(4), q(5), q(6), q(12), q(10)), (3, 4, 5, 11, 7, 13, 11));
    }
}

//! Totally ordered value groups of finite rational rank.
//!
//! Values are written additively: a [`Value`] carries a vector of rational
//! exponents compared lexicographically, plus an explicit absorbing zero
//! element (the multiplicative `0`, i.e. additive `+∞`). The multiplicative
//! statement `|x| <= 1` is [`Value::is_bounded`].

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

/// Largest supported rank.
pub const MAX_RANK: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValueError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("rank {0} exceeds the supported maximum of {MAX_RANK}")]
    RankTooLarge(usize),
    #[error("value {0} is not in the group spanned by the lattice and its roots")]
    NotInGroup(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// An element of `Γ ∪ {0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Value {
    rank: usize,
    // None is the absorbing zero element
    exps: Option<Vec<Rational64>>,
}

impl Value {
    pub fn new(exps: Vec<Rational64>) -> Result<Self, ValueError> {
        if exps.len() > MAX_RANK {
            return Err(ValueError::RankTooLarge(exps.len()));
        }
        if exps.is_empty() {
            return Err(ValueError::Invalid("rank must be at least 1".into()));
        }
        Ok(Value { rank: exps.len(), exps: Some(exps) })
    }

    pub fn from_ints(exps: &[i64]) -> Self {
        Self::new(exps.iter().map(|&e| Rational64::from_integer(e)).collect()).expect("rank in range")
    }

    /// Rank-1 value `a/b`.
    pub fn ratio(a: i64, b: i64) -> Self {
        Value { rank: 1, exps: Some(vec![Rational64::new(a, b)]) }
    }

    pub fn integer(a: i64) -> Self {
        Self::ratio(a, 1)
    }

    /// The identity (all exponents 0).
    pub fn one(rank: usize) -> Self {
        Value { rank, exps: Some(vec![Rational64::zero(); rank]) }
    }

    /// The absorbing element `0`.
    pub fn zero(rank: usize) -> Self {
        Value { rank, exps: None }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_none()
    }

    pub fn exponents(&self) -> Option<&[Rational64]> {
        self.exps.as_deref()
    }

    /// First exponent of a non-zero value.
    pub fn leading(&self) -> Option<Rational64> {
        self.exps.as_ref().map(|e| e[0])
    }

    fn check_rank(&self, other: &Value) -> Result<(), ValueError> {
        if self.rank != other.rank {
            return Err(ValueError::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    /// Group law (componentwise sum of exponents); zero absorbs.
    pub fn mul(&self, other: &Value) -> Result<Value, ValueError> {
        self.check_rank(other)?;
        Ok(match (&self.exps, &other.exps) {
            (Some(a), Some(b)) => Value {
                rank: self.rank,
                exps: Some(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            },
            _ => Value::zero(self.rank),
        })
    }

    /// Inverse of a non-zero value.
    pub fn inv(&self) -> Option<Value> {
        self.exps.as_ref().map(|e| Value { rank: self.rank, exps: Some(e.iter().map(|x| -x).collect()) })
    }

    pub fn pow(&self, k: i64) -> Value {
        match &self.exps {
            None => {
                assert!(k > 0, "zero to a non-positive power");
                self.clone()
            }
            Some(e) => Value {
                rank: self.rank,
                exps: Some(e.iter().map(|x| x * Rational64::from_integer(k)).collect()),
            },
        }
    }

    /// Exact `m`-th root of a non-zero value.
    pub fn root(&self, m: u32) -> Result<Value, ValueError> {
        if m == 0 {
            return Err(ValueError::Invalid("root of order 0".into()));
        }
        match &self.exps {
            None => Err(ValueError::Invalid("root of the zero value".into())),
            Some(e) => Ok(Value {
                rank: self.rank,
                exps: Some(e.iter().map(|x| x / Rational64::from_integer(m as i64)).collect()),
            }),
        }
    }

    /// Additive comparison: lexicographic on exponents, zero is the top
    /// element. `Greater` means multiplicatively smaller.
    pub fn cmp_additive(&self, other: &Value) -> Result<Ordering, ValueError> {
        self.check_rank(other)?;
        Ok(match (&self.exps, &other.exps) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(b),
        })
    }

    /// Multiplicative `|x| <= 1`, i.e. exponents lexicographically `>= 0`.
    pub fn is_bounded(&self) -> bool {
        match &self.exps {
            None => true,
            Some(e) => e.iter().find(|x| !x.is_zero()).map_or(true, |x| x.is_positive()),
        }
    }

    /// Additive minimum (multiplicative maximum).
    pub fn min_additive(&self, other: &Value) -> Result<Value, ValueError> {
        Ok(match self.cmp_additive(other)? {
            Ordering::Greater => other.clone(),
            _ => self.clone(),
        })
    }

    /// Concatenate two values into one of rank `r1 + r2`.
    pub fn concat(&self, other: &Value) -> Result<Value, ValueError> {
        let rank = self.rank + other.rank;
        if rank > MAX_RANK {
            return Err(ValueError::RankTooLarge(rank));
        }
        Ok(match (&self.exps, &other.exps) {
            (Some(a), Some(b)) => Value { rank, exps: Some(a.iter().chain(b).copied().collect()) },
            _ => Value::zero(rank),
        })
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exps {
            None => write!(f, "v=0"),
            Some(e) => {
                write!(f, "v=(")?;
                for (i, x) in e.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}/{}", x.numer(), x.denom())?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finitely generated subgroup `Γ_A` of a rational value group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLattice {
    pub rank: usize,
    pub generators: Vec<Value>,
}

impl GroupLattice {
    pub fn new(rank: usize, generators: Vec<Value>) -> Result<Self, ValueError> {
        if rank == 0 || rank > MAX_RANK {
            return Err(ValueError::RankTooLarge(rank));
        }
        for g in &generators {
            if g.rank() != rank {
                return Err(ValueError::RankMismatch(g.rank(), rank));
            }
            if g.is_zero() {
                return Err(ValueError::Invalid("lattice generators must be non-zero".into()));
            }
        }
        Ok(GroupLattice { rank, generators })
    }

    /// Whether `a` lies in the subgroup spanned by the generators.
    pub fn contains(&self, a: &Value) -> Result<bool, ValueError> {
        if a.rank() != self.rank {
            return Err(ValueError::RankMismatch(a.rank(), self.rank));
        }
        let Some(target) = a.exponents() else { return Ok(false) };
        let mut den = 1i64;
        for g in &self.generators {
            for x in g.exponents().unwrap() {
                den = den.lcm(x.denom());
            }
        }
        for x in target {
            den = den.lcm(x.denom());
        }
        let scale = |x: &Rational64| (x * Rational64::from_integer(den)).to_integer();
        let rows: Vec<Vec<i64>> =
            self.generators.iter().map(|g| g.exponents().unwrap().iter().map(scale).collect()).collect();
        let target: Vec<i64> = target.iter().map(scale).collect();
        Ok(in_integer_span(rows, &target))
    }
}

/// Decide `target ∈ Z·rows` via row-style Hermite reduction.
fn in_integer_span(mut rows: Vec<Vec<i64>>, target: &[i64]) -> bool {
    let ncols = target.len();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for col in 0..ncols {
        // gcd-combine all rows with a non-zero entry in this column
        let mut pivot: Option<Vec<i64>> = None;
        let mut rest = Vec::new();
        for row in rows.drain(..) {
            if row[col] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(mut p) => {
                    let mut r = row;
                    while r[col] != 0 {
                        let q = p[col].div_euclid(r[col]);
                        for j in 0..ncols {
                            p[j] -= q * r[j];
                        }
                        std::mem::swap(&mut p, &mut r);
                    }
                    pivot = Some(p);
                    rest.push(r);
                }
            }
        }
        rows = rest;
        if let Some(p) = pivot {
            basis.push(p);
        }
    }
    let mut t = target.to_vec();
    for p in &basis {
        let col = p.iter().position(|&x| x != 0).unwrap();
        if t[col] % p[col] != 0 {
            return false;
        }
        let q = t[col] / p[col];
        for j in 0..ncols {
            t[j] -= q * p[j];
        }
    }
    t.iter().all(|&x| x == 0)
}

/// Class of `a` in `Γ_B/Γ_A` where `Γ_B` is generated by `Γ_A` and the
/// adjoined `roots`, each of order `m_k` modulo `Γ_A`.
///
/// Returns the unique tuple `(i_1..i_r)`, `0 <= i_k < m_k`, with
/// `a - Σ i_k·root_k ∈ Γ_A`.
pub fn coset_index(a: &Value, lattice: &GroupLattice, roots: &[(Value, u32)]) -> Result<Vec<u32>, ValueError> {
    if a.is_zero() {
        return Err(ValueError::Invalid("coset of the zero value".into()));
    }
    let mut found: Option<Vec<u32>> = None;
    let mut idx = vec![0u32; roots.len()];
    loop {
        let mut shifted = a.clone();
        for ((root, _), &i) in roots.iter().zip(&idx) {
            shifted = shifted.mul(&root.pow(-(i as i64)))?;
        }
        if lattice.contains(&shifted)? {
            if found.is_some() {
                return Err(ValueError::Invalid("roots do not present Γ_B/Γ_A freely".into()));
            }
            found = Some(idx.clone());
        }
        // odometer
        let mut k = 0;
        loop {
            if k == roots.len() {
                return found.ok_or_else(|| ValueError::NotInGroup(a.to_string()));
            }
            idx[k] += 1;
            if idx[k] < roots[k].1 {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Convenience for rank-1 code: `p/q` as a rational.
pub fn q(p: i64, d: i64) -> Rational64 {
    Rational64::new(p, d)
}

/// Smallest integer `>= x`.
pub fn ceil(x: Rational64) -> i64 {
    x.ceil().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mul_examples() {
        assert_eq!(Value::ratio(1, 2).mul(&Value::ratio(1, 2)).unwrap(), Value::integer(1));
        assert!(Value::zero(1).mul(&Value::integer(3)).unwrap().is_zero());
        assert_eq!(Value::from_ints(&[1, 0]).mul(&Value::from_ints(&[0, -2])).unwrap(), Value::from_ints(&[1, -2]));
        assert_eq!(Value::integer(1).mul(&Value::from_ints(&[1, 0])), Err(ValueError::RankMismatch(1, 2)));
    }

    #[test]
    fn cmp_examples() {
        let a = Value::from_ints(&[1, 0]);
        let b = Value::from_ints(&[0, 5]);
        assert_eq!(a.cmp_additive(&b).unwrap(), Ordering::Greater);
        for n in [-3, 0, 7] {
            assert_eq!(Value::zero(1).cmp_additive(&Value::integer(n)).unwrap(), Ordering::Greater);
        }
        assert_eq!(Value::integer(2).cmp_additive(&Value::integer(2)).unwrap(), Ordering::Equal);
        assert!(a.cmp_additive(&Value::integer(1)).is_err());
    }

    #[test]
    fn root_examples() {
        assert_eq!(Value::integer(1).root(3).unwrap(), Value::ratio(1, 3));
        assert_eq!(Value::from_ints(&[2, 4]).root(2).unwrap(), Value::from_ints(&[1, 2]));
        assert_eq!(Value::ratio(1, 2).root(2).unwrap(), Value::ratio(1, 4));
    }

    #[test]
    fn coset_examples() {
        let lat = GroupLattice::new(1, vec![Value::integer(1)]).unwrap();
        let half = (Value::ratio(1, 2), 2);
        assert_eq!(coset_index(&Value::ratio(1, 2), &lat, &[half.clone()]).unwrap(), vec![1]);
        assert_eq!(coset_index(&Value::integer(1), &lat, &[half]).unwrap(), vec![0]);
        let roots = [(Value::ratio(1, 2), 2), (Value::ratio(1, 3), 3)];
        assert_eq!(coset_index(&Value::ratio(5, 6), &lat, &roots).unwrap(), vec![1, 1]);
        assert!(matches!(coset_index(&Value::ratio(1, 5), &lat, &roots), Err(ValueError::NotInGroup(_))));
    }

    #[test]
    fn coset_exhaustive_oracle() {
        // every a = k/6 has exactly one (i1,i2) with i1/2 + i2/3 ≡ a mod 1
        let lat = GroupLattice::new(1, vec![Value::integer(1)]).unwrap();
        let roots = [(Value::ratio(1, 2), 2), (Value::ratio(1, 3), 3)];
        for k in -12..12 {
            let got = coset_index(&Value::ratio(k, 6), &lat, &roots).unwrap();
            let mut hits = vec![];
            for i1 in 0..2 {
                for i2 in 0..3 {
                    if (3 * i1 + 2 * i2 - k).rem_euclid(6) == 0 {
                        hits.push(vec![i1 as u32, i2 as u32]);
                    }
                }
            }
            assert_eq!(hits, vec![got]);
        }
    }

    #[test]
    fn rendering() {
        assert_eq!(Value::zero(2).to_string(), "v=0");
        assert_eq!(Value::new(vec![q(1, 2), q(-3, 4)]).unwrap().to_string(), "v=(1/2, -3/4)");
        assert_eq!(Value::integer(2).to_string(), "v=(2/1)");
    }

    #[test]
    fn rank_2_lattice_membership() {
        let lat = GroupLattice::new(2, vec![Value::from_ints(&[2, 1]), Value::from_ints(&[0, 3])]).unwrap();
        assert!(lat.contains(&Value::from_ints(&[2, 4])).unwrap());
        assert!(!lat.contains(&Value::from_ints(&[1, 0])).unwrap());
        assert!(!lat.contains(&Value::from_ints(&[0, 1])).unwrap());
    }

    fn value(rank: usize) -> impl Strategy<Value = Value> {
        prop::collection::vec((-20i64..20, 1i64..7), rank)
            .prop_map(|v| Value::new(v.into_iter().map(|(a, b)| q(a, b)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn group_axioms(a in value(2), b in value(2), c in value(2)) {
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&Value::one(2)).unwrap(), a.clone());
            prop_assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), Value::one(2));
        }

        #[test]
        fn order_compatible(a in value(2), b in value(2), c in value(2)) {
            let ab = a.cmp_additive(&b).unwrap();
            let shifted = a.mul(&c).unwrap().cmp_additive(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab, shifted);
        }

        #[test]
        fn root_then_power(a in value(3), m in 1u32..9) {
            prop_assert_eq!(a.root(m).unwrap().pow(m as i64), a);
        }

        #[test]
        fn coset_constant_on_translates(k in -30i64..30, g in -5i64..5) {
            let lat = GroupLattice::new(1, vec![Value::integer(1)]).unwrap();
            let roots = [(Value::ratio(1, 4), 4), (Value::ratio(1, 5), 5)];
            let a = Value::ratio(k, 20);
            let moved = a.mul(&Value::integer(g)).unwrap();
            prop_assert_eq!(coset_index(&a, &lat, &roots).unwrap(), coset_index(&moved, &lat, &roots).unwrap());
        }
    }
}

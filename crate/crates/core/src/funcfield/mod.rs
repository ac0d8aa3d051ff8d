//! Finite fields, `F_q[t]`, `F_q(t)` and its valuations.

pub mod factor;
pub mod parse;
pub mod partial;
pub mod field;
pub mod place;
pub mod poly;
pub mod ratfunc;
pub mod series;

pub use factor::{factor, is_irreducible};
pub use field::{Elem, FiniteField};
pub use place::PlaceValuation;
pub use poly::{Poly, MAX_DEGREE};
pub use parse::{parse_field, parse_place, parse_places, parse_poly, parse_ratfunc};
pub use partial::{partial_fractions, split_by_places, Split};
pub use ratfunc::RatFunc;
pub use series::Series;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field of size {0} exceeds the supported maximum")]
    FieldTooLarge(u32),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("degree {0} exceeds the cap of {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("denominator does not factor over the given places: {0}")]
    IrreducibleFactorizationFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

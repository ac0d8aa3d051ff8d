//! Exact computations around the tame site of discretely ringed adic spaces
//! over `F_q(t)`.

pub mod artinschreier;
pub mod cech;
pub mod funcfield;
pub mod huber;
pub mod kummer;
pub mod linalg;
pub mod tameness;
pub mod valgroup;

pub use funcfield::{FiniteField, PlaceValuation, Poly, RatFunc};
pub use valgroup::{GroupLattice, Value};

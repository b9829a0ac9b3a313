//! Binomial permutation polynomials x^d1 + u x^d2 and monomial complete
//! permutation polynomials over GF(2^n), n = 2m, with Niho-type exponents
//! d = s(2^m - 1) + e, together with three independent ways of checking that a
//! sparse polynomial permutes the field.

pub mod cli;
pub mod error;
pub mod exponents;
pub mod families;
pub mod gf2n;
pub mod poly;
pub mod spectra;
pub mod unit_circle;

pub use error::{Error, Result};
pub use exponents::{make_niho, NihoParams};
pub use gf2n::{Elem, FieldCtx};
pub use poly::SparsePoly;
pub use spectra::{Engine, VerificationReport, Witness};
pub use unit_circle::UnitCircle;

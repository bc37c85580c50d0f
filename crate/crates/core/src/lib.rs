//! Exact computations around free divisors in projective space.
//!
//! The crate is organized bottom-up:
//!
//! * [`poly`]: coefficient fields, sparse polynomials, the text parser;
//! * [`groebner`]: Buchberger's algorithm and ideal operations;
//! * [`logder`]: logarithmic derivations and Saito's criterion;
//! * [`degrees`]: multidegrees of rational maps and Segre classes;
//! * [`classes`]: Chow-class arithmetic and Chern-Schwartz-MacPherson formulas;
//! * [`arrangements`]: intersection lattices and characteristic polynomials;
//! * [`curvetest`]: pole orders of logarithmic forms along monomial curves.

pub mod arrangements;
pub mod classes;
pub mod curvetest;
pub mod degrees;
pub mod error;
pub mod exec;
pub mod groebner;
pub mod linalg;
pub mod logder;
pub mod poly;

pub use error::{Error, Result};

//! Exact coefficient fields, sparse multivariate polynomials, monomial orders
//! and the polynomial text parser.

pub mod field;
pub mod monomial;
pub mod mpoly;
pub mod parse;
pub mod prime;

pub use field::{rational_to_fp, Coeff, Fp, Scalar};
pub use monomial::{Monomial, MonomialOrder};
pub use mpoly::{default_var_names, q, FpPoly, MPoly, QPoly};
pub use parse::{parse_poly, ParseError};
pub use prime::{is_prime, random_prime};

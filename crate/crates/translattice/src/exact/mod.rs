//! Exact arithmetic: rationals, real quadratic fields, multivariate
//! polynomials, truncated power series, and integer matrices.

mod intmat;
mod mpoly;
mod parse;
mod quad;
mod series;

pub use intmat::IntMatrix;
pub use mpoly::MPoly;
pub use parse::{parse_poly, parse_poly_with, PolyEnv};
pub use quad::{embed, embed_f64, sqrt_dyadic, Embedding, QuadElem};
pub use series::TruncSeries;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision integer.
pub type Int = BigInt;
/// Arbitrary-precision rational.
pub type Rat = BigRational;

/// Construct a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Construct a rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    Rat::from(Int::from(num))
}

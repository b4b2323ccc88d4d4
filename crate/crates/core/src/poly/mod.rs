//! Exact polynomial arithmetic over ℤ and ℚ.
//!
//! Univariate polynomials are dense ([`IntPoly`], [`RatPoly`]); multivariate
//! ones are sparse ([`MultiPoly`]). Coefficients are always arbitrary
//! precision. The text grammar accepted by [`parse_poly`] is
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := integer | var | '(' expr ')'
//! ```
//!
//! There is no implicit multiplication.

mod gcd;
mod int;
mod multi;
mod parse;
mod rat;

use alloc::string::String;

pub use gcd::{primitive_gcd, resultant, squarefree_decomposition};
pub use int::IntPoly;
pub use multi::MultiPoly;
pub use parse::{identifiers, parse_poly, parse_univariate, ParseError, ParseErrorKind};
pub use rat::{rational, RatPoly};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("homogenizing degree {requested} is below the total degree {actual} of some term")]
    DegreeTooLow { requested: u32, actual: u32 },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("expected a univariate polynomial, got {nvars} variables")]
    NotUnivariate { nvars: usize },
    #[error("polynomial in variable {0} has non-integer coefficients")]
    NotIntegral(String),
}

/// Positive gcd of a sequence of integers; zero for an empty or all-zero input.
pub(crate) fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(it: I) -> BigInt {
    let mut g = BigInt::zero();
    for c in it {
        g = g.gcd(c);
        if g == BigInt::from(1) {
            break;
        }
    }
    g.abs()
}

//! Upper homogeneous posets through their monoids: congruence closure over
//! fixed-length words, colored poset prefixes, greedy 0-monoids,
//! convolution, and totally positive series.

pub mod congruence;
pub mod convolution;
pub mod error;
pub mod greedy;
pub mod poset;
pub mod presentation;
pub mod series;
pub mod tpbuild;
pub mod word;

use num_rational::BigRational;

pub use error::{Error, Result};
pub use presentation::{DeclaredClass, Presentation};
pub use word::{Alphabet, Word};

pub type IntPolynomial = series::Polynomial<i64>;
pub type RatPolynomial = series::Polynomial<BigRational>;
pub type IntSeries = series::Series<i64>;
pub type IntMatrix = series::Matrix<i64>;

//! Exact combinatorial invariants of twisted D-modules `M_alpha^beta` on
//! rational hyperplane arrangements: classification, intersection posets,
//! decomposition-factor supports, plane blow-up data and irreducibility
//! verdicts.

pub mod arrangement;
pub mod cli;
pub mod error;
pub mod exactla;
pub mod factors;
pub mod poset;
pub mod resolution;

pub use arrangement::{classify, essentialize, Arrangement, Classification, Hyperplane, Limits};
pub use error::{Error, Result};
pub use exactla::Scalar;
pub use factors::{decomposition_factors, ExponentVector, FactorReport};
pub use poset::{enumerate_flats, Flat, IntersectionPoset};

pub mod autgroup;
pub mod blockmap;
pub mod complexity;
pub mod endo_search;
pub mod error;
pub mod factor;
pub mod lifting_group;
pub mod shift;
pub mod substrate;
pub mod verify;

pub use error::{Assumption, Error, Result};
pub use shift::ToeplitzShift;

/// Exact rationals for the lifting group.
pub type Rational = num_rational::BigRational;
pub type Integer = num_bigint::BigInt;
pub use lifting_group::CoeffVector;

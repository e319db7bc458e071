//! Exact computations on the multiplicative semigroup M(n, F_q) of square
//! matrices over a small finite field.

pub mod conjugacy;
pub mod error;
pub mod field;
pub mod flags;
pub mod isolated;
pub mod limits;
pub mod matrix;
pub mod nilclass;
pub mod semigroup;
pub mod similarity;
pub mod subspace;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use limits::Limits;
pub use matrix::{Matrix, Rank1Factorization};
pub use subspace::Subspace;

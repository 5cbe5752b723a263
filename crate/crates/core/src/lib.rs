//! Exact computations for finite-type skew-symmetric cluster algebras.

pub mod atomic;
pub mod cluster;
pub mod error;
pub mod finite;
pub mod laurent;
pub mod linalg;
pub mod matrix;
pub mod par;
pub mod qp;
pub mod grassmannian;
pub mod reflection;
pub mod rep;

pub use error::{Error, Result};
pub use laurent::{Exponent, LaurentPoly};
pub use matrix::{ExchangeMatrix, Quiver};

//! Exact analysis of `k`-Mahler equations `f(z) = sum c_i(z) f(z^(k^i))` over `Q(zeta_N)`.

pub mod calmness;
pub mod error;
pub mod field;
pub mod operators;
pub mod orbits;
pub mod series;
pub mod syntax;

pub use error::{MahlerError, Result};

//! Numerical laboratory for the von Neumann inequality on commuting,
//! row-contractive `3x3` matrix pairs over the unit ball of `C^2`.
//!
//! Layers, bottom up: [`matrix`] (small dense complex kernels), [`tuple`] and
//! [`block`] (commuting row contractions), [`funclass`] (extremal scalar
//! maps), [`calculus`] (maps applied to tuples), [`bounds`] (the upper-bound
//! optimizer, the supremum for the polynomial family, and the Monte Carlo
//! lower-bound search).

pub mod block;
pub mod bounds;
pub mod calculus;
pub mod error;
pub mod exec;
pub mod funclass;
pub mod matrix;
pub mod optimize;
pub mod rng;
pub mod tuple;
pub mod wire;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use tuple::{MatrixTuple, SpectralData};

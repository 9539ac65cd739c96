//! Binary polar-code kernels built from code decompositions.
//!
//! * [`codes`]: explicit binary codes of length ≤ 16 and the best-distance table.
//! * [`decomposition`]: chain and binary decompositions, partial distances, exponents.
//! * [`kernel`]: kernels as bijections, the coset-sum encoder and the recursive construction.
//! * [`lpbound`]: exactly certified LP upper bounds on the exponent.
//! * [`polarize`]: sub-channel statistics, SC decoding and the tree process.

pub mod cli;
pub mod codes;
pub mod decomposition;
pub mod error;
pub mod kernel;
pub mod lpbound;
pub mod polarize;

pub use error::{Error, Result};

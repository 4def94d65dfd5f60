//! Positive extensions of densely defined positive operators, in finite
//! dimensions: extendibility, the Krein–von Neumann extension, bounded
//! extension intervals, operator kernels and functionals on *-algebras.

pub mod algebra;
pub mod cli;
pub mod commutation;
pub mod error;
pub mod fixtures;
pub mod interval;
pub mod kernel;
pub mod krein;
pub mod linalg;
pub mod partial;
pub mod random;
pub mod schwarz;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, ToleranceConfig, C64};

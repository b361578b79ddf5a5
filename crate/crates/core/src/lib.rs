//! Exact prover and refuter for von-Neumann-type quantum information
//! inequalities.

pub mod cli;
pub mod document;
pub mod elemental;
pub mod error;
pub mod lp;
pub mod parser;
pub mod prover;
pub mod refute;
pub mod shortest;
pub mod space;

pub use error::{Error, Result};
pub use space::{LinearForm, SubsetId, SystemContext};

/// Exact rational scalar used throughout.
pub type Rational = num_rational::BigRational;

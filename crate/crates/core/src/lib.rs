//! Decision procedure and quantifier-free interpolation for the theory of arrays with maxdiff.

pub mod error;
pub mod kernel;

pub use error::{Error, Result};
pub mod instantiate;
pub mod preprocess;
pub mod toeuf;
pub mod oracle;
pub mod solver;
pub mod interpolate;
pub mod frontend;

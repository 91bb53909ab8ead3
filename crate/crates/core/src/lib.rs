//! Exact difference algebra for diagonalizable systems.

pub mod algebra;
pub mod basechange;
pub mod error;
pub mod galois;
pub mod module;
pub mod pv;
pub mod ring;

pub use error::{PvError, Result};

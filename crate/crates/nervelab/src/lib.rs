//! Nerves, mappers, multiscale mappers and Reeb graphs on finite simplicial
//! complexes, with Z/2 persistence and generator tooling.

pub mod complex;
pub mod covers;
pub mod error;
pub mod fixtures;
pub mod generators;
pub mod io;
pub mod metrics;
pub mod persistence;
pub mod pullback;
pub mod reeb;
pub mod z2;

pub use error::{Error, Result};

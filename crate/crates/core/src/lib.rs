//! Root data, Weyl groupoids and Yangian presentations for sl(m|n) and its
//! affinization, with a rewriting engine that checks reflection maps.

pub mod coeff;
pub mod error;
pub mod groupoid;
pub mod liesuper;
pub mod presentations;
pub mod rewrite;
pub mod rootspace;

pub use error::{Error, Result};

pub mod algebra;
pub mod cmodel;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod orbits;
pub mod qdyn;
pub mod states;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/algebras.md")]
mod book_algebras {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/quantumness.md")]
mod book_quantumness {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/traces.md")]
mod book_traces {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/classical.md")]
mod book_classical {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/experiments.md")]
mod book_experiments {}

//! Lie point symmetries of rational scalar difference equations.
//!
//! The crate is layered: `num` and `symexpr` provide exact arithmetic,
//! `seqform` closed forms of sequences solving constant-coefficient linear
//! recurrences, `eqmodel` the equation model, `symmetry` generators and the
//! determining-system solver, `reduce` invariant-based order reduction and
//! `catalog` the built-in equations with their documented generators.

pub mod catalog;
pub mod eqmodel;
pub mod error;
pub mod num;
pub mod reduce;
pub mod seqform;
pub mod symexpr;
pub mod symmetry;

pub use error::{Error, Result};

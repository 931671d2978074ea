//! Exact number fields: Gaussian rationals, cyclotomic extensions and dense
//! linear algebra over any of them.

mod cyclo;
mod field;
mod gaussian;

pub use cyclo::{admissible_order, cyc_data, Cyc, CycData, CycQ, CycRat};
pub use field::{inverse, mat_mul, nullspace, rank, rref, solve, vec_mat, Field, Rref};
pub use gaussian::{approx_rational, rat_to_f64, Gq};

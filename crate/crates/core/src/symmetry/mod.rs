//! Symmetry generators `X = ξ(n)∂_n + Q(n,u)∂_u`, the linearized symmetry
//! condition, determining systems under polynomial ansätze and their
//! solution, and symbolic or numeric verification of candidates.

mod determine;
mod generator;
mod residual;
mod solve;
mod verify;

pub use determine::{
    extract_determining_system, DeterminingEquation, DeterminingSystem, Unknown, XiMode,
};
pub use generator::{
    generator_rank, generators_contained, generators_span_equal, SymmetryGenerator,
};
pub(crate) use residual::reduce_generator;
pub use residual::{residual, residual_with, Residual, ResidualForm, DEFAULT_MAX_DEGREE};
pub use solve::{
    autonomous_shift_symmetry, recurrence_text, solve_determining_system, translation_family,
    ConstraintKind, FunctionConstraint, Solution,
};
pub use verify::{
    bind_random_params, verify, verify_numeric, verify_symbolic, NumericOptions,
    VerificationReport, VerifyMode, Witness,
};

#[cfg(test)]
mod tests;

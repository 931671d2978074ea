//! Closed forms of sequences in `n`: finite sums `c·λⁿ·nᵐ` with `λ` a
//! Gaussian-rational multiple of a root of unity, and the recurrence solver
//! producing them.

mod recur;
mod rou;
mod seq;

pub use recur::{
    complex_roots, cyclotomic_roots, fit_to_basis, real_basis, solve_recurrence, upoly_text,
    RecurrenceConstraint,
};
pub use rou::RootOfUnityScalar;
pub use seq::{
    coef_complex, cyc_from_json, cyc_text, cyc_to_json, seq_equal_span, seq_equal_span_window,
    SeqTerm, SequenceClosedForm,
};

//! Difference equations `u(n+p) = ω`: construction under parameter
//! assumptions, trajectory simulation with singularity flags, and changes of
//! variable.

mod equation;
mod exact;
mod simulate;
mod transform;

pub use equation::{Assumption, DifferenceEquation, Relation};
pub use simulate::{
    iterate, iterate_exact, iterate_float, simulate, Entry, Flag, SimMode, SimOptions, Trajectory,
};
pub use transform::{transform_equation, LogOffset, Transform, Transformed};

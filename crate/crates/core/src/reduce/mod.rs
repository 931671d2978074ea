//! Order reduction of second-order equations along a point symmetry: the
//! joint invariant `v(n)`, the induced first-order map, its closed-form
//! solution and the reconstruction of `u(n)`. Audits compare published
//! closed forms against exact iteration.

mod audit;
mod invariant;
mod map;
mod reconstruct;

pub use audit::{audit_paper_solution, AuditOptions, AuditReport, AuditVerdict, PaperFormula};
pub use invariant::{invariant_from_generator, Invariant};
pub use map::{
    reduced_map, solve_first_order, v_var, FirstOrderSolution, MapClass, ReducedMap, Seed,
};
pub use reconstruct::{reconstruct, ClosedFormSolution, USolution};

use crate::num::{Cyc, CycQ, CycRat, Field};
use crate::symexpr::{RatFun, Var};

/// Exact value of a parameter-free cyclotomic constant.
pub(crate) fn to_cycq(c: &CycRat) -> Option<CycQ> {
    let coords = c
        .coords()
        .iter()
        .map(RatFun::constant_value)
        .collect::<Option<Vec<_>>>()?;
    Some(Cyc::from_coords(c.order(), coords).simplified())
}

pub(crate) fn from_cycq(c: &CycQ) -> CycRat {
    c.map(|g| RatFun::constant(g.clone()))
}

/// Evaluate every coordinate at a point of a cyclotomic field and recombine.
pub(crate) fn eval_cyc<H: Field>(c: &CycRat, value: &dyn Fn(Var) -> Cyc<H>) -> Option<Cyc<H>> {
    let mut acc = Cyc::<H>::zero();
    for (j, x) in c.coords().iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let y = x.eval::<Cyc<H>>(value)?;
        acc = Field::add(
            &acc,
            &Field::mul(&y, &Cyc::root_of_unity(j as i64, c.order())),
        );
    }
    Some(acc.simplified())
}

#[cfg(test)]
mod tests;

use std::fmt;

use serde_json::{json, Value};

use crate::eqmodel::{iterate, DifferenceEquation};
use crate::error::{Error, Result};
use crate::num::{CycQ, Field};

/// Evaluator of a closed form: `(branch, n, u0, u1) ↦ u(n)`.
pub type FormulaFn = fn(usize, i64, &CycQ, &CycQ) -> Option<CycQ>;

/// A closed-form solution as published, possibly multivalued.
#[derive(Clone, Debug)]
pub struct PaperFormula {
    pub id: String,
    pub text: String,
    /// One name per branch of the multivalued expression.
    pub branches: Vec<String>,
    /// Initial data `(u0, u1)` substituted into each branch.
    pub init: Vec<(CycQ, CycQ)>,
    eval: FormulaFn,
    conjugated: bool,
}

impl PaperFormula {
    pub fn new(
        id: &str,
        text: &str,
        branches: &[&str],
        init: Vec<(CycQ, CycQ)>,
        eval: FormulaFn,
    ) -> Self {
        assert_eq!(branches.len(), init.len(), "one initial pair per branch");
        PaperFormula {
            id: id.to_string(),
            text: text.to_string(),
            branches: branches.iter().map(|s| s.to_string()).collect(),
            init,
            eval,
            conjugated: false,
        }
    }

    /// The complex conjugate formula, evaluated at conjugated initial data.
    pub fn conjugate(&self) -> Self {
        PaperFormula {
            id: format!("{}*", self.id),
            init: self
                .init
                .iter()
                .map(|(a, b)| (a.conj(), b.conj()))
                .collect(),
            conjugated: !self.conjugated,
            ..self.clone()
        }
    }

    pub fn eval(&self, branch: usize, n: i64) -> Option<CycQ> {
        let (u0, u1) = &self.init[branch];
        if self.conjugated {
            (self.eval)(branch, n, &u0.conj(), &u1.conj()).map(|x| x.conj().simplified())
        } else {
            (self.eval)(branch, n, u0, u1).map(|x| x.simplified())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditVerdict {
    Match,
    Mismatch,
}

impl AuditVerdict {
    pub fn name(self) -> &'static str {
        match self {
            AuditVerdict::Match => "match",
            AuditVerdict::Mismatch => "mismatch",
        }
    }
}

impl fmt::Display for AuditVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    pub from: i64,
    pub to: i64,
    /// Zero compares exactly; otherwise `|F − u| ≤ tol·max(1, |u|)`.
    pub tol: f64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            from: 0,
            to: 30,
            tol: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub formula_id: String,
    pub branch: String,
    pub verdict: AuditVerdict,
    /// First `n` where the formula differs from iteration started at the
    /// declared initial data.
    pub first_fail_n: Option<i64>,
    pub max_abs_err: f64,
    pub range: (i64, i64),
    /// Whether iterating from the formula's own values at `from`, `from+1`
    /// reproduces it, i.e. whether it solves the equation at all.
    pub satisfies_equation: bool,
    pub equation_first_fail_n: Option<i64>,
}

impl AuditReport {
    pub fn to_json(&self) -> Value {
        json!({
            "formula_id": self.formula_id,
            "branch": self.branch,
            "verdict": self.verdict.name(),
            "first_fail_n": self.first_fail_n,
            "max_abs_err": self.max_abs_err,
            "range": [self.range.0, self.range.1],
            "satisfies_equation": self.satisfies_equation,
            "equation_first_fail_n": self.equation_first_fail_n,
        })
    }
}

fn trajectory(eq: &DifferenceEquation, a: &CycQ, b: &CycQ, n0: i64, steps: usize) -> Vec<CycQ> {
    iterate::<CycQ>(eq.omega(), 2, &[a.clone(), b.clone()], n0, steps, &|v| {
        panic!("unbound parameter {v}")
    })
    .0
}

struct Comparison {
    first_fail: Option<i64>,
    max_err: f64,
}

fn compare(values: &[Option<CycQ>], traj: &[CycQ], from: i64, tol: f64) -> Comparison {
    let mut first_fail = None;
    let mut max_err: f64 = 0.0;
    for (i, f) in values.iter().enumerate() {
        let n = from + i as i64;
        let ok = match (f, traj.get(i)) {
            (Some(f), Some(t)) => {
                let err = (f.to_complex() - t.to_complex()).norm();
                max_err = max_err.max(err);
                if tol == 0.0 {
                    f == &t.simplified()
                } else {
                    err <= tol * t.to_complex().norm().max(1.0)
                }
            }
            _ => false,
        };
        if !ok && first_fail.is_none() {
            first_fail = Some(n);
        }
    }
    Comparison {
        first_fail,
        max_err,
    }
}

/// Compare every branch of `formula` with exact iteration of `eq`, once from
/// the declared initial data and once from the formula's own first values.
pub fn audit_paper_solution(
    eq: &DifferenceEquation,
    formula: &PaperFormula,
    opts: &AuditOptions,
) -> Result<Vec<AuditReport>> {
    if eq.order() != 2 {
        return Err(Error::Invalid("audits need a second-order equation".into()));
    }
    if opts.from < 0 || opts.to < opts.from + 1 {
        return Err(Error::Invalid(format!(
            "bad audit range {}..={}",
            opts.from, opts.to
        )));
    }
    if let Some(p) = eq.unbound(&Default::default()) {
        return Err(Error::UnboundParameter(p));
    }
    let steps = (opts.to - opts.from - 1) as usize;
    let mut out = Vec::new();
    for (b, name) in formula.branches.iter().enumerate() {
        let values: Vec<Option<CycQ>> = (opts.from..=opts.to).map(|n| formula.eval(b, n)).collect();
        let (u0, u1) = &formula.init[b];
        let declared = trajectory(eq, u0, u1, 0, opts.to.max(1) as usize - 1);
        let declared = declared.get(opts.from as usize..).unwrap_or(&[]);
        let primary = compare(&values, declared, opts.from, opts.tol);
        let own = match (&values[0], &values[1]) {
            (Some(a), Some(c)) => {
                compare(
                    &values,
                    &trajectory(eq, a, c, opts.from, steps),
                    opts.from,
                    opts.tol,
                )
                .first_fail
            }
            _ => Some(opts.from),
        };
        out.push(AuditReport {
            formula_id: formula.id.clone(),
            branch: name.clone(),
            verdict: if primary.first_fail.is_none() {
                AuditVerdict::Match
            } else {
                AuditVerdict::Mismatch
            },
            first_fail_n: primary.first_fail,
            max_abs_err: primary.max_err,
            range: (opts.from, opts.to),
            satisfies_equation: own.is_none(),
            equation_first_fail_n: own,
        });
    }
    Ok(out)
}

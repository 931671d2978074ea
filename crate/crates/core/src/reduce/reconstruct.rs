use std::fmt;

use serde_json::{json, Value};

use super::invariant::Invariant;
use super::map::FirstOrderSolution;
use super::{from_cycq, to_cycq};
use crate::eqmodel::{iterate, DifferenceEquation};
use crate::error::{Error, Result};
use crate::num::{CycQ, CycRat, Field};
use crate::seqform::{cyc_text, RootOfUnityScalar, SeqTerm, SequenceClosedForm};

/// Steps compared against exact iteration.
const CHECK_STEPS: i64 = 30;

#[derive(Clone, Debug, PartialEq)]
pub enum USolution {
    Sequence(SequenceClosedForm),
    /// `u(qP + r) = base[r]·multiplier^q`.
    PeriodicProduct {
        period: u32,
        base: Vec<CycQ>,
        multiplier: CycQ,
    },
    /// Exact values `u(0..)`; no closed form was found.
    Iterated(Vec<CycQ>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormSolution {
    pub u: USolution,
    pub u0: CycQ,
    pub u1: CycQ,
    pub notes: Vec<String>,
    /// Number of `n` at which the solution was compared with iteration.
    pub checked: usize,
}

impl ClosedFormSolution {
    pub fn at(&self, n: i64) -> Option<CycQ> {
        match &self.u {
            USolution::Sequence(s) => to_cycq(&s.eval(n)),
            USolution::PeriodicProduct {
                period,
                base,
                multiplier,
            } => {
                let p = *period as i64;
                let q = n.div_euclid(p);
                let r = n.rem_euclid(p) as usize;
                Some(Field::mul(&base[r], &multiplier.pow(q)?).simplified())
            }
            USolution::Iterated(vals) => usize::try_from(n).ok().and_then(|i| vals.get(i).cloned()),
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self.u, USolution::Iterated(_))
    }

    fn render(&self, seq: &dyn Fn(&SequenceClosedForm) -> String) -> String {
        match &self.u {
            USolution::Sequence(s) => format!("u(n) = {}", seq(s)),
            USolution::PeriodicProduct {
                period,
                base,
                multiplier,
            } => {
                let b: Vec<String> = base.iter().map(|c| cyc_text(&from_cycq(c))).collect();
                format!(
                    "u({period}q + r) = b(r)*({})^q, b = [{}]",
                    cyc_text(&from_cycq(multiplier)),
                    b.join(", ")
                )
            }
            USolution::Iterated(vals) => format!("u(n) by iteration ({} values)", vals.len()),
        }
    }

    pub fn text(&self) -> String {
        self.render(&|s| s.to_string())
    }

    /// Real trigonometric form, followed by one period of values when
    /// `u` is periodic.
    pub fn real_text(&self) -> String {
        let body = self.render(&SequenceClosedForm::real_form);
        match &self.u {
            USolution::Sequence(s) => match s.period() {
                Some(p) if p > 1 => {
                    let vals: Vec<String> = (0..p as i64).map(|n| cyc_text(&s.eval(n))).collect();
                    format!("{body}, period {p}: [{}]", vals.join(", "))
                }
                _ => body,
            },
            _ => body,
        }
    }

    pub fn to_json(&self) -> Value {
        let values: Vec<Value> = (0..=10)
            .map(|n| match self.at(n) {
                Some(c) => json!(cyc_text(&from_cycq(&c))),
                None => Value::Null,
            })
            .collect();
        json!({
            "closed_form": self.is_closed_form(),
            "exponential": self.text(),
            "real": self.real_text(),
            "u0": cyc_text(&from_cycq(&self.u0)),
            "u1": cyc_text(&from_cycq(&self.u1)),
            "first_values": values,
            "checked_steps": self.checked,
            "notes": self.notes,
        })
    }
}

impl fmt::Display for ClosedFormSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

/// `u(n)` from a solution of the reduced map and the initial data, checked
/// against exact iteration of the equation for `n = 0..=30`.
pub fn reconstruct(
    eq: &DifferenceEquation,
    inv: &Invariant,
    v: &FirstOrderSolution,
    u0: &CycQ,
    u1: &CycQ,
) -> Result<ClosedFormSolution> {
    if let Some(p) = eq.unbound(&Default::default()) {
        return Err(Error::UnboundParameter(p));
    }
    if matches!(inv, Invariant::Ratio) && Field::is_zero(u0) {
        return Err(Error::SingularInitialData(
            "u(0) = 0 has no ratio invariant".into(),
        ));
    }
    let v0 = inv.eval(0, u0, u1).ok_or_else(|| {
        Error::SingularInitialData("invariant undefined at the initial data".into())
    })?;
    let v0r = from_cycq(&v0);
    let v = match to_cycq(v.v0()) {
        Some(given) if given != v0 => {
            return Err(Error::Invalid(format!(
                "initial data give v(0) = {}, the solution starts at {}",
                cyc_text(&v0r),
                cyc_text(v.v0())
            )))
        }
        Some(_) => v.clone(),
        None => v.with_seed(v0r),
    };
    let mut notes = Vec::new();
    let u = match inv {
        Invariant::Ratio => ratio_solution(&v, u0, &mut notes),
        Invariant::Translation { values, .. } => translation_solution(values, &v, u0, &mut notes),
    };
    let mut sol = ClosedFormSolution {
        u,
        u0: u0.clone(),
        u1: u1.clone(),
        notes,
        checked: 0,
    };
    if let USolution::Iterated(_) = sol.u {
        sol.u = USolution::Iterated(iterate_u(inv, &v, u0, CHECK_STEPS));
    }
    sol.checked = check_against_iteration(eq, &sol)?;
    Ok(sol)
}

fn iterate_u(inv: &Invariant, v: &FirstOrderSolution, u0: &CycQ, steps: i64) -> Vec<CycQ> {
    let mut out = vec![u0.clone()];
    for k in 0..steps {
        let Some(vk) = v.at_exact(k) else { break };
        let cur = out.last().expect("nonempty").clone();
        let next = match inv {
            Invariant::Ratio => Field::mul(&cur, &vk),
            Invariant::Translation { .. } => {
                let Some(rho) = inv.rho_at(k).and_then(to_cycq) else {
                    break;
                };
                Field::add(&Field::mul(&rho, &cur), &vk)
            }
        };
        out.push(next.simplified());
    }
    out
}

/// `u(n) = u0·Π_{k<n} v(k)`, collapsed over an exact period of `v`.
fn ratio_solution(v: &FirstOrderSolution, u0: &CycQ, notes: &mut Vec<String>) -> USolution {
    let Some(p) = v.period() else {
        notes.push("v(n) is not periodic; the product is left unevaluated".into());
        return USolution::Iterated(Vec::new());
    };
    let mut base = vec![u0.clone()];
    let mut k = CycQ::one();
    for i in 0..p as i64 {
        let Some(vi) = v.at_exact(i).filter(|x| !Field::is_zero(x)) else {
            notes.push(format!("v({i}) is singular or zero"));
            return USolution::Iterated(Vec::new());
        };
        k = Field::mul(&k, &vi).simplified();
        if i + 1 < p as i64 {
            base.push(Field::mul(base.last().expect("nonempty"), &vi).simplified());
        }
    }
    if p == 1 {
        if let Some(lam) = RootOfUnityScalar::from_cyc(&k) {
            return USolution::Sequence(SequenceClosedForm::term(from_cycq(u0), lam, 0));
        }
    }
    if k.is_one() {
        notes.push(format!("the product telescopes over the period {p}"));
        let vals: Vec<CycRat> = base.iter().map(from_cycq).collect();
        return USolution::Sequence(SequenceClosedForm::from_periodic(&vals));
    }
    USolution::PeriodicProduct {
        period: p,
        base,
        multiplier: k,
    }
}

/// `u(n+1) = λ·u(n) + v(n)` summed in closed form when `ρ ≡ λ` and `v` is an
/// exponential sum.
fn translation_solution(
    rho: &[CycRat],
    v: &FirstOrderSolution,
    u0: &CycQ,
    notes: &mut Vec<String>,
) -> USolution {
    let seq = match (rho.len(), v.as_sequence()) {
        (1, Some(s)) if s.max_deg() == 0 => s,
        _ => {
            notes.push("no closed-form summation for this invariant".into());
            return USolution::Iterated(Vec::new());
        }
    };
    let Some(lam) = to_cycq(&rho[0]).and_then(|c| RootOfUnityScalar::from_cyc(&c)) else {
        notes.push("ρ is not a scaled root of unity".into());
        return USolution::Iterated(Vec::new());
    };
    let lam_c: CycRat = lam.to_cyc();
    let mut out = SequenceClosedForm::term(from_cycq(u0), lam.clone(), 0);
    for t in seq.terms() {
        if t.lam == lam {
            // Σ_{k<n} λ^{n-1-k}·c·λ^k = c·n·λ^{n-1}
            let c = t.coef.div(&lam_c).expect("nonzero");
            out = out.add(&SequenceClosedForm::from_terms(vec![SeqTerm {
                coef: c,
                lam: lam.clone(),
                deg: 1,
            }]));
        } else {
            let mu: CycRat = t.lam.to_cyc();
            let c = t
                .coef
                .div(&Field::sub(&mu, &lam_c))
                .expect("distinct roots");
            out = out
                .add(&SequenceClosedForm::term(c.clone(), t.lam.clone(), 0))
                .sub(&SequenceClosedForm::term(c, lam.clone(), 0));
        }
    }
    USolution::Sequence(out)
}

fn check_against_iteration(eq: &DifferenceEquation, sol: &ClosedFormSolution) -> Result<usize> {
    let init = [sol.u0.clone(), sol.u1.clone()];
    let (vals, _) = iterate::<CycQ>(eq.omega(), 2, &init, 0, (CHECK_STEPS - 1) as usize, &|v| {
        panic!("unbound parameter {v}")
    });
    let mut checked = 0;
    for (n, expected) in vals.iter().enumerate() {
        let Some(got) = sol.at(n as i64) else { break };
        if got != expected.simplified() {
            return Err(Error::Internal(format!(
                "reconstructed u({n}) = {} but iteration gives {}",
                cyc_text(&from_cycq(&got)),
                cyc_text(&from_cycq(expected))
            )));
        }
        checked += 1;
    }
    Ok(checked)
}

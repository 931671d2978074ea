use std::fmt::Write as _;

use dsym_core::catalog::{self, Expected};
use dsym_core::eqmodel::{simulate, transform_equation, SimMode, SimOptions, Transform};
use dsym_core::num::{CycQ, Gq};
use dsym_core::reduce::{
    audit_paper_solution, invariant_from_generator, reconstruct, reduced_map, solve_first_order,
    AuditOptions, Seed,
};
use dsym_core::seqform::{real_basis, solve_recurrence, upoly_text, RecurrenceConstraint};
use dsym_core::symexpr::{parse_expr, render};
use dsym_core::symmetry::{
    extract_determining_system, recurrence_text, solve_determining_system, verify_numeric,
    verify_symbolic, NumericOptions, XiMode,
};
use dsym_core::{Error, Result};
use serde_json::{json, Value};

use crate::input::{parse_list, resolve};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::VerificationFailed => "verification_failed",
            Status::Error => "error",
        }
    }

    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 2,
            Status::Error => 1,
        }
    }
}

pub struct Outcome {
    pub status: Status,
    pub payload: Value,
    pub text: String,
}

impl Outcome {
    fn ok(payload: Value, text: String) -> Self {
        Outcome {
            status: Status::Ok,
            payload,
            text,
        }
    }
}

pub struct Sampling {
    pub seed: u64,
    pub tol: f64,
    pub samples: usize,
}

pub fn parse(expr: &str) -> Result<Outcome> {
    let e = parse_expr(expr)?;
    let tree = render(&e);
    match e.to_rational() {
        Ok(r) => {
            let vars: Vec<String> = r.vars().iter().map(|v| v.to_string()).collect();
            let text = format!("{r}\nnumerator: {}\ndenominator: {}", r.num(), r.den());
            Ok(Outcome::ok(
                json!({"input": expr, "expression": tree, "rational": true, "canonical": r.to_string(),
                       "numerator": r.num().to_string(), "denominator": r.den().to_string(), "vars": vars}),
                text,
            ))
        }
        Err(Error::NonRational) => Ok(Outcome::ok(
            json!({"input": expr, "expression": tree, "rational": false}),
            format!("{tree}\n(not rational)"),
        )),
        Err(e) => Err(e),
    }
}

pub struct VerifyArgs<'a> {
    pub eq: &'a str,
    pub branch: Option<&'a str>,
    pub gen: &'a str,
    pub numeric: bool,
    pub params: &'a [String],
}

pub fn verify(a: &VerifyArgs, s: &Sampling) -> Result<Outcome> {
    let r = resolve(a.eq, a.branch, a.params)?;
    let g = r.generator(a.gen)?;
    let report = if a.numeric {
        let opts = NumericOptions {
            samples: s.samples,
            tol: s.tol,
            seed: s.seed,
            params: r.values.clone(),
        };
        verify_numeric(&r.equation, &g, &opts)?
    } else {
        verify_symbolic(&r.bound_equation()?, &g)?
    };
    let anchor = r.view.as_ref().and_then(|v| {
        v.generators
            .iter()
            .find(|c| c.label.eq_ignore_ascii_case(a.gen))
    });
    let mut payload = report.to_json();
    payload["equation"] = json!(r.label());
    payload["generator"] = json!({"xi": g.xi_text(), "Q": g.q_text(), "provenance": g.provenance});
    if let Some(c) = anchor {
        payload["anchor"] = json!(c.anchor);
        payload["expected"] = json!(c.expected.name());
    }
    let mut text = format!(
        "{}: X = ({})∂n + ({})∂u\n",
        r.label(),
        g.xi_text(),
        g.q_text()
    );
    if report.passed {
        let _ = write!(text, "ok ({} mode", report.mode.name());
        if !report.residues_checked.is_empty() {
            let last = report.residues_checked.last().expect("nonempty");
            let _ = write!(text, ", residues 0..{last}");
        }
        if let Some(x) = report.residual_norm {
            let _ = write!(text, ", max relative residual {x:.3e}");
        }
        text.push(')');
    } else {
        text.push_str("verification failed");
        if let Some(k) = report.failing_residue {
            let _ = write!(text, " on n ≡ {k}");
        }
        if let Some(w) = &report.witness {
            let u: Vec<String> = w.u.iter().map(|z| format!("{z}")).collect();
            let _ = write!(
                text,
                "\nwitness: n = {}, u = [{}], residual = {}",
                w.n,
                u.join(", "),
                w.residual
            );
        }
    }
    let status = if report.passed {
        Status::Ok
    } else {
        Status::VerificationFailed
    };
    Ok(Outcome {
        status,
        payload,
        text,
    })
}

pub fn determine(
    eq: &str,
    branch: Option<&str>,
    params: &[String],
    degree: usize,
    xi: XiMode,
) -> Result<Outcome> {
    let r = resolve(eq, branch, params)?;
    let e = r.bound_equation()?;
    let ds = extract_determining_system(&e, degree, xi);
    let sol = solve_determining_system(&ds)?;
    let eqs: Vec<String> = ds.equations.iter().map(|d| d.to_string()).collect();
    let gens: Vec<Value> = sol
        .generators
        .iter()
        .map(|g| json!({"xi": g.xi_text(), "Q": g.q_text(), "generator": g.to_json()}))
        .collect();
    let constraints: Vec<String> = sol.constraints.iter().map(|c| c.to_string()).collect();
    let family = sol
        .translation_family
        .as_ref()
        .map(|rc| recurrence_text(&rc.coefficients, "alpha"));
    let mut text = format!(
        "{} with degree {degree}: {} determining equations\n",
        r.label(),
        eqs.len()
    );
    for d in &eqs {
        let _ = writeln!(text, "  {d}");
    }
    let _ = writeln!(text, "constraints:");
    for c in &constraints {
        let _ = writeln!(text, "  {c}");
    }
    let _ = writeln!(text, "generators ({}):", gens.len());
    for (k, g) in sol.generators.iter().enumerate() {
        let _ = writeln!(
            text,
            "  X{} = ({})∂n + ({})∂u",
            k + 1,
            g.xi_text(),
            g.q_text()
        );
    }
    if let Some(f) = &family {
        let _ = writeln!(text, "plus Q = alpha(n) for every solution of {f} = 0");
    }
    Ok(Outcome::ok(
        json!({"equation": r.label(), "degree": degree, "xi": if xi == XiMode::Affine { "affine" } else { "none" },
               "determining_system": eqs, "constraints": constraints, "generators": gens,
               "translation_family": family}),
        text.trim_end().to_string(),
    ))
}

pub struct SimArgs<'a> {
    pub eq: &'a str,
    pub branch: Option<&'a str>,
    pub params: &'a [String],
    pub init: &'a str,
    pub n0: i64,
    pub steps: usize,
    pub float: bool,
    pub csv: bool,
}

pub fn simulate_cmd(a: &SimArgs) -> Result<Outcome> {
    let r = resolve(a.eq, a.branch, a.params)?;
    let init = parse_list(a.init)?;
    let opts = SimOptions {
        mode: if a.float {
            SimMode::Float
        } else {
            SimMode::Exact
        },
        ..SimOptions::default()
    };
    let t = simulate(&r.equation, &r.values, &init, a.n0, a.steps, &opts)?;
    let payload = json!({"equation": r.label(), "n0": a.n0, "mode": if a.float { "float" } else { "exact" },
                         "singular_at": t.first_singular().map(|i| a.n0 + i as i64), "trajectory": t.to_json()});
    let text = if a.csv {
        t.to_csv().trim_end().to_string()
    } else {
        serde_json::to_string_pretty(&t.to_json()).expect("json")
    };
    Ok(Outcome::ok(payload, text))
}

pub fn transform(eq: &str, branch: Option<&str>, params: &[String], kind: &str) -> Result<Outcome> {
    let r = resolve(eq, branch, params)?;
    let t = match kind {
        "reciprocal" => Transform::Reciprocal,
        "log" => Transform::Log,
        k => {
            let body = k.strip_prefix("affine:").ok_or_else(|| {
                Error::Invalid(format!(
                    "unknown transform `{k}`; use reciprocal, log or affine:s,t"
                ))
            })?;
            match parse_list(body)?.as_slice() {
                [s, t] => Transform::Affine(s.clone(), t.clone()),
                _ => return Err(Error::Invalid("affine needs two values s,t".into())),
            }
        }
    };
    let out = transform_equation(&r.bound_equation()?, &t)?;
    let offset = out.log_offset.as_ref().map(|o| o.text());
    let mut text = format!("{} -> {}", r.label(), out.equation);
    if let Some(o) = &offset {
        let _ = write!(text, "\nw = ln u - {o}");
    }
    Ok(Outcome::ok(
        json!({"equation": r.label(), "transform": kind, "result": out.equation.to_json(&Default::default()),
               "canonical": out.equation.omega().to_string(), "log_offset": offset}),
        text,
    ))
}

pub struct ReduceArgs<'a> {
    pub eq: &'a str,
    pub branch: Option<&'a str>,
    pub params: &'a [String],
    pub gen: &'a str,
    pub u0: Option<&'a str>,
    pub u1: Option<&'a str>,
    pub audit: Option<&'a str>,
}

pub fn reduce(a: &ReduceArgs) -> Result<Outcome> {
    let r = resolve(a.eq, a.branch, a.params)?;
    let e = r.bound_equation()?;
    let g = r.generator(a.gen)?;
    let inv = invariant_from_generator(&e, &g)?;
    let map = reduced_map(&e, &inv)?;
    let sol = solve_first_order(&map, &Seed::Symbol("v0".into()))?;
    let mut payload = json!({
        "equation": r.label(), "generator": a.gen, "invariant": inv.to_string(), "invariant_kind": inv.kind(),
        "reduced_map": map.text(), "map_class": map.class.name(), "v": sol.text(), "v_real": sol.real_text(),
        "v_closed_form": sol.is_closed_form(), "warning": sol.warning(),
    });
    let mut text = format!(
        "{} reduced by {}\ninvariant: {inv}\nmap: {} ({})\nsolution: {}",
        r.label(),
        a.gen,
        map.text(),
        map.class.name(),
        sol.real_text()
    );
    if let Some(w) = sol.warning() {
        let _ = write!(text, "\nwarning: {w}");
    }
    match (a.u0, a.u1) {
        (Some(x), Some(y)) => {
            let (u0, u1) = (CycQ::from_base(one(x)?), CycQ::from_base(one(y)?));
            let u = reconstruct(&e, &inv, &sol, &u0, &u1)?;
            let _ = write!(
                text,
                "\nu: {}\n   {} (checked against iteration for {} values)",
                u.text(),
                u.real_text(),
                u.checked
            );
            payload["reconstruction"] = u.to_json();
        }
        (None, None) => {}
        _ => return Err(Error::Invalid("give both --u0 and --u1".into())),
    }
    if let Some(id) = a.audit {
        let view = r
            .view
            .as_ref()
            .ok_or_else(|| Error::Invalid("audits need a catalog equation".into()))?;
        let s = view.solution(id)?;
        let reports = audit_paper_solution(&e, &s.formula, &AuditOptions::default())?;
        let _ = write!(text, "\naudit of {}: {}", s.formula.id, s.formula.text);
        for rep in &reports {
            let _ = write!(text, "\n  {}: {}", rep.branch, rep.verdict);
            if let Some(n) = rep.first_fail_n {
                let _ = write!(text, ", first failing n = {n}");
            }
            let _ = write!(
                text,
                ", solves the equation: {}",
                if rep.satisfies_equation { "yes" } else { "no" }
            );
        }
        payload["audit"] = Value::Array(reports.iter().map(|x| x.to_json()).collect());
    }
    Ok(Outcome::ok(payload, text))
}

fn one(text: &str) -> Result<Gq> {
    match parse_list(text)?.as_slice() {
        [x] => Ok(x.clone()),
        _ => Err(Error::Invalid(format!("`{text}` must be a single value"))),
    }
}

pub fn solve_recurrence_cmd(coeffs: &str) -> Result<Outcome> {
    let c = parse_list(coeffs)?;
    let rc = RecurrenceConstraint::new(c)?;
    let basis = solve_recurrence(&rc)?;
    let exp: Vec<String> = basis.iter().map(|s| s.to_string()).collect();
    let real: Vec<String> = real_basis(&basis).iter().map(|s| s.real_form()).collect();
    let eq = recurrence_text(&rc.coefficients, "a");
    let mut text = format!(
        "{eq} = 0, characteristic {}\nexponential basis:",
        upoly_text(&rc.coefficients, "x")
    );
    for e in &exp {
        let _ = write!(text, "\n  {e}");
    }
    text.push_str("\nreal basis:");
    for r in &real {
        let _ = write!(text, "\n  {r}");
    }
    Ok(Outcome::ok(
        json!({"recurrence": eq, "characteristic": rc.text(), "basis": exp, "basis_real": real,
               "basis_json": basis.iter().map(|s| s.to_json()).collect::<Vec<_>>()}),
        text,
    ))
}

pub fn catalog_list() -> Result<Outcome> {
    let rows = catalog::list();
    let mut text = String::new();
    for r in &rows {
        let _ = writeln!(
            text,
            "{:<4} {:<16} {} generators  [{}]",
            r.id,
            r.branch,
            r.generators,
            r.assumptions.join(", ")
        );
        for n in &r.notes {
            let _ = writeln!(text, "     note: {n}");
        }
    }
    let _ = write!(text, "total: {} generators", catalog::total_generators());
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({"id": r.id, "branch": r.branch, "assumptions": r.assumptions,
                        "generators": r.generators, "solutions": r.solutions, "notes": r.notes})
        })
        .collect();
    Ok(Outcome::ok(
        json!({"entries": json_rows, "total_generators": catalog::total_generators()}),
        text,
    ))
}

pub fn catalog_export(id: &str, branch: Option<&str>) -> Result<Outcome> {
    let branch = match branch {
        Some(b) => b.to_string(),
        None => catalog::default_branch(id)?,
    };
    let v = catalog::get(id, &branch)?;
    let payload = v.to_json();
    let text = serde_json::to_string_pretty(&payload).expect("json");
    Ok(Outcome::ok(payload, text))
}

pub fn selftest() -> Result<Outcome> {
    let report = catalog::self_test()?;
    let mut text = String::new();
    for i in &report.items {
        let _ = writeln!(text, "{i}");
    }
    let verified = report
        .items
        .iter()
        .filter(|i| i.expected == Expected::Verified)
        .count();
    let _ = write!(
        text,
        "{} items, {verified} expected to verify: {}",
        report.items.len(),
        if report.ok() { "all pass" } else { "FAILURES" }
    );
    let status = if report.ok() {
        Status::Ok
    } else {
        Status::VerificationFailed
    };
    Ok(Outcome {
        status,
        payload: report.to_json(),
        text,
    })
}

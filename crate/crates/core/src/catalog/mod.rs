//! Built-in registry of the five discrete Painlevé equations dP1..dP5.
//!
//! Each entry holds the equation, named parameter branches, the documented
//! symmetry generators per branch and the documented explicit solutions.
//! Generators tagged [`Expected::Audit`] are kept as published even though
//! they are not expected to verify; the self-test reports their verdicts.

mod data;
mod formulas;

use std::collections::BTreeMap;
use std::fmt;

use once_cell::sync::Lazy;
use serde_json::{json, Value};

use crate::eqmodel::DifferenceEquation;
use crate::error::{Error, Result};
use crate::num::{CycRat, Gq};
use crate::reduce::{audit_paper_solution, AuditOptions, AuditReport, PaperFormula};
use crate::symmetry::{verify_symbolic, SymmetryGenerator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Verified,
    Audit,
}

impl Expected {
    pub fn name(self) -> &'static str {
        match self {
            Expected::Verified => "verified",
            Expected::Audit => "audit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogGenerator {
    pub label: String,
    pub generator: SymmetryGenerator,
    /// Stable identifier `id/branch/label`.
    pub anchor: String,
    pub expected: Expected,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CatalogSolution {
    pub formula: PaperFormula,
    /// Generator expression whose reduction produces the formula.
    pub via: String,
    pub expected: Expected,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub name: String,
    pub assumptions: Vec<String>,
    pub generators: Vec<CatalogGenerator>,
    pub solutions: Vec<CatalogSolution>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub title: String,
    pub omega: String,
    pub order: u32,
    pub params: Vec<String>,
    pub branches: Vec<Branch>,
}

impl CatalogEntry {
    pub fn branch(&self, name: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.name == name)
    }

    pub fn equation(&self, branch: &Branch) -> DifferenceEquation {
        let params: Vec<&str> = self.params.iter().map(String::as_str).collect();
        let assumptions: Vec<&str> = branch.assumptions.iter().map(String::as_str).collect();
        DifferenceEquation::new(&self.omega, self.order, &params, &assumptions)
            .expect("catalog equations are well formed")
    }
}

static CATALOG: Lazy<Vec<CatalogEntry>> = Lazy::new(data::entries);

/// All entries in the order dP1..dP5.
pub fn entries() -> &'static [CatalogEntry] {
    &CATALOG
}

/// One instantiated branch of an entry.
#[derive(Clone, Debug)]
pub struct BranchView {
    pub id: String,
    pub branch: String,
    pub equation: DifferenceEquation,
    pub generators: Vec<CatalogGenerator>,
    pub solutions: Vec<CatalogSolution>,
    pub notes: Vec<String>,
}

pub fn get(id: &str, branch: &str) -> Result<BranchView> {
    let entry = entries()
        .iter()
        .find(|e| e.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownEntry(id.to_string()))?;
    let b = entry
        .branch(branch)
        .ok_or_else(|| Error::UnknownEntry(format!("{}/{branch}", entry.id)))?;
    Ok(BranchView {
        id: entry.id.clone(),
        branch: b.name.clone(),
        equation: entry.equation(b),
        generators: b.generators.clone(),
        solutions: b.solutions.clone(),
        notes: b.notes.clone(),
    })
}

/// The single branch of `id` when it has only one.
pub fn default_branch(id: &str) -> Result<String> {
    let entry = entries()
        .iter()
        .find(|e| e.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownEntry(id.to_string()))?;
    match entry.branches.as_slice() {
        [b] => Ok(b.name.clone()),
        bs => Err(Error::Invalid(format!(
            "{} has branches {}; pick one",
            entry.id,
            bs.iter()
                .map(|b| b.name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

impl BranchView {
    /// Check parameter values against the branch assumptions.
    pub fn instantiate(&self, values: &BTreeMap<String, Gq>) -> Result<BTreeMap<String, Gq>> {
        self.equation.bind(values)
    }

    /// Look up `X2`, `x2`, `2` (1-based) or a combination such as
    /// `X2+iX3`, `X2 - i*X3`, `2*X1`.
    pub fn generator(&self, spec: &str) -> Result<SymmetryGenerator> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Invalid("empty generator reference".into()));
        }
        let mut total: Option<SymmetryGenerator> = None;
        for (sign, term) in split_signed(&s) {
            let (coef, label) = split_coefficient(&term)?;
            let g = self.lookup(label)?;
            let c = if sign { coef } else { -coef };
            let scaled = g.scale(&<CycRat as crate::num::Field>::from_gq(&c))?;
            total = Some(match total {
                None => scaled,
                Some(t) => t.add(&scaled),
            });
        }
        let mut g = total.expect("nonempty");
        g.provenance = format!("{}/{}/{spec}", self.id, self.branch);
        Ok(g)
    }

    fn lookup(&self, label: &str) -> Result<&SymmetryGenerator> {
        let idx = if let Ok(k) = label.parse::<usize>() {
            k.checked_sub(1)
        } else {
            self.generators
                .iter()
                .position(|g| g.label.eq_ignore_ascii_case(label))
        };
        idx.and_then(|i| self.generators.get(i))
            .map(|g| &g.generator)
            .ok_or_else(|| Error::UnknownEntry(format!("{}/{}/{label}", self.id, self.branch)))
    }

    pub fn solution(&self, id: &str) -> Result<&CatalogSolution> {
        self.solutions
            .iter()
            .find(|s| s.formula.id == id)
            .ok_or_else(|| Error::UnknownEntry(format!("{}/{}/{id}", self.id, self.branch)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "branch": self.branch,
            "equation": self.equation.to_json(&BTreeMap::new()),
            "generators": self.generators.iter().map(|g| json!({
                "label": g.label,
                "anchor": g.anchor,
                "expected": g.expected.name(),
                "note": g.note,
                "generator": g.generator.to_json(),
                "xi": g.generator.xi_text(),
                "Q": g.generator.q_text(),
            })).collect::<Vec<_>>(),
            "solutions": self.solutions.iter().map(|s| json!({
                "formula_id": s.formula.id,
                "text": s.formula.text,
                "branches": s.formula.branches,
                "via": s.via,
                "expected": s.expected.name(),
                "note": s.note,
            })).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

fn split_signed(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut sign = true;
    for c in s.chars() {
        if (c == '+' || c == '-') && !cur.is_empty() && !cur.ends_with('*') {
            out.push((sign, std::mem::take(&mut cur)));
            sign = c == '+';
        } else if (c == '+' || c == '-') && cur.is_empty() {
            sign = (c == '+') == sign;
        } else {
            cur.push(c);
        }
    }
    out.push((sign, cur));
    out
}

/// `iX3`, `i*X3`, `2*X1`, `1/2*X1`, `X1`.
fn split_coefficient(term: &str) -> Result<(Gq, &str)> {
    let bare = |t: &str| {
        t.chars()
            .next()
            .is_some_and(|c| c == 'X' || c == 'x' || c.is_ascii_digit())
    };
    if let Some((c, rest)) = term.rsplit_once('*') {
        return Ok((crate::symexpr::parse_gq(c)?, rest));
    }
    if let Some(rest) = term.strip_prefix('i') {
        if bare(rest) {
            return Ok((Gq::i(), rest));
        }
    }
    if bare(term) {
        return Ok((Gq::one(), term));
    }
    Err(Error::Invalid(format!(
        "cannot read generator term `{term}`"
    )))
}

/// One row of [`list`].
#[derive(Clone, Debug, PartialEq)]
pub struct ListRow {
    pub id: String,
    pub branch: String,
    pub assumptions: Vec<String>,
    pub generators: usize,
    pub solutions: usize,
    pub notes: Vec<String>,
}

pub fn list() -> Vec<ListRow> {
    entries()
        .iter()
        .flat_map(|e| {
            e.branches.iter().map(move |b| ListRow {
                id: e.id.clone(),
                branch: b.name.clone(),
                assumptions: b.assumptions.clone(),
                generators: b.generators.len(),
                solutions: b.solutions.len(),
                notes: b.notes.clone(),
            })
        })
        .collect()
}

pub fn total_generators() -> usize {
    list().iter().map(|r| r.generators).sum()
}

/// Outcome of checking one catalog item.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfTestItem {
    pub anchor: String,
    pub expected: Expected,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for SelfTestItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: {}",
            self.anchor,
            self.expected.name(),
            if self.passed { "pass" } else { "fail" },
            self.detail
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfTestReport {
    pub items: Vec<SelfTestItem>,
    pub audits: Vec<AuditReport>,
}

impl SelfTestReport {
    /// Every item expected to verify did.
    pub fn ok(&self) -> bool {
        self.items
            .iter()
            .all(|i| i.passed || i.expected == Expected::Audit)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ok": self.ok(),
            "generators": self.items.iter().map(|i| json!({
                "anchor": i.anchor,
                "expected": i.expected.name(),
                "passed": i.passed,
                "detail": i.detail,
            })).collect::<Vec<_>>(),
            "audits": self.audits.iter().map(AuditReport::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Symbolic verification of every generator and audit of every solution.
pub fn self_test() -> Result<SelfTestReport> {
    let mut items = Vec::new();
    let mut audits = Vec::new();
    for e in entries() {
        for b in &e.branches {
            let eq = e.equation(b);
            for g in &b.generators {
                let r = verify_symbolic(&eq, &g.generator)?;
                let detail = match (r.passed, r.failing_residue) {
                    (true, _) => format!("residues {:?}", r.residues_checked),
                    (false, Some(k)) => format!("nonzero residual on n ≡ {k}"),
                    (false, None) => "nonzero residual".into(),
                };
                items.push(SelfTestItem {
                    anchor: g.anchor.clone(),
                    expected: g.expected,
                    passed: r.passed,
                    detail,
                });
            }
            for s in &b.solutions {
                let reports = audit_paper_solution(&eq, &s.formula, &AuditOptions::default())?;
                let all = reports.iter().all(|r| r.first_fail_n.is_none());
                items.push(SelfTestItem {
                    anchor: format!("{}/{}/{}", e.id, b.name, s.formula.id),
                    expected: s.expected,
                    passed: all,
                    detail: reports
                        .iter()
                        .map(|r| format!("{}: {}", r.branch, r.verdict))
                        .collect::<Vec<_>>()
                        .join(", "),
                });
                audits.extend(reports);
            }
        }
    }
    Ok(SelfTestReport { items, audits })
}

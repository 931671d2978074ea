//! Resolving command-line references to equations, generators and values.

use std::collections::BTreeMap;
use std::path::Path;

use dsym_core::catalog::{self, BranchView};
use dsym_core::eqmodel::DifferenceEquation;
use dsym_core::num::Gq;
use dsym_core::symexpr::parse_gq;
use dsym_core::symmetry::SymmetryGenerator;
use dsym_core::{Error, Result};
use serde_json::Value;

/// An equation from the catalog or from a JSON file.
pub struct Resolved {
    pub equation: DifferenceEquation,
    pub values: BTreeMap<String, Gq>,
    pub view: Option<BranchView>,
}

impl Resolved {
    pub fn label(&self) -> String {
        match &self.view {
            Some(v) => format!("{}/{}", v.id, v.branch),
            None => self.equation.to_string(),
        }
    }

    /// The equation with every bound parameter substituted.
    pub fn bound_equation(&self) -> Result<DifferenceEquation> {
        if self.values.is_empty() {
            return Ok(self.equation.clone());
        }
        let values = self.equation.bind(&self.values)?;
        let params: Vec<&str> = self.equation.params().iter().map(String::as_str).collect();
        let mut assumptions: Vec<String> = self
            .equation
            .assumptions()
            .iter()
            .map(|a| a.text.clone())
            .collect();
        assumptions.extend(values.iter().map(|(k, v)| format!("{k}={v}")));
        let refs: Vec<&str> = assumptions.iter().map(String::as_str).collect();
        DifferenceEquation::new(
            self.equation.omega_text(),
            self.equation.order(),
            &params,
            &refs,
        )
    }

    pub fn generator(&self, spec: &str) -> Result<SymmetryGenerator> {
        if Path::new(spec).is_file() {
            return SymmetryGenerator::from_json(&read_json(spec)?);
        }
        match &self.view {
            Some(v) => v.generator(spec),
            None => Err(Error::Invalid(format!(
                "`{spec}` is not a file and the equation is not from the catalog"
            ))),
        }
    }
}

fn read_json(path: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{path}: {e}")))
}

pub fn resolve(eq: &str, branch: Option<&str>, params: &[String]) -> Result<Resolved> {
    let mut values = parse_params(params)?;
    let known = catalog::entries()
        .iter()
        .any(|e| e.id.eq_ignore_ascii_case(eq));
    if known {
        let branch = match branch {
            Some(b) => b.to_string(),
            None => catalog::default_branch(eq)?,
        };
        let view = catalog::get(eq, &branch)?;
        return Ok(Resolved {
            equation: view.equation.clone(),
            values,
            view: Some(view),
        });
    }
    if Path::new(eq).is_file() {
        let (equation, bound) = DifferenceEquation::from_json(&read_json(eq)?)?;
        for (k, v) in bound {
            values.entry(k).or_insert(v);
        }
        return Ok(Resolved {
            equation,
            values,
            view: None,
        });
    }
    Err(Error::UnknownEntry(eq.to_string()))
}

pub fn parse_params(items: &[String]) -> Result<BTreeMap<String, Gq>> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            Error::Invalid(format!("parameter `{item}` must look like name=value"))
        })?;
        out.insert(k.trim().to_string(), parse_gq(v.trim())?);
    }
    Ok(out)
}

/// `u0,u1,...` as Gaussian-rational literals.
pub fn parse_list(text: &str) -> Result<Vec<Gq>> {
    text.split(',').map(|s| parse_gq(s.trim())).collect()
}

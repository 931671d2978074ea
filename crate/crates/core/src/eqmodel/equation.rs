use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::num::Gq;
use crate::symexpr::{parse_expr, Poly, RatFun, Var};

#[derive(Clone, Debug, PartialEq)]
pub enum Relation {
    Equal,
    NotEqual,
}

/// A polynomial relation `P = 0` or `P ≠ 0` on the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Assumption {
    pub text: String,
    pub relation: Relation,
    pub poly: Poly,
}

impl Assumption {
    pub fn parse(text: &str) -> Result<Self> {
        let (lhs, rhs, relation) = if let Some((l, r)) = text.split_once("!=") {
            (l, r, Relation::NotEqual)
        } else if let Some((l, r)) = text.split_once('=') {
            (l, r, Relation::Equal)
        } else {
            return Err(Error::Invalid(format!(
                "assumption `{text}` needs `=` or `!=`"
            )));
        };
        let l = parse_expr(lhs.trim())?.to_rational()?;
        let r = parse_expr(rhs.trim())?.to_rational()?;
        let diff = l.sub_rf(&r);
        if diff.vars().iter().any(|v| !v.is_param()) {
            return Err(Error::Invalid(format!(
                "assumption `{text}` may only mention parameters"
            )));
        }
        Ok(Assumption {
            text: text.trim().to_string(),
            relation,
            poly: diff.num().clone(),
        })
    }
}

/// Order-`p` recurrence `u(n+p) = ω(n, u(n), …, u(n+p-1))`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceEquation {
    order: u32,
    omega_text: String,
    raw_omega: RatFun,
    omega: RatFun,
    params: Vec<String>,
    assumptions: Vec<Assumption>,
    substitutions: Vec<(Var, RatFun)>,
}

fn apply_subs(f: &RatFun, subs: &[(Var, RatFun)]) -> Result<RatFun> {
    let mut g = f.clone();
    for (v, r) in subs {
        g = g.substitute(*v, r)?;
    }
    Ok(g)
}

/// Solve the equalities one at a time for a variable with a constant
/// coefficient, highest in the variable order first.
fn solve_equalities(eqs: &[&Assumption]) -> Result<Vec<(Var, RatFun)>> {
    let mut subs: Vec<(Var, RatFun)> = Vec::new();
    for a in eqs {
        let p = apply_subs(&RatFun::from_poly(a.poly.clone()), &subs)?;
        let p = p.num().clone();
        if p.is_zero() {
            continue;
        }
        if p.is_constant() {
            return Err(Error::InconsistentAssumptions(format!(
                "`{}` contradicts the others",
                a.text
            )));
        }
        let mut chosen = None;
        for v in p.vars().into_iter().rev() {
            let cs = p.coeffs_in(v);
            if cs.len() == 2 && cs[1].is_constant() {
                chosen = Some((v, cs));
                break;
            }
        }
        let Some((v, cs)) = chosen else {
            return Err(Error::Unsupported(format!(
                "cannot solve assumption `{}` for a parameter",
                a.text
            )));
        };
        let c = cs[1].constant_value().expect("constant");
        let value = RatFun::from_poly(cs[0].scale(&(-c.inv().expect("nonzero"))));
        for (_, r) in subs.iter_mut() {
            *r = r.substitute(v, &value)?;
        }
        subs.push((v, value));
    }
    Ok(subs)
}

impl DifferenceEquation {
    pub fn new(
        omega_text: &str,
        order: u32,
        params: &[&str],
        assumptions: &[&str],
    ) -> Result<Self> {
        let expr = parse_expr(omega_text)?;
        let raw_omega = expr.to_rational()?;
        if order == 0 {
            return Err(Error::InvalidEquation("order must be positive".into()));
        }
        let declared: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        for v in raw_omega.vars() {
            if let Some(k) = v.u_index() {
                if k >= order {
                    return Err(Error::InvalidEquation(format!(
                        "omega may only use u(0)..u({}), found u({k})",
                        order - 1
                    )));
                }
            } else if v.is_param() && !declared.contains(&v.name()) {
                return Err(Error::UnknownSymbol(v.name()));
            }
        }
        let assumptions: Vec<Assumption> = assumptions
            .iter()
            .map(|a| Assumption::parse(a))
            .collect::<Result<_>>()?;
        for a in &assumptions {
            for v in a.poly.vars() {
                if !declared.contains(&v.name()) {
                    return Err(Error::UnknownSymbol(v.name()));
                }
            }
        }
        let eqs: Vec<&Assumption> = assumptions
            .iter()
            .filter(|a| a.relation == Relation::Equal)
            .collect();
        let substitutions = solve_equalities(&eqs)?;
        for a in assumptions
            .iter()
            .filter(|a| a.relation == Relation::NotEqual)
        {
            let p = apply_subs(&RatFun::from_poly(a.poly.clone()), &substitutions)?;
            if p.is_zero() {
                return Err(Error::InconsistentAssumptions(format!(
                    "`{}` is violated by the equalities",
                    a.text
                )));
            }
        }
        let omega = apply_subs(&raw_omega, &substitutions)?;
        Ok(DifferenceEquation {
            order,
            omega_text: omega_text.to_string(),
            raw_omega,
            omega,
            params: declared,
            assumptions,
            substitutions,
        })
    }

    /// Build directly from a rational function (used by transforms).
    pub fn from_rational(
        omega: RatFun,
        order: u32,
        params: Vec<String>,
        assumptions: Vec<Assumption>,
    ) -> Result<Self> {
        let texts: Vec<String> = assumptions.iter().map(|a| a.text.clone()).collect();
        let text = omega.to_string();
        let refs: Vec<&str> = params.iter().map(String::as_str).collect();
        let trefs: Vec<&str> = texts.iter().map(String::as_str).collect();
        DifferenceEquation::new(&text, order, &refs, &trefs)
    }

    pub fn from_json(v: &Value) -> Result<(Self, BTreeMap<String, Gq>)> {
        let omega = v["omega"]
            .as_str()
            .ok_or_else(|| Error::Invalid("`omega` must be a string".into()))?;
        let p = v["p"]
            .as_u64()
            .ok_or_else(|| Error::Invalid("`p` must be a positive integer".into()))?
            as u32;
        let mut names = Vec::new();
        let mut bound = BTreeMap::new();
        if let Some(obj) = v.get("params").and_then(Value::as_object) {
            for (k, val) in obj {
                names.push(k.clone());
                match val {
                    Value::Null => {}
                    Value::String(s) => {
                        bound.insert(k.clone(), crate::symexpr::parse_gq(s)?);
                    }
                    Value::Number(num) => {
                        bound.insert(k.clone(), crate::symexpr::parse_gq(&num.to_string())?);
                    }
                    _ => {
                        return Err(Error::Invalid(format!(
                            "parameter `{k}` must be null, a number or a string"
                        )))
                    }
                }
            }
        }
        let assumptions: Vec<String> = match v.get("assumptions") {
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Invalid("assumptions must be strings".into()))
                })
                .collect::<Result<_>>()?,
            None | Some(Value::Null) => Vec::new(),
            Some(_) => return Err(Error::Invalid("`assumptions` must be an array".into())),
        };
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let arefs: Vec<&str> = assumptions.iter().map(String::as_str).collect();
        Ok((DifferenceEquation::new(omega, p, &refs, &arefs)?, bound))
    }

    /// Inverse of [`DifferenceEquation::from_json`], with the given values
    /// filled in and other parameters left `null`.
    pub fn to_json(&self, values: &BTreeMap<String, Gq>) -> Value {
        let params: serde_json::Map<String, Value> = self
            .params
            .iter()
            .map(|p| {
                let v = values
                    .get(p)
                    .map_or(Value::Null, |g| Value::String(g.to_string()));
                (p.clone(), v)
            })
            .collect();
        serde_json::json!({
            "omega": self.omega_text,
            "p": self.order,
            "params": params,
            "assumptions": self.assumptions.iter().map(|a| a.text.clone()).collect::<Vec<_>>(),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn omega_text(&self) -> &str {
        &self.omega_text
    }

    /// Right-hand side with the assumption equalities substituted.
    pub fn omega(&self) -> &RatFun {
        &self.omega
    }

    pub fn raw_omega(&self) -> &RatFun {
        &self.raw_omega
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn assumptions(&self) -> &[Assumption] {
        &self.assumptions
    }

    pub fn substitutions(&self) -> &[(Var, RatFun)] {
        &self.substitutions
    }

    /// Parameters not eliminated by an assumption equality.
    pub fn free_params(&self) -> Vec<String> {
        self.params
            .iter()
            .filter(|p| !self.substitutions.iter().any(|(v, _)| v.name() == **p))
            .cloned()
            .collect()
    }

    pub fn nonzero_conditions(&self) -> Vec<Poly> {
        self.assumptions
            .iter()
            .filter(|a| a.relation == Relation::NotEqual)
            .filter_map(|a| {
                apply_subs(&RatFun::from_poly(a.poly.clone()), &self.substitutions).ok()
            })
            .map(|r| r.num().clone())
            .collect()
    }

    /// Apply the assumption equalities to any parameter-dependent function.
    pub fn reduce(&self, f: &RatFun) -> Result<RatFun> {
        apply_subs(f, &self.substitutions)
    }

    pub fn is_autonomous(&self) -> bool {
        !self.omega.has_var(Var::N)
    }

    /// ω is a linear form in the U's with U-free coefficients and no constant term.
    pub fn is_linear_homogeneous(&self) -> bool {
        if self.omega.den().vars().iter().any(|v| v.is_u()) {
            return false;
        }
        self.omega.num().terms().iter().all(|(m, _)| {
            let us: Vec<_> = m.iter().filter(|(v, _)| v.is_u()).collect();
            us.len() == 1 && us[0].1 == 1
        })
    }

    /// Check bound values against the equalities and complete them with the
    /// eliminated parameters.
    pub fn bind(&self, values: &BTreeMap<String, Gq>) -> Result<BTreeMap<String, Gq>> {
        let mut out = values.clone();
        for (v, r) in &self.substitutions {
            if let Some(m) = r
                .vars()
                .iter()
                .map(|x| x.name())
                .find(|n| !values.contains_key(n))
            {
                if values.contains_key(&v.name()) {
                    continue;
                }
                return Err(Error::UnboundParameter(m));
            }
            let val = r
                .eval::<Gq>(&|x| values[&x.name()].clone())
                .ok_or_else(|| {
                    Error::InconsistentAssumptions(format!("`{}` is undefined", v.name()))
                })?;
            match values.get(&v.name()) {
                Some(given) if *given != val => {
                    return Err(Error::InconsistentAssumptions(format!(
                        "{} = {given} contradicts the assumptions (expected {val})",
                        v.name()
                    )))
                }
                _ => {
                    out.insert(v.name(), val);
                }
            }
        }
        for a in self
            .assumptions
            .iter()
            .filter(|a| a.relation == Relation::NotEqual)
        {
            if a.poly.vars().iter().all(|x| out.contains_key(&x.name())) {
                let val = a.poly.eval::<Gq>(&|x| out[&x.name()].clone());
                if val.is_zero() {
                    return Err(Error::InconsistentAssumptions(format!(
                        "values violate `{}`",
                        a.text
                    )));
                }
            }
        }
        Ok(out)
    }

    /// Parameters occurring in ω that have no value.
    pub fn unbound(&self, values: &BTreeMap<String, Gq>) -> Option<String> {
        self.omega
            .vars()
            .into_iter()
            .filter(|v| v.is_param())
            .map(|v| v.name())
            .find(|n| !values.contains_key(n))
    }
}

impl fmt::Display for DifferenceEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u(n+{}) = {}", self.order, self.omega)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_rule() {
        assert!(matches!(
            DifferenceEquation::new("u(2)+u(0)", 2, &[], &[]),
            Err(Error::InvalidEquation(_))
        ));
    }

    #[test]
    fn chained_equalities() {
        let eq = DifferenceEquation::new(
            "(a*u(1)^2+b*u(1)+c)/(u(0)*(u(1)^2+d*u(1)+e))",
            2,
            &["a", "b", "c", "d", "e"],
            &["a*d=b", "a*e=c", "a!=0"],
        )
        .unwrap();
        let expect = crate::symexpr::parse_ratfun("a/u(0)").unwrap();
        assert_eq!(eq.omega(), &expect);
        assert_eq!(eq.free_params(), vec!["a", "d", "e"]);
    }

    #[test]
    fn inconsistent_assumptions() {
        assert!(matches!(
            DifferenceEquation::new("e*u(0)", 1, &["e"], &["e=0", "e!=0"]),
            Err(Error::InconsistentAssumptions(_))
        ));
    }

    #[test]
    fn linear_homogeneous_detection() {
        let dp1 = DifferenceEquation::new("-u(0)-u(1)", 2, &[], &[]).unwrap();
        assert!(dp1.is_linear_homogeneous());
        let dp3 = DifferenceEquation::new("a/u(0)", 2, &["a"], &[]).unwrap();
        assert!(!dp3.is_linear_homogeneous());
        let affine = DifferenceEquation::new("2-u(0)", 2, &[], &[]).unwrap();
        assert!(!affine.is_linear_homogeneous());
    }

    #[test]
    fn binding_completes_eliminated_params() {
        let eq = DifferenceEquation::new("b/u(0)", 2, &["a", "d", "b"], &["a*d=b"]).unwrap();
        let mut v = BTreeMap::new();
        v.insert("a".to_string(), Gq::from_int(2));
        v.insert("d".to_string(), Gq::from_int(3));
        assert_eq!(eq.bind(&v).unwrap()["b"], Gq::from_int(6));
        v.insert("b".to_string(), Gq::from_int(5));
        assert!(eq.bind(&v).is_err());
    }
}

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::num::{rank, CycRat};
use crate::seqform::{RootOfUnityScalar, SequenceClosedForm};
use crate::symexpr::{parse_ratfun, RatFun};

/// `X = ξ(n)∂_n + Q(n,u)∂_u` with `ξ = xi[0] + xi[1]·n` and
/// `Q = Σ_j q[j](n)·u^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryGenerator {
    pub xi: [RatFun; 2],
    pub q: Vec<SequenceClosedForm>,
    pub provenance: String,
}

impl SymmetryGenerator {
    pub fn new(xi: [RatFun; 2], mut q: Vec<SequenceClosedForm>, provenance: &str) -> Self {
        while q.last().is_some_and(SequenceClosedForm::is_zero) {
            q.pop();
        }
        SymmetryGenerator {
            xi,
            q,
            provenance: provenance.to_string(),
        }
    }

    pub fn from_q(q: Vec<SequenceClosedForm>, provenance: &str) -> Self {
        Self::new([RatFun::from_int(0), RatFun::from_int(0)], q, provenance)
    }

    /// `Q = s(n)·u^j`.
    pub fn monomial(s: SequenceClosedForm, j: usize, provenance: &str) -> Self {
        let mut q = vec![SequenceClosedForm::zero(); j + 1];
        q[j] = s;
        Self::from_q(q, provenance)
    }

    /// The translation `∂_n`.
    pub fn shift_n(provenance: &str) -> Self {
        Self::new(
            [RatFun::from_int(1), RatFun::from_int(0)],
            Vec::new(),
            provenance,
        )
    }

    pub fn degree(&self) -> usize {
        self.q.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.xi.iter().all(RatFun::is_zero) && self.q.iter().all(SequenceClosedForm::is_zero)
    }

    pub fn coeff(&self, j: usize) -> SequenceClosedForm {
        self.q.get(j).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let d = self.q.len().max(o.q.len());
        let q = (0..d).map(|j| self.coeff(j).add(&o.coeff(j))).collect();
        Self::new(
            [self.xi[0].add_rf(&o.xi[0]), self.xi[1].add_rf(&o.xi[1])],
            q,
            &self.provenance,
        )
    }

    /// Multiply by a constant. `ξ` must stay in the base field, so a
    /// cyclotomic factor is only allowed when `ξ = 0`.
    pub fn scale(&self, c: &CycRat) -> Result<Self> {
        let xi = if self.xi.iter().all(RatFun::is_zero) {
            self.xi.clone()
        } else {
            let b = c.base_value().ok_or_else(|| {
                Error::Invalid("ξ coefficients must stay free of roots of unity".into())
            })?;
            [self.xi[0].mul_rf(b), self.xi[1].mul_rf(b)]
        };
        Ok(Self::new(
            xi,
            self.q.iter().map(|s| s.scale(c)).collect(),
            &self.provenance,
        ))
    }

    pub fn map_coeffs(&self, f: &dyn Fn(&RatFun) -> RatFun) -> Self {
        Self::new(
            [f(&self.xi[0]), f(&self.xi[1])],
            self.q.iter().map(|s| s.map_coeffs(f)).collect(),
            &self.provenance,
        )
    }

    /// Least common multiple of the root orders of all coefficient sequences.
    pub fn root_period(&self) -> Option<u32> {
        let mut l = 1u32;
        for s in &self.q {
            let p = s.root_period()?;
            l = num_integer::lcm(l, p);
        }
        Some(l)
    }

    pub fn xi_text(&self) -> String {
        let n = RatFun::var(crate::symexpr::Var::N);
        self.xi[0].add_rf(&self.xi[1].mul_rf(&n)).to_string()
    }

    /// `Q` in real trigonometric form.
    pub fn q_text(&self) -> String {
        let mut parts = Vec::new();
        for (j, s) in self.q.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let body = s.real_form();
            let upow = match j {
                0 => String::new(),
                1 => "u".into(),
                j => format!("u^{j}"),
            };
            let wrapped = if body.contains(" + ") || body.contains(" - ") {
                format!("({body})")
            } else {
                body
            };
            parts.push(match (j, wrapped.as_str()) {
                (0, _) => wrapped,
                (_, "1") => upow,
                (_, "-1") => format!("-{upow}"),
                _ => format!("{wrapped}*{upow}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "xi": [self.xi[0].to_string(), self.xi[1].to_string()],
            "q": self.q.iter().map(SequenceClosedForm::to_json).collect::<Vec<_>>(),
            "provenance": self.provenance,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let xi = match v.get("xi") {
            Some(Value::Array(a)) if a.len() == 2 => {
                let p = |x: &Value| -> Result<RatFun> {
                    match x {
                        Value::String(s) => parse_ratfun(s),
                        Value::Number(n) => parse_ratfun(&n.to_string()),
                        _ => Err(Error::Invalid("ξ entries must be strings".into())),
                    }
                };
                [p(&a[0])?, p(&a[1])?]
            }
            None | Some(Value::Null) => [RatFun::from_int(0), RatFun::from_int(0)],
            _ => return Err(Error::Invalid("`xi` must be a two-element array".into())),
        };
        let q = match v.get("q") {
            Some(Value::Array(a)) => a
                .iter()
                .map(SequenceClosedForm::from_json)
                .collect::<Result<Vec<_>>>()?,
            None | Some(Value::Null) => Vec::new(),
            _ => return Err(Error::Invalid("`q` must be an array".into())),
        };
        let provenance = v.get("provenance").and_then(Value::as_str).unwrap_or("");
        Ok(Self::new(xi, q, provenance))
    }
}

impl fmt::Display for SymmetryGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xi = {}; Q = {}", self.xi_text(), self.q_text())
    }
}

/// Evaluation vector used for span comparisons: `q_j(n)` on a window of
/// integers followed by the two ξ coefficients.
fn eval_vector(g: &SymmetryGenerator, d: usize, window: usize) -> Vec<CycRat> {
    let mut v = Vec::with_capacity((d + 1) * window + 2);
    for j in 0..=d {
        let s = g.coeff(j);
        for n in 0..window as i64 {
            v.push(s.eval(n));
        }
    }
    v.push(CycRat::from_base(g.xi[0].clone()));
    v.push(CycRat::from_base(g.xi[1].clone()));
    v
}

fn span_window(gens: &[&SymmetryGenerator]) -> usize {
    let mut keys: Vec<(RootOfUnityScalar, u32)> = Vec::new();
    for g in gens {
        for s in &g.q {
            for t in s.terms() {
                let k = (t.lam.clone(), t.deg);
                if !keys.contains(&k) {
                    keys.push(k);
                }
            }
        }
    }
    keys.len() + gens.len() + 1
}

pub fn generator_rank(gens: &[SymmetryGenerator]) -> usize {
    let refs: Vec<&SymmetryGenerator> = gens.iter().collect();
    let d = gens
        .iter()
        .map(SymmetryGenerator::degree)
        .max()
        .unwrap_or(0);
    let w = span_window(&refs);
    let rows: Vec<Vec<CycRat>> = gens.iter().map(|g| eval_vector(g, d, w)).collect();
    rank(rows, (d + 1) * w + 2)
}

/// Whether two generator families span the same space.
pub fn generators_span_equal(a: &[SymmetryGenerator], b: &[SymmetryGenerator]) -> bool {
    let refs: Vec<&SymmetryGenerator> = a.iter().chain(b.iter()).collect();
    let d = refs.iter().map(|g| g.degree()).max().unwrap_or(0);
    let w = span_window(&refs);
    let rows = |s: &[SymmetryGenerator]| -> Vec<Vec<CycRat>> {
        s.iter().map(|g| eval_vector(g, d, w)).collect()
    };
    let ncols = (d + 1) * w + 2;
    let ra = rows(a);
    let rb = rows(b);
    let mut both = ra.clone();
    both.extend(rb.iter().cloned());
    let ka = rank(ra, ncols);
    ka == rank(rb, ncols) && rank(both, ncols) == ka
}

/// Whether every generator of `sub` lies in the span of `sup`.
pub fn generators_contained(sub: &[SymmetryGenerator], sup: &[SymmetryGenerator]) -> bool {
    let refs: Vec<&SymmetryGenerator> = sub.iter().chain(sup.iter()).collect();
    let d = refs.iter().map(|g| g.degree()).max().unwrap_or(0);
    let w = span_window(&refs);
    let ncols = (d + 1) * w + 2;
    let rs: Vec<Vec<CycRat>> = sup.iter().map(|g| eval_vector(g, d, w)).collect();
    let mut both = rs.clone();
    both.extend(sub.iter().map(|g| eval_vector(g, d, w)));
    rank(rs, ncols) == rank(both, ncols)
}

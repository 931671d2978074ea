use std::collections::BTreeMap;
use std::fmt;

use super::residual::ResidualForm;
use crate::eqmodel::DifferenceEquation;
use crate::symexpr::{Mono, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XiMode {
    /// `ξ = 0`.
    None,
    /// `ξ = ξ₀ + ξ₁·n`.
    Affine,
}

/// Opaque unknowns of the ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unknown {
    /// Coefficient of `uʲ` in `Q(n+shift, u)`.
    Alpha {
        j: usize,
        shift: u32,
    },
    Xi0,
    Xi1,
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unknown::Alpha { j, shift } => write!(f, "alpha[{j},{shift}]"),
            Unknown::Xi0 => write!(f, "xi0"),
            Unknown::Xi1 => write!(f, "xi1"),
        }
    }
}

/// Coefficient of one `U`-monomial in the cleared residual numerator.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterminingEquation {
    pub u_monomial: Mono,
    pub terms: BTreeMap<Unknown, Poly>,
}

impl fmt::Display for DeterminingEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(u, c)| {
                if c.is_one() {
                    u.to_string()
                } else if c.constant_value() == Some(crate::num::Gq::from_int(-1)) {
                    format!("-{u}")
                } else if c.len() == 1 {
                    format!("{c}*{u}")
                } else {
                    format!("({c})*{u}")
                }
            })
            .collect();
        write!(f, "{} = 0", parts.join(" + ").replace("+ -", "- "))
    }
}

#[derive(Clone, Debug)]
pub struct DeterminingSystem {
    pub equation: DifferenceEquation,
    pub degree: usize,
    pub xi_mode: XiMode,
    pub equations: Vec<DeterminingEquation>,
}

impl DeterminingSystem {
    pub fn unknowns(&self) -> Vec<Unknown> {
        let mut v: Vec<Unknown> = (0..=self.degree)
            .flat_map(|j| (0..=self.equation.order()).map(move |shift| Unknown::Alpha { j, shift }))
            .collect();
        if self.xi_mode == XiMode::Affine {
            v.push(Unknown::Xi0);
            v.push(Unknown::Xi1);
        }
        v
    }

    /// `α_{j,i}` is `α_{j,0}` evaluated at `n + i`.
    pub fn shift_relation(u: Unknown) -> Option<(usize, u32)> {
        match u {
            Unknown::Alpha { j, shift } => Some((j, shift)),
            _ => None,
        }
    }
}

type UnknownTerms = BTreeMap<Unknown, Vec<(Mono, crate::num::Gq)>>;

fn split_u(m: &Mono) -> (Mono, Mono) {
    let mut us = Mono::new();
    let mut rest = Mono::new();
    for &(v, e) in m {
        if v.is_u() {
            us.push((v, e));
        } else {
            rest.push((v, e));
        }
    }
    (us, rest)
}

/// Substitute the polynomial ansatz into the residual, clear denominators and
/// collect the numerator by monomials in the `U`'s.
pub fn extract_determining_system(
    eq: &DifferenceEquation,
    degree: usize,
    xi_mode: XiMode,
) -> DeterminingSystem {
    let form = ResidualForm::new(eq, degree);
    let mut cols: Vec<(Unknown, &Poly)> = Vec::new();
    for (j, row) in form.alpha.iter().enumerate() {
        for (s, p) in row.iter().enumerate() {
            cols.push((Unknown::Alpha { j, shift: s as u32 }, p));
        }
    }
    if xi_mode == XiMode::Affine {
        cols.push((Unknown::Xi0, &form.xi[0]));
        cols.push((Unknown::Xi1, &form.xi[1]));
    }
    let mut by_mono: BTreeMap<Vec<(u32, u32)>, (Mono, UnknownTerms)> = BTreeMap::new();
    for (u, p) in cols {
        for (m, c) in p.terms() {
            let (um, rest) = split_u(m);
            let key: Vec<(u32, u32)> = um.iter().map(|(v, e)| (v.0, *e)).collect();
            let entry = by_mono
                .entry(key)
                .or_insert_with(|| (um.clone(), BTreeMap::new()));
            entry.1.entry(u).or_default().push((rest, c.clone()));
        }
    }
    let equations = by_mono
        .into_values()
        .filter_map(|(u_monomial, terms)| {
            let terms: BTreeMap<Unknown, Poly> = terms
                .into_iter()
                .map(|(u, t)| (u, Poly::from_terms(t)))
                .filter(|(_, p)| !p.is_zero())
                .collect();
            (!terms.is_empty()).then_some(DeterminingEquation { u_monomial, terms })
        })
        .collect();
    DeterminingSystem {
        equation: eq.clone(),
        degree,
        xi_mode,
        equations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_shift_two_system() {
        let eq = DifferenceEquation::new("u(0)", 2, &[], &[]).unwrap();
        let ds = extract_determining_system(&eq, 1, XiMode::None);
        let texts: Vec<String> = ds.equations.iter().map(ToString::to_string).collect();
        assert_eq!(texts.len(), 2);
        assert!(
            texts.contains(&"-alpha[0,0] + alpha[0,2] = 0".to_string()),
            "{texts:?}"
        );
        assert!(
            texts.contains(&"-alpha[1,0] + alpha[1,2] = 0".to_string()),
            "{texts:?}"
        );
    }
}

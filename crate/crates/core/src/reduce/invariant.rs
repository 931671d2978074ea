use std::fmt;

use super::to_cycq;
use crate::eqmodel::DifferenceEquation;
use crate::error::{Error, Result};
use crate::num::{CycQ, CycRat, Field};
use crate::seqform::{cyc_text, SequenceClosedForm};
use crate::symmetry::{reduce_generator, SymmetryGenerator};

/// Joint invariant of `u(n)`, `u(n+1)` under a characteristic.
#[derive(Clone, Debug, PartialEq)]
pub enum Invariant {
    /// `v = u(n+1)/u(n)`, for `Q = α·u` with `α(n+1) = α(n)`.
    Ratio,
    /// `v = u(n+1) − ρ(n)·u(n)` with `ρ(n) = α(n+1)/α(n)`, for `Q = α(n)`.
    /// `values` holds `ρ` on one period.
    Translation {
        rho: SequenceClosedForm,
        values: Vec<CycRat>,
    },
}

impl Invariant {
    pub fn kind(&self) -> &'static str {
        match self {
            Invariant::Ratio => "ratio",
            Invariant::Translation { .. } => "translation",
        }
    }

    pub fn period(&self) -> u32 {
        match self {
            Invariant::Ratio => 1,
            Invariant::Translation { values, .. } => values.len() as u32,
        }
    }

    /// `ρ(n)` for the translation kind.
    pub fn rho_at(&self, n: i64) -> Option<&CycRat> {
        match self {
            Invariant::Ratio => None,
            Invariant::Translation { values, .. } => {
                Some(&values[n.rem_euclid(values.len() as i64) as usize])
            }
        }
    }

    /// `v(n)` from exact values of `u(n)` and `u(n+1)`.
    pub fn eval(&self, n: i64, u0: &CycQ, u1: &CycQ) -> Option<CycQ> {
        match self {
            Invariant::Ratio => u1.div(u0),
            Invariant::Translation { .. } => {
                let rho = to_cycq(self.rho_at(n)?)?;
                Some(Field::sub(u1, &Field::mul(&rho, u0)).simplified())
            }
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::Ratio => write!(f, "v(n) = u(n+1)/u(n)"),
            Invariant::Translation { values, .. } if values.len() == 1 => {
                write!(f, "v(n) = u(n+1) - ({})*u(n)", cyc_text(&values[0]))
            }
            Invariant::Translation { rho, .. } => {
                write!(f, "v(n) = u(n+1) - ({})*u(n)", rho.real_form())
            }
        }
    }
}

/// Invariant of the generator's flow on `(u(n), u(n+1))`, with the arbitrary
/// function of the invariant fixed to the identity.
pub fn invariant_from_generator(
    eq: &DifferenceEquation,
    g: &SymmetryGenerator,
) -> Result<Invariant> {
    if eq.order() != 2 {
        return Err(Error::UnsupportedFamily(
            "reduction is implemented for second-order equations".into(),
        ));
    }
    let g = reduce_generator(eq, g)?;
    if g.xi.iter().any(|x| !x.is_zero()) {
        return Err(Error::UnsupportedFamily("the generator moves n".into()));
    }
    match g.q.len() {
        0 => Err(Error::UnsupportedFamily(
            "the generator has no u-component".into(),
        )),
        1 => translation(&g.q[0]),
        2 if g.q[0].is_zero() => ratio(&g.q[1]),
        _ => Err(Error::UnsupportedFamily(format!(
            "characteristic of degree {} in u; only α(n)·u and α(n) are supported",
            g.degree()
        ))),
    }
}

fn ratio(alpha: &SequenceClosedForm) -> Result<Invariant> {
    let n0 = (0..16)
        .find(|&n| !Field::is_zero(&alpha.eval(n)))
        .ok_or_else(|| Error::UnsupportedFamily("α vanishes on 0..16".into()))?;
    let c = alpha.eval(n0 + 1).div(&alpha.eval(n0)).expect("nonzero");
    if alpha.shift(1) != alpha.scale(&c) {
        return Err(Error::UnsupportedFamily(
            "α(n+1)/α(n) is not constant".into(),
        ));
    }
    if !c.is_one() {
        return Err(Error::UnsupportedFamily(format!(
            "α(n+1)/α(n) = {}; u(n+1)/u(n) is invariant only when the ratio is 1",
            cyc_text(&c)
        )));
    }
    Ok(Invariant::Ratio)
}

fn translation(alpha: &SequenceClosedForm) -> Result<Invariant> {
    let p = alpha.period().ok_or_else(|| {
        Error::UnsupportedFamily("α(n) must be periodic for a translation invariant".into())
    })?;
    let vals: Vec<CycRat> = (0..=p as i64).map(|r| alpha.eval(r)).collect();
    if let Some(r) = vals.iter().position(Field::is_zero) {
        return Err(Error::UnsupportedFamily(format!(
            "α(n) vanishes at n ≡ {r} (mod {p})"
        )));
    }
    let mut values: Vec<CycRat> = (0..p as usize)
        .map(|r| vals[r + 1].div(&vals[r]).expect("nonzero").simplified())
        .collect();
    if let Some(q) = (1..values.len()).find(|&q| {
        values.len().is_multiple_of(q) && (q..values.len()).all(|i| values[i] == values[i - q])
    }) {
        values.truncate(q);
    }
    Ok(Invariant::Translation {
        rho: SequenceClosedForm::from_periodic(&values),
        values,
    })
}

//! Published explicit solutions, evaluated exactly in cyclotomic arithmetic.

use super::{CatalogSolution, Expected};
use crate::num::{CycQ, Field, Gq};
use crate::reduce::PaperFormula;

fn q(a: i64, b: i64) -> CycQ {
    CycQ::from_gq(&Gq::from_frac(a, b))
}

/// `e^{2πik/3}`.
fn z3(k: i64) -> CycQ {
    CycQ::root_of_unity(k, 3)
}

fn i_unit() -> CycQ {
    CycQ::from_gq(&Gq::i())
}

/// `⌈a/2⌉`.
fn ceil_half(a: i64) -> i64 {
    -(-a).div_euclid(2)
}

fn fixed_points(branch: usize, n: i64, u0: &CycQ, _u1: &CycQ) -> Option<CycQ> {
    let k = if branch == 0 { n } else { -n };
    Some(Field::mul(&z3(k), u0))
}

pub(super) fn dp1_fixed_points() -> CatalogSolution {
    let init = vec![
        (q(2, 1), Field::mul(&q(2, 1), &z3(1))),
        (q(2, 1), Field::mul(&q(2, 1), &z3(-1))),
    ];
    CatalogSolution {
        formula: PaperFormula::new(
            "fixed_points",
            "u(n) = e^{±2πin/3} u(0)",
            &["plus", "minus"],
            init,
            fixed_points,
        ),
        via: "X1".into(),
        expected: Expected::Verified,
        note: Some(
            "fixed points v = e^{±2πi/3} of the reduced map; initial data on the matching ray"
                .into(),
        ),
    }
}

/// `(−1)^{2(n−1)/3}(u1 − e^{2πi/3}u0)[1 + e^{−4πin/3}(1 − e^{4πin/3})/(−1 + (−1)^{2/3})]`
/// with `−1 = e^{iπ}` on branch 0 and `−1 = e^{−iπ}` on branch 1.
fn multivalued(branch: usize, n: i64, u0: &CycQ, u1: &CycQ) -> Option<CycQ> {
    let s = if branch == 0 { 1 } else { -1 };
    let factor = z3(s * (n - 1));
    let d = z3(s);
    let lead = Field::sub(u1, &Field::mul(&z3(1), u0));
    let frac = Field::mul(&z3(-2 * n), &Field::sub(&CycQ::one(), &z3(2 * n)))
        .div(&Field::sub(&d, &CycQ::one()))?;
    Some(Field::mul(
        &Field::mul(&factor, &lead),
        &Field::add(&CycQ::one(), &frac),
    ))
}

pub(super) fn dp1_multivalued() -> CatalogSolution {
    CatalogSolution {
        formula: PaperFormula::new(
            "multivalued",
            "u(n) = (-1)^{2(n-1)/3} (u1 - e^{2πi/3} u0) [1 + e^{-4πin/3}(1 - e^{4πin/3})/(-1 + (-1)^{2/3})]",
            &["principal", "negative"],
            vec![(q(2, 1), q(3, 1)), (q(2, 1), q(3, 1))],
            multivalued,
        ),
        via: "X2+iX3".into(),
        expected: Expected::Audit,
        note: Some("(-1)^x read as e^{iπx} (principal) and e^{-iπx} (negative)".into()),
    }
}

/// `(u1 − i u0)(3/2 − (−1)^n/2) i^{n−1}`.
fn dp2_form(_: usize, n: i64, u0: &CycQ, u1: &CycQ) -> Option<CycQ> {
    let i = i_unit();
    let lead = Field::sub(u1, &Field::mul(&i, u0));
    let bracket = if n.rem_euclid(2) == 0 {
        q(1, 1)
    } else {
        q(2, 1)
    };
    Some(Field::mul(&Field::mul(&lead, &bracket), &i.pow(n - 1)?))
}

pub(super) fn dp2_closed_form() -> CatalogSolution {
    CatalogSolution {
        formula: PaperFormula::new(
            "closed_form",
            "u(n) = (u1 - i u0) [3/2 - (-1)^n/2] i^{n-1}",
            &["principal"],
            vec![(q(2, 1), q(3, 1))],
            dp2_form,
        ),
        via: "X2+iX3".into(),
        expected: Expected::Audit,
        note: Some("solves the equation but gives -u0 - i*u1 at n = 0".into()),
    }
}

/// `(−1)^{n−1} 2^{n+c1−1} (2 − 2r)^{c2−1} r^{c1+1}` with `r = u0/u1`,
/// `c1 = ⌈(1−n)/2⌉`, `c2 = ⌈(2−n)/2⌉`.
fn ceiling(_: usize, n: i64, u0: &CycQ, u1: &CycQ) -> Option<CycQ> {
    let r = u0.div(u1)?;
    let c1 = ceil_half(1 - n);
    let c2 = ceil_half(2 - n);
    let sign = q(-1, 1).pow(n - 1)?;
    let two = q(2, 1).pow(n + c1 - 1)?;
    let mid = Field::sub(&q(2, 1), &Field::mul(&q(2, 1), &r)).pow(c2 - 1)?;
    let tail = r.pow(c1 + 1)?;
    Some(Field::mul(
        &Field::mul(&sign, &two),
        &Field::mul(&mid, &tail),
    ))
}

pub(super) fn dp4_ceiling() -> CatalogSolution {
    CatalogSolution {
        formula: PaperFormula::new(
            "ceiling",
            "u(n) = (-1)^{n-1} 2^{n+⌈(1-n)/2⌉-1} (2 - 2 u0/u1)^{⌈(2-n)/2⌉-1} (u0/u1)^{⌈(1-n)/2⌉+1}",
            &["principal"],
            vec![(q(2, 1), q(3, 1))],
            ceiling,
        ),
        via: "X1".into(),
        expected: Expected::Audit,
        note: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceiling_half_rounds_up() {
        let got: Vec<i64> = (-3..=3).map(ceil_half).collect();
        assert_eq!(got, vec![-1, -1, 0, 0, 1, 1, 2]);
    }
}

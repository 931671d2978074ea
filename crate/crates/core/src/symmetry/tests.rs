use super::*;
use crate::eqmodel::DifferenceEquation;
use crate::num::{CycRat, Field, Gq};
use crate::seqform::SequenceClosedForm;
use crate::symexpr::parse_ratfun;

fn solve(omega: &str, params: &[&str], assumptions: &[&str], d: usize, mode: XiMode) -> Solution {
    let eq = DifferenceEquation::new(omega, 2, params, assumptions).unwrap();
    let ds = extract_determining_system(&eq, d, mode);
    solve_determining_system(&ds).unwrap()
}

fn konst(c: i64) -> SequenceClosedForm {
    SequenceClosedForm::constant_gq(Gq::from_int(c))
}

#[test]
fn explore() {
    for (w, ps, asm, d, mode) in [
        ("-u(0)-u(1)", &[][..], &[][..], 1, XiMode::None),
        (
            "-u(0)-u(1)+(a*n+b)/u(1)",
            &["a", "b"][..],
            &["a!=0"][..],
            1,
            XiMode::Affine,
        ),
        ("-u(0)", &[][..], &[][..], 2, XiMode::None),
        ("a/u(0)", &["a"][..], &["a!=0"][..], 2, XiMode::None),
        (
            "u(0)*u(1)/(2*u(1)*u(0)-u(0)-u(1))",
            &[][..],
            &[][..],
            2,
            XiMode::None,
        ),
    ] {
        let t = std::time::Instant::now();
        let s = solve(w, ps, asm, d, mode);
        println!("== {w} ({:?})", t.elapsed());
        for g in &s.generators {
            println!("   {g}");
        }
        for c in &s.constraints {
            println!("   {c}");
        }
    }
}

#[test]
fn autonomous_shift() {
    let e = |w: &str| DifferenceEquation::new(w, 2, &["a", "b"], &[]).unwrap();
    assert!(autonomous_shift_symmetry(&e("-u(0)-u(1)")).is_some());
    assert!(autonomous_shift_symmetry(&e("-u(0)-u(1)+(a*n+b)/u(1)")).is_none());
}

#[test]
fn numeric_failure_has_witness() {
    let eq = DifferenceEquation::new("-u(0)", 2, &[], &[]).unwrap();
    let g = SymmetryGenerator::monomial(konst(1), 2, "");
    let rep = verify_numeric(&eq, &g, &NumericOptions::default()).unwrap();
    assert!(!rep.passed);
    assert!(rep.witness.is_some());
    let ok = SymmetryGenerator::monomial(SequenceClosedForm::cos(1, 4), 0, "");
    let rep = verify_numeric(&eq, &ok, &NumericOptions::default()).unwrap();
    assert!(rep.passed, "{rep:?}");
    let sym = verify_symbolic(&eq, &ok).unwrap();
    assert!(sym.passed);
    assert_eq!(sym.residues_checked, vec![0, 1, 2, 3]);
}

#[test]
fn residual_is_linear() {
    let eq = DifferenceEquation::new("u(0)*u(1)/(2*u(1)*u(0)-u(0)-u(1))", 2, &[], &[]).unwrap();
    let g1 = SymmetryGenerator::monomial(SequenceClosedForm::cos(1, 3), 2, "");
    let g2 = SymmetryGenerator::new(
        [parse_ratfun("1").unwrap(), parse_ratfun("0").unwrap()],
        vec![
            konst(1),
            SequenceClosedForm::sin(1, 4).scale(&CycRat::from_gq(&Gq::from_int(3))),
        ],
        "",
    );
    let sum = residual(&eq, &g1.add(&g2)).unwrap();
    let parts = residual(&eq, &g1)
        .unwrap()
        .add(&residual(&eq, &g2).unwrap());
    assert!(sum.same_as(&parts));
    assert!(!Field::is_zero(parts.at(1)));
}

use super::*;
use crate::eqmodel::{iterate, DifferenceEquation};
use crate::error::Error;
use crate::num::{mat_mul, CycQ, CycRat, Field, Gq};
use crate::seqform::{RootOfUnityScalar, SequenceClosedForm};
use crate::symexpr::{parse_ratfun, RatFun};
use crate::symmetry::SymmetryGenerator;

fn eq(w: &str) -> DifferenceEquation {
    DifferenceEquation::new(w, 2, &[], &[]).unwrap()
}

fn q(v: i64) -> CycQ {
    CycQ::from_gq(&Gq::from_int(v))
}

fn zeta(k: i64, m: u32) -> CycQ {
    CycQ::root_of_unity(k, m)
}

fn scaling() -> SymmetryGenerator {
    SymmetryGenerator::monomial(SequenceClosedForm::constant_gq(Gq::one()), 1, "")
}

/// `cos(nπ/2) + i·sin(nπ/2)`.
fn quarter_turn() -> SymmetryGenerator {
    let i = CycRat::from_gq(&Gq::i());
    let s = SequenceClosedForm::cos(1, 4).add(&SequenceClosedForm::sin(1, 4).scale(&i));
    SymmetryGenerator::monomial(s, 0, "")
}

fn mat(m: [[i64; 2]; 2]) -> [[Gq; 2]; 2] {
    m.map(|r| r.map(Gq::from_int))
}

#[test]
fn ratio_reduction_of_the_linear_three_cycle() {
    let e = eq("-u(0)-u(1)");
    let inv = invariant_from_generator(&e, &scaling()).unwrap();
    assert_eq!(inv, Invariant::Ratio);
    let m = reduced_map(&e, &inv).unwrap();
    assert_eq!(
        m.by_residue[0].base_value().unwrap(),
        &parse_ratfun("-1/v-1").unwrap()
    );
    assert_eq!(m.class, MapClass::Moebius(mat([[-1, -1], [1, 0]])));
    assert_eq!(m.text(), "v(n+1) = (-v(n) - 1)/v(n)");
    let sol = solve_first_order(&m, &Seed::Symbol("v0".into())).unwrap();
    let FirstOrderSolution::Moebius { eigenvalues, .. } = &sol else {
        panic!("{sol}")
    };
    assert_eq!(
        eigenvalues,
        &vec![RootOfUnityScalar::root(1, 3), RootOfUnityScalar::root(2, 3)]
    );
    assert_eq!(
        sol.with_seed(crate::reduce::from_cycq(&q(5))).period(),
        Some(3)
    );
}

#[test]
fn three_cycle_matrix_cubes_to_a_scalar() {
    let m: Vec<Vec<Gq>> = mat([[-1, -1], [1, 0]]).iter().map(|r| r.to_vec()).collect();
    let m3 = mat_mul(&mat_mul(&m, &m), &m);
    assert!(m3[0][1].is_zero() && m3[1][0].is_zero() && m3[0][0] == m3[1][1]);
}

#[test]
fn fixed_points_give_geometric_solutions() {
    let e = eq("-u(0)-u(1)");
    let m = reduced_map(&e, &Invariant::Ratio).unwrap();
    for k in [1, 2] {
        let w = zeta(k, 3);
        let sol = solve_first_order(&m, &Seed::Value(w.clone())).unwrap();
        assert_eq!(sol.period(), Some(1));
        let u = reconstruct(&e, &Invariant::Ratio, &sol, &q(2), &Field::mul(&q(2), &w)).unwrap();
        let expected = SequenceClosedForm::term(
            CycRat::from_gq(&Gq::from_int(2)),
            RootOfUnityScalar::root(k, 3),
            0,
        );
        assert_eq!(u.u, USolution::Sequence(expected));
        assert_eq!(u.checked, 31);
    }
}

#[test]
fn generic_ratio_reconstruction_is_periodic() {
    let e = eq("-u(0)-u(1)");
    let m = reduced_map(&e, &Invariant::Ratio).unwrap();
    let sol = solve_first_order(&m, &Seed::Symbol("v0".into())).unwrap();
    let u = reconstruct(&e, &Invariant::Ratio, &sol, &q(1), &q(3)).unwrap();
    assert!(matches!(u.u, USolution::Sequence(_)), "{u}");
    assert_eq!(u.at(0), Some(q(1)));
    assert_eq!(u.at(1), Some(q(3)));
    assert_eq!(u.at(2), Some(q(-4)));
}

#[test]
fn ratio_needs_nonzero_start() {
    let e = eq("-u(0)-u(1)");
    let m = reduced_map(&e, &Invariant::Ratio).unwrap();
    let sol = solve_first_order(&m, &Seed::Symbol("v0".into())).unwrap();
    assert!(matches!(
        reconstruct(&e, &Invariant::Ratio, &sol, &q(0), &q(3)),
        Err(Error::SingularInitialData(_))
    ));
}

#[test]
fn translation_reduction_of_the_quarter_turn() {
    let e = eq("-u(0)");
    let inv = invariant_from_generator(&e, &quarter_turn()).unwrap();
    let Invariant::Translation { values, .. } = &inv else {
        panic!()
    };
    assert_eq!(values, &vec![CycRat::from_gq(&Gq::i())]);
    let m = reduced_map(&e, &inv).unwrap();
    // v(n+1) = u(n+2) - i u(n+1) = -u(n) - i u(n+1) = -i v(n)
    let minus_i = SequenceClosedForm::constant_gq(-Gq::i());
    assert_eq!(
        m.class,
        MapClass::Linear {
            r: minus_i,
            s: SequenceClosedForm::zero()
        }
    );
    let sol = solve_first_order(&m, &Seed::Symbol("v0".into())).unwrap();
    assert_eq!(sol.text(), "v(n) = (1 * rou(3,4)^n)*v0");
}

/// Oracle: fit `A·iⁿ + B·(−i)ⁿ` to `u0`, `u1` by hand-solving the 2×2 system.
#[test]
fn translation_reconstruction_matches_fitted_basis() {
    let e = eq("-u(0)");
    let inv = invariant_from_generator(&e, &quarter_turn()).unwrap();
    let m = reduced_map(&e, &inv).unwrap();
    let sol = solve_first_order(&m, &Seed::Symbol("v0".into())).unwrap();
    let (u0, u1) = (Gq::from_frac(3, 2), Gq::from_parts((-1, 1), (2, 3)));
    let u = reconstruct(&e, &inv, &sol, &CycQ::from_gq(&u0), &CycQ::from_gq(&u1)).unwrap();
    let i = Gq::i();
    // A + B = u0, iA − iB = u1
    let a = &(&u0 - &(&i * &u1)) * &Gq::from_frac(1, 2);
    let b = &(&u0 + &(&i * &u1)) * &Gq::from_frac(1, 2);
    for n in 0..=30 {
        let want = &(&a * &i.pow(n).unwrap()) + &(&b * &(-&i).pow(n).unwrap());
        assert_eq!(u.at(n), Some(CycQ::from_gq(&want)), "n = {n}");
    }
}

#[test]
fn translation_needs_nonvanishing_alpha() {
    let e = eq("-u(0)");
    let g = SymmetryGenerator::monomial(SequenceClosedForm::cos(1, 4), 0, "");
    assert!(matches!(
        invariant_from_generator(&e, &g),
        Err(Error::UnsupportedFamily(_))
    ));
}

#[test]
fn quadratic_characteristics_are_unsupported() {
    let e = eq("u(0)*u(1)/(2*u(1)*u(0)-u(0)-u(1))");
    let g = SymmetryGenerator::from_q(
        vec![
            SequenceClosedForm::zero(),
            SequenceClosedForm::constant_gq(Gq::one()),
            SequenceClosedForm::constant_gq(Gq::from_frac(-2, 3)),
        ],
        "",
    );
    assert!(matches!(
        invariant_from_generator(&e, &g),
        Err(Error::UnsupportedFamily(_))
    ));
    let alt = SymmetryGenerator::monomial(SequenceClosedForm::cos(1, 2), 1, "");
    assert!(matches!(
        invariant_from_generator(&e, &alt),
        Err(Error::UnsupportedFamily(_))
    ));
    assert!(matches!(
        invariant_from_generator(&e, &SymmetryGenerator::shift_n("")),
        Err(Error::UnsupportedFamily(_))
    ));
}

#[test]
fn non_invariant_ratio_does_not_close() {
    let e = eq("-u(0)-u(1)+(n+1)/u(1)");
    assert!(matches!(
        reduced_map(&e, &Invariant::Ratio),
        Err(Error::NotClosed(_))
    ));
}

#[test]
fn reciprocal_three_cycle_reduction() {
    let e = eq("-u(0)*u(1)/(u(0)+u(1))");
    let m = reduced_map(&e, &Invariant::Ratio).unwrap();
    assert_eq!(
        m.by_residue[0].base_value().unwrap(),
        &parse_ratfun("-1/(1+v)").unwrap()
    );
    assert_eq!(m.class, MapClass::Moebius(mat([[0, -1], [1, 1]])));
    let sol = solve_first_order(&m, &Seed::Symbol("v0".into())).unwrap();
    let u = reconstruct(&e, &Invariant::Ratio, &sol, &q(1), &q(1)).unwrap();
    assert!(u.is_closed_form());
    assert_eq!(u.at(2), Some(CycQ::from_gq(&Gq::from_frac(-1, 2))));
}

fn moebius_map(m: [[i64; 2]; 2]) -> ReducedMap {
    let v = RatFun::var(v_var());
    let lin = |a: i64, b: i64| v.scale(&Gq::from_int(a)).add_rf(&RatFun::from_int(b));
    let expr = lin(m[0][0], m[0][1])
        .div_rf(&lin(m[1][0], m[1][1]))
        .unwrap();
    ReducedMap {
        period: 1,
        by_residue: vec![CycRat::from_base(expr)],
        class: MapClass::Moebius(mat(m)),
    }
}

#[test]
fn moebius_closed_forms_for_distinct_double_and_foreign_roots() {
    for m in [[[1, 1], [-1, 1]], [[1, 1], [-1, 3]], [[0, 1], [1, 1]]] {
        let sol = solve_first_order(&moebius_map(m), &Seed::Value(q(2))).unwrap();
        let mut x = q(2);
        for n in 0..12 {
            match sol.at_exact(n) {
                Some(v) => assert_eq!(v, x, "{m:?} n = {n}"),
                None => break,
            }
            let Some(next) = moebius_map(m).apply(n, &x) else {
                break;
            };
            x = next;
        }
        // golden-ratio eigenvalues are not scaled roots of unity
        assert_eq!(sol.is_closed_form(), m != [[0, 1], [1, 1]], "{m:?}");
    }
}

#[test]
fn linear_map_with_offset() {
    let v = RatFun::var(v_var());
    for (r, s) in [(Gq::i(), Gq::from_int(3)), (Gq::one(), Gq::from_frac(1, 2))] {
        let expr = v.scale(&r).add_rf(&RatFun::constant(s.clone()));
        let map = ReducedMap {
            period: 1,
            by_residue: vec![CycRat::from_base(expr)],
            class: MapClass::Linear {
                r: SequenceClosedForm::constant_gq(r),
                s: SequenceClosedForm::constant_gq(s),
            },
        };
        let sol = solve_first_order(&map, &Seed::Value(q(1))).unwrap();
        let mut x = q(1);
        for n in 0..10 {
            assert_eq!(sol.at_exact(n).unwrap(), x);
            x = map.apply(n, &x).unwrap();
        }
    }
}

/// Invariant values along an exact trajectory obey the reduced map.
#[test]
fn reduced_map_holds_along_trajectories() {
    let cases: Vec<(&str, SymmetryGenerator)> = vec![
        ("-u(0)-u(1)", scaling()),
        ("-u(0)", quarter_turn()),
        ("-u(0)*u(1)/(u(0)+u(1))", scaling()),
    ];
    for (w, g) in cases {
        let e = eq(w);
        let inv = invariant_from_generator(&e, &g).unwrap();
        let m = reduced_map(&e, &inv).unwrap();
        let (us, sing) = iterate::<CycQ>(e.omega(), 2, &[q(2), q(5)], 0, 31, &|_| unreachable!());
        assert!(sing.is_none());
        let vs: Vec<CycQ> = (0..31)
            .map(|n| inv.eval(n as i64, &us[n], &us[n + 1]).unwrap())
            .collect();
        for n in 0..30 {
            assert_eq!(m.apply(n as i64, &vs[n]).unwrap(), vs[n + 1], "{w} n = {n}");
        }
    }
}

fn fixed_point(branch: usize, n: i64, u0: &CycQ, _u1: &CycQ) -> Option<CycQ> {
    let k = if branch == 0 { n } else { -n };
    Some(Field::mul(&zeta(k, 3), u0))
}

fn wrong_start(_: usize, n: i64, u0: &CycQ, u1: &CycQ) -> Option<CycQ> {
    // (u1 − i u0)·[3/2 − (−1)ⁿ/2]·i^(n−1)
    let i = CycQ::from_gq(&Gq::i());
    let c = Field::sub(u1, &Field::mul(&i, u0));
    let sign = if n % 2 == 0 { q(1) } else { q(2) };
    Some(Field::mul(&Field::mul(&c, &sign), &i.pow(n - 1)?))
}

#[test]
fn audit_reports_match_and_mismatch() {
    let e = eq("-u(0)-u(1)");
    let init = vec![
        (q(2), Field::mul(&q(2), &zeta(1, 3))),
        (q(2), Field::mul(&q(2), &zeta(-1, 3))),
    ];
    let f = PaperFormula::new(
        "fixed",
        "u0 e^{±2πin/3}",
        &["plus", "minus"],
        init,
        fixed_point,
    );
    let reports = audit_paper_solution(&e, &f, &AuditOptions::default()).unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports
        .iter()
        .all(|r| r.verdict == AuditVerdict::Match && r.max_abs_err == 0.0));

    let e = eq("-u(0)");
    let g = PaperFormula::new("wrong", "", &["principal"], vec![(q(2), q(3))], wrong_start);
    let r = &audit_paper_solution(&e, &g, &AuditOptions::default()).unwrap()[0];
    assert_eq!(r.verdict, AuditVerdict::Mismatch);
    assert_eq!(r.first_fail_n, Some(0));
    assert!(r.satisfies_equation);
}

#[test]
fn conjugate_audits_agree() {
    let e = eq("-u(0)");
    let g = PaperFormula::new("wrong", "", &["principal"], vec![(q(2), q(3))], wrong_start);
    let a = audit_paper_solution(&e, &g, &AuditOptions::default()).unwrap();
    let b = audit_paper_solution(&e, &g.conjugate(), &AuditOptions::default()).unwrap();
    assert_eq!(a[0].verdict, b[0].verdict);
    assert_eq!(a[0].first_fail_n, b[0].first_fail_n);
}

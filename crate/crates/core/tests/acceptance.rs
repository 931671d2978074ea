//! Acceptance suite. Prints one PASS/FAIL line per check and a verdict per
//! criterion.
//!
//! Checks listed in `KNOWN_RED` are reported as FAIL but do not change the
//! exit status; such a check passing is reported as STALE and does. Every
//! other failure exits nonzero.

use std::collections::BTreeMap;
use std::path::PathBuf;

use dsym_core::catalog::{self, BranchView};
use dsym_core::eqmodel::{
    simulate, transform_equation, DifferenceEquation, SimMode, SimOptions, Transform,
};
use dsym_core::num::{CycQ, CycRat, Field, Gq};
use dsym_core::reduce::{
    audit_paper_solution, invariant_from_generator, reconstruct, reduced_map, solve_first_order,
    AuditOptions, FirstOrderSolution, Seed, USolution,
};
use dsym_core::seqform::{
    seq_equal_span_window, solve_recurrence, RecurrenceConstraint, RootOfUnityScalar,
    SequenceClosedForm as Seq,
};
use dsym_core::symexpr::{parse_ratfun, RatFun, Var};
use dsym_core::symmetry::{
    extract_determining_system, generators_span_equal, solve_determining_system, verify_numeric,
    verify_symbolic, NumericOptions, SymmetryGenerator, XiMode,
};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// Checks expected to fail, by name. Each has an entry in the decisions log.
const KNOWN_RED: &[&str] = &[
    "1/symbolic/dP4/general/X1",
    "1/symbolic/dP4/general/X2",
    "1/numeric/dP4/general/X1",
    "1/numeric/dP4/general/X2",
    "4/dP2/map",
];

#[derive(Default)]
struct Harness {
    lines: Vec<(String, bool, String)>,
}

impl Harness {
    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.lines.push((name.into(), ok, detail.into()));
    }

    fn report(&self) -> bool {
        let mut clean = true;
        let mut by_criterion: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
        for (name, ok, detail) in &self.lines {
            let known = KNOWN_RED.contains(&name.as_str());
            let tag = match (ok, known) {
                (true, false) => "PASS",
                (true, true) => "STALE",
                (false, true) => "FAIL (known)",
                (false, false) => "FAIL",
            };
            clean &= ok != &known;
            let c = name.split('/').next().unwrap_or("?").to_string();
            let e = by_criterion.entry(c).or_default();
            e.0 += 1;
            if !ok {
                e.1 += 1;
                if known {
                    e.2 += 1;
                }
            }
            if detail.is_empty() {
                println!("{tag:>12}  {name}");
            } else {
                println!("{tag:>12}  {name}: {detail}");
            }
        }
        println!();
        for (c, (total, failed, known)) in &by_criterion {
            if *failed == 0 {
                println!("criterion {c}: PASS ({total} checks)");
            } else {
                println!("criterion {c}: FAIL ({failed} of {total} checks fail, {known} known)");
            }
        }
        clean
    }
}

fn view(id: &str, branch: &str) -> BranchView {
    catalog::get(id, branch).expect("catalog branch")
}

fn branches() -> Vec<BranchView> {
    catalog::list()
        .iter()
        .map(|r| view(&r.id, &r.branch))
        .collect()
}

/// Generators with `ξ = 0`.
fn point_q(gens: &[SymmetryGenerator]) -> Vec<SymmetryGenerator> {
    gens.iter()
        .filter(|g| g.xi_text() == "0")
        .cloned()
        .collect()
}

fn criterion_1(h: &mut Harness) {
    for v in branches() {
        for g in &v.generators {
            let rep = verify_symbolic(&v.equation, &g.generator).expect("symbolic verification");
            let detail = match rep.failing_residue {
                Some(r) => format!("nonzero on n ≡ {r}"),
                None => format!("residues {:?}", rep.residues_checked),
            };
            h.check(format!("1/symbolic/{}", g.anchor), rep.passed, detail);
            let rep = verify_numeric(&v.equation, &g.generator, &NumericOptions::default())
                .expect("numeric verification");
            let detail = format!(
                "{} samples, max relative residual {:.2e}",
                rep.samples_used,
                rep.residual_norm.unwrap_or(f64::NAN)
            );
            h.check(
                format!("1/numeric/{}", g.anchor),
                rep.passed && rep.samples_used == 100,
                detail,
            );
        }
    }
    let v = view("dP1", "a_nonzero");
    let g = &v.generators[0].generator;
    h.check(
        "1/dP1/a_nonzero/shape",
        v.generators.len() == 1 && g.xi_text() == "2*n*a + 2*b" && g.q_text() == "a*u",
        format!("xi = {}, Q = {}", g.xi_text(), g.q_text()),
    );
    let counts: Vec<usize> = branches().iter().map(|v| v.generators.len()).collect();
    h.check(
        "1/generator_counts",
        counts == [1, 4, 3, 7, 3, 3, 4, 4],
        format!("{counts:?}"),
    );
}

fn criterion_2(h: &mut Harness) {
    let v = view("dP1", "a_nonzero");
    let sys = extract_determining_system(&v.equation, 1, XiMode::Affine);
    let sol = solve_determining_system(&sys).expect("solve dP1");
    let want = &v.generators[0].generator;
    h.check(
        "2a/dP1/a_nonzero",
        sol.generators.len() == 1
            && generators_span_equal(&sol.generators, std::slice::from_ref(want)),
        sol.generators
            .iter()
            .map(|g| format!("({})∂n + ({})∂u", g.xi_text(), g.q_text()))
            .collect::<Vec<_>>()
            .join("; ")
            .to_string(),
    );

    let v = view("dP3", "reciprocal_case");
    let sys = extract_determining_system(&v.equation, 2, XiMode::None);
    let sol = solve_determining_system(&sys).expect("solve dP3 reciprocal");
    let paper: Vec<SymmetryGenerator> = v.generators.iter().map(|g| g.generator.clone()).collect();
    h.check(
        "2b/dP3/reciprocal_case/span",
        generators_span_equal(&sol.generators, &paper),
        format!("{} solved, {} cataloged", sol.generators.len(), paper.len()),
    );
    let q_solved: Vec<Seq> = point_q(&sol.generators)
        .iter()
        .flat_map(|g| (0..=2).map(move |j| g.coeff(j)))
        .collect();
    let q_paper: Vec<Seq> = point_q(&paper)
        .iter()
        .flat_map(|g| (0..=2).map(move |j| g.coeff(j)))
        .collect();
    h.check(
        "2b/dP3/reciprocal_case/coefficient_span",
        dsym_core::seqform::seq_equal_span(&q_solved, &q_paper),
        "",
    );

    let v = view("dP3", "bcase");
    let sys = extract_determining_system(&v.equation, 1, XiMode::None);
    let sol = solve_determining_system(&sys).expect("solve dP3 bcase");
    let cs: Vec<String> = sol.constraints.iter().map(|c| c.to_string()).collect();
    h.check(
        "2c/dP3/bcase/constraint",
        cs.iter()
            .any(|c| c == "alpha_1: alpha_1(n+2) + alpha_1(n+1) + alpha_1(n) = 0"),
        cs.join("; "),
    );
    h.check(
        "2c/dP3/bcase/beta_zero",
        cs.iter().any(|c| c == "alpha_0 = 0"),
        "",
    );
    let paper: Vec<SymmetryGenerator> = v.generators[..2]
        .iter()
        .map(|g| g.generator.clone())
        .collect();
    h.check(
        "2c/dP3/bcase/span",
        generators_span_equal(&point_q(&sol.generators), &paper),
        format!("{} point generators", point_q(&sol.generators).len()),
    );
}

fn gq(v: i64) -> Gq {
    Gq::from_int(v)
}

fn criterion_3(h: &mut Harness) {
    let cases = [
        (
            "3/alpha(n+2)=-alpha(n)",
            vec![gq(1), gq(0), gq(1)],
            vec![Seq::cos(1, 4), Seq::sin(1, 4)],
        ),
        (
            "3/alpha(n+2)+alpha(n+1)+alpha(n)=0",
            vec![gq(1), gq(1), gq(1)],
            {
                let alt = Seq::geometric(RootOfUnityScalar::root(1, 2));
                vec![alt.mul(&Seq::cos(1, 6)), alt.mul(&Seq::sin(1, 6))]
            },
        ),
    ];
    for (name, coeffs, want) in cases {
        let basis = solve_recurrence(&RecurrenceConstraint::new(coeffs).unwrap()).unwrap();
        h.check(
            name,
            basis.len() == 2 && seq_equal_span_window(&basis, &want, 8),
            format!("{} basis elements", basis.len()),
        );
    }
}

fn cq(v: i64) -> CycQ {
    CycQ::from_base(gq(v))
}

fn criterion_4(h: &mut Harness) {
    let v = view("dP1", "zero");
    let e = v.equation.clone();
    let g = v.generator("X1").unwrap();
    let inv = invariant_from_generator(&e, &g).unwrap();
    let map = reduced_map(&e, &inv).unwrap();
    let want = parse_ratfun("-1/v-1").unwrap();
    h.check(
        "4/dP1/map",
        map.by_residue.len() == 1 && map.by_residue[0].base_value() == Some(&want),
        map.text(),
    );
    let sol = solve_first_order(&map, &Seed::Symbol("v0".into())).unwrap();
    let eig_ok = matches!(&sol, FirstOrderSolution::Moebius { eigenvalues, .. }
        if eigenvalues == &vec![RootOfUnityScalar::root(1, 3), RootOfUnityScalar::root(2, 3)]);
    h.check("4/dP1/eigenvalues", eig_ok, "");
    let periods: Vec<Option<u32>> = [2, 3, -5]
        .iter()
        .map(|&x| {
            sol.with_seed(CycRat::from_base(RatFun::from_int(x)))
                .period()
        })
        .collect();
    h.check(
        "4/dP1/orbit_period",
        periods.iter().all(|p| *p == Some(3)),
        format!("{periods:?}"),
    );
    for k in [1, -1] {
        let w = CycQ::root_of_unity(k, 3);
        let fixed = solve_first_order(&map, &Seed::Value(w.clone())).unwrap();
        let u0 = cq(2);
        let u1 = Field::mul(&u0, &w);
        let u = reconstruct(&e, &inv, &fixed, &u0, &u1).unwrap();
        let exact =
            (0..=30).all(|n| u.at(n) == Some(Field::mul(&u0, &CycQ::root_of_unity(k * n, 3))));
        let satisfies = (0..=28).all(|n| {
            let (a, b, c) = (u.at(n).unwrap(), u.at(n + 1).unwrap(), u.at(n + 2).unwrap());
            Field::add(&Field::add(&a, &b), &c).is_zero()
        });
        h.check(
            format!("4/dP1/fixed_point_{}", if k > 0 { "plus" } else { "minus" }),
            exact && satisfies && u.checked >= 31,
            u.text(),
        );
    }

    let v = view("dP2", "zero");
    let e = v.equation.clone();
    let g = v.generator("X2+iX3").unwrap();
    let inv = invariant_from_generator(&e, &g).unwrap();
    let map = reduced_map(&e, &inv).unwrap();
    h.check("4/dP2/map", map.text() == "v(n+1) = i*v(n)", map.text());
    let sol = solve_first_order(&map, &Seed::Symbol("v0".into())).unwrap();
    let (u0, u1) = (gq(2), gq(3));
    let u = reconstruct(
        &e,
        &inv,
        &sol,
        &CycQ::from_base(u0.clone()),
        &CycQ::from_base(u1.clone()),
    )
    .unwrap();
    let traj = simulate(
        &e,
        &BTreeMap::new(),
        &[u0, u1],
        0,
        29,
        &SimOptions::default(),
    )
    .unwrap();
    let sim = traj.exact_values();
    let matches = sim.len() == 31
        && sim
            .iter()
            .enumerate()
            .all(|(n, x)| match (x, u.at(n as i64)) {
                (Some(x), Some(y)) => CycQ::from_base(x.clone()) == y,
                _ => false,
            });
    h.check(
        "4/dP2/reconstruction",
        matches && matches!(u.u, USolution::Sequence(_)),
        u.real_text(),
    );
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn criterion_5(h: &mut Harness) {
    for (id, branch, formula) in [
        ("dP4", "zero", "ceiling"),
        ("dP1", "zero", "multivalued"),
        ("dP2", "zero", "closed_form"),
    ] {
        let v = view(id, branch);
        let s = v.solution(formula).unwrap();
        let reports =
            audit_paper_solution(&v.equation, &s.formula, &AuditOptions::default()).unwrap();
        let got = Value::Array(reports.iter().map(|r| r.to_json()).collect());
        let text = serde_json::to_string_pretty(&got).unwrap() + "\n";
        let path = fixture(&format!("audit_{id}_{branch}_{formula}.json"));
        let pinned = std::fs::read_to_string(&path).unwrap_or_default();
        let verdicts: Vec<String> = reports
            .iter()
            .map(|r| match r.first_fail_n {
                Some(n) => format!("{}: {} at n = {n}", r.branch, r.verdict.name()),
                None => format!("{}: {}", r.branch, r.verdict.name()),
            })
            .collect();
        h.check(
            format!("5/{id}/{branch}/{formula}"),
            !pinned.is_empty() && text == pinned,
            verdicts.join(", "),
        );
        let again =
            audit_paper_solution(&v.equation, &s.formula, &AuditOptions::default()).unwrap();
        h.check(
            format!("5/{id}/{branch}/{formula}/deterministic"),
            again == reports,
            "",
        );
    }
}

fn criterion_6(h: &mut Harness) {
    let dp1 = view("dP1", "zero").equation;
    let r = transform_equation(&view("dP4", "zero").equation, &Transform::Reciprocal).unwrap();
    h.check(
        "6/reciprocal(dP4 zero) = dP1(0,0,0)",
        r.equation.omega() == dp1.omega(),
        format!("{} vs {}", r.equation.omega(), dp1.omega()),
    );
    let dp1c = DifferenceEquation::new(
        &catalog::entries()[0].omega,
        2,
        &["a", "b", "c"],
        &["a=0", "b=0", "c=2"],
    )
    .unwrap();
    let r = transform_equation(&view("dP5", "default").equation, &Transform::Reciprocal).unwrap();
    h.check(
        "6/reciprocal(dP5) = dP1(0,0,2)",
        r.equation.omega() == dp1c.omega(),
        format!("{} vs {}", r.equation.omega(), dp1c.omega()),
    );
    let back = transform_equation(&r.equation, &Transform::Reciprocal).unwrap();
    h.check(
        "6/reciprocal is an involution",
        back.equation.omega() == view("dP5", "default").equation.omega(),
        "",
    );
    let e = DifferenceEquation::new("a/u(0)", 2, &["a"], &["a!=0"]).unwrap();
    let t = transform_equation(&e, &Transform::Log).unwrap();
    let target = parse_ratfun("-u(0)").unwrap();
    h.check(
        "6/log(a/u) ~ -u",
        t.equation.omega() == &target && t.log_offset.is_some(),
        format!(
            "{} with w = ln u - {}",
            t.equation.omega(),
            t.log_offset.as_ref().map(|o| o.text()).unwrap_or_default()
        ),
    );
}

/// `|f − e| / |e|`, or `|f − e|` when `e = 0`.
fn rel_err(f: Complex64, e: Complex64) -> f64 {
    let d = (f - e).norm();
    if e.norm() == 0.0 {
        d
    } else {
        d / e.norm()
    }
}

fn criterion_7(h: &mut Harness) {
    for v in branches() {
        let t = std::time::Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst = 0.0f64;
        let mut runs = 0;
        let mut attempts = 0;
        while runs < 20 && attempts < 200 {
            attempts += 1;
            let params =
                dsym_core::symmetry::bind_random_params(&v.equation, &BTreeMap::new(), &mut rng)
                    .unwrap();
            let init: Vec<Gq> = (0..2)
                .map(|_| {
                    Gq::from_parts(
                        (rng.gen_range(-9..=9), rng.gen_range(1..=4)),
                        (rng.gen_range(-9..=9), rng.gen_range(1..=4)),
                    )
                })
                .collect();
            let exact =
                simulate(&v.equation, &params, &init, 0, 30, &SimOptions::default()).unwrap();
            if exact.first_singular().is_some() {
                continue;
            }
            let float = simulate(
                &v.equation,
                &params,
                &init,
                0,
                30,
                &SimOptions {
                    mode: SimMode::Float,
                    ..SimOptions::default()
                },
            )
            .unwrap();
            for (x, y) in float.values.iter().zip(&exact.values) {
                let (x, y) = (x.to_complex(), y.to_complex());
                worst = worst.max(match (x, y) {
                    (Some(x), Some(y)) => rel_err(x, y),
                    _ => f64::INFINITY,
                });
            }
            runs += 1;
        }
        eprintln!("  7/{}/{}: {:.1?}", v.id, v.branch, t.elapsed());
        h.check(
            format!("7/{}/{}", v.id, v.branch),
            runs == 20 && worst <= 1e-12,
            format!("{runs} runs, worst relative error {worst:.2e}"),
        );
    }
}

fn small_gq() -> impl Strategy<Value = Gq> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4)
        .prop_map(|(a, b, c, d)| Gq::from_parts((a, b), (c, d)))
}

fn var() -> impl Strategy<Value = Var> {
    prop_oneof![
        Just(Var::N),
        Just(Var::u(0)),
        Just(Var::u(1)),
        Just(Var::param("a"))
    ]
}

fn poly_text() -> impl Strategy<Value = String> {
    prop::collection::vec((small_gq(), var(), 0u32..=3, var(), 0u32..=2), 1..=4).prop_map(|terms| {
        terms
            .iter()
            .map(|(c, x, i, y, j)| format!("({c})*{}^{i}*{}^{j}", x.name(), y.name()))
            .collect::<Vec<_>>()
            .join("+")
    })
}

fn ratfun() -> impl Strategy<Value = RatFun> {
    (poly_text(), poly_text()).prop_filter_map("zero denominator", |(p, q)| {
        parse_ratfun(&format!("({p})/({q})")).ok()
    })
}

fn point() -> impl Strategy<Value = [f64; 6]> {
    [
        -2.0..2.0f64,
        -2.0..2.0f64,
        -2.0..2.0f64,
        -2.0..2.0f64,
        -2.0..2.0f64,
        -2.0..2.0f64,
    ]
}

fn at(p: &[f64; 6], v: Var) -> Complex64 {
    let idx = if v == Var::N {
        0
    } else if v == Var::u(0) {
        1
    } else if v == Var::u(1) {
        2
    } else if v == Var::u(2) {
        3
    } else if v == Var::u(3) {
        4
    } else {
        5
    };
    Complex64::new(p[idx], 0.3 * p[(idx + 1) % 6])
}

const PROP_SEED: [u8; 32] = *b"dsym acceptance property seed 01";

fn run_property<S: Strategy>(
    h: &mut Harness,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) {
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        rng_algorithm: RngAlgorithm::ChaCha,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &PROP_SEED));
    let t = std::time::Instant::now();
    let out = runner.run(&strategy, test);
    eprintln!("  8/{name}: {:.1?}", t.elapsed());
    h.check(
        format!("8/{name}"),
        out.is_ok(),
        match out {
            Ok(()) => "1000 cases".to_string(),
            Err(e) => e.to_string(),
        },
    );
}

fn criterion_8(h: &mut Harness) {
    run_property(
        h,
        "gaussian_field_axioms",
        (small_gq(), small_gq(), small_gq()),
        |(a, b, c)| {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if let Some(inv) = a.inv() {
                prop_assert!((&a * &inv).is_one());
            }
            Ok(())
        },
    );
    run_property(h, "canonical_form", (ratfun(), ratfun()), |(a, b)| {
        let reparsed = parse_ratfun(&a.to_string()).unwrap();
        prop_assert_eq!(&reparsed, &a);
        prop_assert_eq!(&a.add_rf(&b).sub_rf(&b), &a);
        if let Some(q) = a.mul_rf(&b).div_rf(&b) {
            prop_assert_eq!(&q, &a);
        }
        let swapped = parse_ratfun(&format!("({b})+({a})")).unwrap();
        prop_assert_eq!(&swapped, &a.add_rf(&b));
        Ok(())
    });
    run_property(
        h,
        "shift_homomorphism",
        (ratfun(), ratfun(), 1u32..=2),
        |(a, b, k)| {
            prop_assert_eq!(a.add_rf(&b).shift(k), a.shift(k).add_rf(&b.shift(k)));
            prop_assert_eq!(a.mul_rf(&b).shift(k), a.shift(k).mul_rf(&b.shift(k)));
            prop_assert_eq!(a.shift(1).shift(k), a.shift(k + 1));
            Ok(())
        },
    );
    run_property(
        h,
        "diff_vs_finite_difference",
        (ratfun(), var(), point()),
        |(r, x, p)| {
            let h_step = 1e-5;
            let value = |d: f64| {
                r.eval_complex(&|v| {
                    let z = at(&p, v);
                    if v == x {
                        z + d
                    } else {
                        z
                    }
                })
            };
            let den_small = r.den().eval_complex(&|v| at(&p, v)).norm() < 1e-2;
            prop_assume!(!den_small);
            let (Some(fp), Some(fm), Some(f0)) = (value(h_step), value(-h_step), value(0.0)) else {
                return Err(TestCaseError::reject("pole"));
            };
            let fd = (fp - fm) / (2.0 * h_step);
            let d = r.diff(x).eval_complex(&|v| at(&p, v)).unwrap();
            let scale = d.norm().max(f0.norm()).max(1.0);
            prop_assert!((fd - d).norm() <= 1e-6 * scale, "fd {fd} vs {d} for {r}");
            Ok(())
        },
    );
}

fn timed(c: u32, f: fn(&mut Harness), h: &mut Harness) {
    let t = std::time::Instant::now();
    f(h);
    eprintln!("criterion {c}: {:.1?}", t.elapsed());
}

fn main() {
    let mut h = Harness::default();
    timed(1, criterion_1, &mut h);
    timed(2, criterion_2, &mut h);
    timed(3, criterion_3, &mut h);
    timed(4, criterion_4, &mut h);
    timed(5, criterion_5, &mut h);
    timed(6, criterion_6, &mut h);
    timed(7, criterion_7, &mut h);
    timed(8, criterion_8, &mut h);
    if !h.report() {
        std::process::exit(1);
    }
}

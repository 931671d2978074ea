use super::formulas;
use super::{Branch, CatalogEntry, CatalogGenerator, CatalogSolution, Expected};
use crate::seqform::{RootOfUnityScalar, SequenceClosedForm as Seq};
use crate::symexpr::parse_ratfun;
use crate::symmetry::SymmetryGenerator;

fn konst(v: i64) -> Seq {
    Seq::constant_gq(crate::num::Gq::from_int(v))
}

fn rat(text: &str) -> Seq {
    Seq::constant_rat(parse_ratfun(text).expect("catalog literal"))
}

/// `(−1)^n`.
fn alt() -> Seq {
    Seq::geometric(RootOfUnityScalar::root(1, 2))
}

/// `(−1)^n cos(nπ/3)` and `(−1)^n sin(nπ/3)`.
fn alt_cos6() -> Seq {
    alt().mul(&Seq::cos(1, 6))
}

fn alt_sin6() -> Seq {
    alt().mul(&Seq::sin(1, 6))
}

struct B {
    id: &'static str,
    name: &'static str,
    assumptions: Vec<&'static str>,
    generators: Vec<CatalogGenerator>,
    solutions: Vec<CatalogSolution>,
    notes: Vec<String>,
}

impl B {
    fn new(id: &'static str, name: &'static str, assumptions: &[&'static str]) -> Self {
        B {
            id,
            name,
            assumptions: assumptions.to_vec(),
            generators: Vec::new(),
            solutions: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn gen(mut self, q: Vec<Seq>) -> Self {
        let label = format!("X{}", self.generators.len() + 1);
        let g = SymmetryGenerator::from_q(q, "");
        self.push(label, g, Expected::Verified, None);
        self
    }

    fn shift(mut self) -> Self {
        let label = format!("X{}", self.generators.len() + 1);
        self.push(
            label,
            SymmetryGenerator::shift_n(""),
            Expected::Verified,
            None,
        );
        self
    }

    fn push(
        &mut self,
        label: String,
        mut g: SymmetryGenerator,
        expected: Expected,
        note: Option<String>,
    ) {
        let anchor = format!("{}/{}/{label}", self.id, self.name);
        g.provenance = anchor.clone();
        self.generators.push(CatalogGenerator {
            label,
            generator: g,
            anchor,
            expected,
            note,
        });
    }

    /// Mark the most recent generator as an audit item.
    fn audit(mut self, note: &str) -> Self {
        let g = self.generators.last_mut().expect("a generator");
        g.expected = Expected::Audit;
        g.note = Some(note.to_string());
        self
    }

    fn note(mut self, text: &str) -> Self {
        self.notes.push(text.to_string());
        self
    }

    fn solution(mut self, s: CatalogSolution) -> Self {
        self.solutions.push(s);
        self
    }

    fn build(self) -> Branch {
        Branch {
            name: self.name.to_string(),
            assumptions: self.assumptions.iter().map(|s| s.to_string()).collect(),
            generators: self.generators,
            solutions: self.solutions,
            notes: self.notes,
        }
    }
}

fn entry(
    id: &str,
    title: &str,
    omega: &str,
    params: &[&str],
    branches: Vec<Branch>,
) -> CatalogEntry {
    CatalogEntry {
        id: id.to_string(),
        title: title.to_string(),
        omega: omega.to_string(),
        order: 2,
        params: params.iter().map(|s| s.to_string()).collect(),
        branches,
    }
}

pub(super) fn entries() -> Vec<CatalogEntry> {
    vec![dp1(), dp2(), dp3(), dp4(), dp5()]
}

fn dp1() -> CatalogEntry {
    let mut a_nonzero = B::new("dP1", "a_nonzero", &["a!=0", "c=0"]);
    let g = SymmetryGenerator::new(
        [
            parse_ratfun("2*b").expect("literal"),
            parse_ratfun("2*a").expect("literal"),
        ],
        vec![Seq::zero(), rat("a")],
        "",
    );
    a_nonzero.push("X1".into(), g, Expected::Verified, None);
    let zero = B::new("dP1", "zero", &["a=0", "b=0", "c=0"])
        .gen(vec![Seq::zero(), konst(1)])
        .gen(vec![alt_cos6()])
        .gen(vec![alt_sin6()])
        .shift()
        .note("X2 and X3 are translations by solutions of the linear equation u(n+2) = -u(n) - u(n+1)")
        .solution(formulas::dp1_fixed_points())
        .solution(formulas::dp1_multivalued());
    entry(
        "dP1",
        "discrete Painlevé I",
        "-u(0)-u(1)+(a*n+b)/u(1)+c",
        &["a", "b", "c"],
        vec![
            a_nonzero
                .note("c is kept as a parameter and fixed to zero by the branch")
                .build(),
            zero.build(),
        ],
    )
}

fn dp2() -> CatalogEntry {
    let zero = B::new("dP2", "zero", &["a=0", "b=0", "c=0"])
        .shift()
        .gen(vec![Seq::cos(1, 4)])
        .gen(vec![Seq::sin(1, 4)])
        .note("the reduced equation u(n+2) = -u(n) is linear: Q = α(n) is a symmetry whenever α satisfies the original equation")
        .solution(formulas::dp2_closed_form());
    entry(
        "dP2",
        "discrete Painlevé II",
        "-u(0)+(u(1)*(a*n+b)+c)/(1-u(1)^2)",
        &["a", "b", "c"],
        vec![zero.build()],
    )
}

fn dp3() -> CatalogEntry {
    let one_minus = vec![konst(1), Seq::zero(), rat("-1/a")];
    let one_plus = |s: Seq| {
        vec![
            s.clone(),
            Seq::zero(),
            s.scale(&crate::num::CycRat::from_base(
                parse_ratfun("1/a").expect("literal"),
            )),
        ]
    };
    let reciprocal = B::new("dP3", "reciprocal_case", &["b=a*d", "c=a*e", "a!=0"])
        .gen(one_minus.clone())
        .gen(one_plus(Seq::sin(1, 4)))
        .gen(one_plus(Seq::cos(1, 4)))
        .gen(one_minus.into_iter().map(|s| s.mul(&alt())).collect())
        .gen(vec![Seq::zero(), Seq::cos(1, 4)])
        .gen(vec![Seq::zero(), Seq::sin(1, 4)])
        .shift()
        .note("with b = a*d and c = a*e the equation reduces to u(n+2) = a/u(n)")
        .note("X1 is stored as (1 - u^2/a); the sign of the u^2 term in the displayed form does not verify");
    let bcase = B::new("dP3", "bcase", &["a=0", "c=0", "d=0", "e=0", "b!=0"])
        .gen(vec![Seq::zero(), alt_cos6()])
        .gen(vec![Seq::zero(), alt_sin6()])
        .shift()
        .note("the equation reduces to u(n+2) = b/(u(n)*u(n+1)); U = ln u turns it into U(n+2) = -U(n) - U(n+1) + ln b");
    entry(
        "dP3",
        "discrete Painlevé III",
        "(a*u(1)^2+b*u(1)+c)/(u(0)*(u(1)^2+d*u(1)+e))",
        &["a", "b", "c", "d", "e"],
        vec![reciprocal.build(), bcase.build()],
    )
}

fn dp4() -> CatalogEntry {
    let sq = |s: Seq| {
        let eps = s.scale(&crate::num::CycRat::from_base(
            parse_ratfun("eps0").expect("literal"),
        ));
        vec![eps, Seq::zero(), s]
    };
    let general = B::new("dP4", "general", &[])
        .gen(sq(Seq::cos(1, 3)))
        .audit("fails the per-residue check unless mu = 0")
        .gen(sq(Seq::sin(1, 3)))
        .audit("fails the per-residue check unless mu = 0")
        .shift()
        .note("omega does not depend on n, so the translation X3 is consistent")
        .note("mu and eps0 stand for the parameters μ and ε₀");
    let zero = B::new("dP4", "zero", &["mu=0", "eps0=0"])
        .gen(vec![Seq::zero(), konst(1)])
        .gen(vec![Seq::zero(), Seq::zero(), alt_cos6()])
        .gen(vec![Seq::zero(), Seq::zero(), alt_sin6()])
        .shift()
        .note("the prose announces three symmetries while four are displayed; the four displayed generators are kept")
        .note("w = 1/u maps the equation to u(n+2) = -u(n) - u(n+1)")
        .solution(formulas::dp4_ceiling());
    entry(
        "dP4",
        "discrete Painlevé IV",
        "(-u(0)*u(1)+mu/u(1)^2+eps0)/(u(0)+u(1))",
        &["mu", "eps0"],
        vec![general.build(), zero.build()],
    )
}

fn dp5() -> CatalogEntry {
    let default = B::new("dP5", "default", &[])
        .gen(vec![
            Seq::zero(),
            konst(1),
            Seq::constant_gq(crate::num::Gq::from_frac(-2, 3)),
        ])
        .gen(vec![Seq::zero(), Seq::zero(), alt_cos6()])
        .gen(vec![Seq::zero(), Seq::zero(), alt_sin6()])
        .shift()
        .note("the remaining parameters of the general discrete form are set to zero")
        .note("w = 1/u maps the equation to u(n+2) = -u(n) - u(n+1) + 2");
    entry(
        "dP5",
        "discrete Painlevé V",
        "u(0)*u(1)/(2*u(1)*u(0)-u(0)-u(1))",
        &[],
        vec![default.build()],
    )
}

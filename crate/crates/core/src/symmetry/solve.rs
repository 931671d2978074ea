//! Solving determining systems.
//!
//! The equations are linear difference equations in the functions
//! `α_j(n)` with coefficients in `K(n)`, `K` the parameter field. Shifted
//! copies are eliminated inside a growing window until every function has a
//! leading relation `α_j(n+o_j) = …` in lower-ranked quantities. That yields
//! a first-order system `x(n+1) = T·x(n)` on the state
//! `x = (α_j(n+t), t < o_j; constants)`, and the generators are read off the
//! generalized eigenspaces of `T`.

use std::collections::BTreeMap;
use std::fmt;

use super::determine::{DeterminingSystem, Unknown, XiMode};
use super::generator::SymmetryGenerator;
use super::verify::verify_symbolic;
use crate::eqmodel::DifferenceEquation;
use crate::error::{Error, Result};
use crate::num::{nullspace, rref, vec_mat, CycRat, Field, Gq};
use crate::seqform::{
    cyclotomic_roots, RecurrenceConstraint, RootOfUnityScalar, SeqTerm, SequenceClosedForm,
};
use crate::symexpr::{gcd, Poly, RatFun, Var};

const MAX_EXTRA_WINDOW: u32 = 6;

/// What the solver learned about one coefficient function `α_j`.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstraintKind {
    Zero,
    /// Minimal recurrence with constant coefficients.
    Recurrence(RecurrenceConstraint),
    /// Minimal recurrence whose coefficients involve parameters.
    SymbolicRecurrence(String),
    /// Determined algebraically by the other unknowns.
    Determined(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionConstraint {
    pub j: usize,
    pub kind: ConstraintKind,
}

impl fmt::Display for FunctionConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ConstraintKind::Zero => write!(f, "alpha_{} = 0", self.j),
            ConstraintKind::Recurrence(rc) => {
                write!(
                    f,
                    "alpha_{}: {} = 0",
                    self.j,
                    recurrence_text(&rc.coefficients, &format!("alpha_{}", self.j))
                )
            }
            ConstraintKind::SymbolicRecurrence(t) => write!(f, "alpha_{}: {t} = 0", self.j),
            ConstraintKind::Determined(t) => write!(f, "alpha_{}(n) = {t}", self.j),
        }
    }
}

/// `Σ c_k·name(n+k)` in text form.
pub fn recurrence_text(c: &[Gq], name: &str) -> String {
    let mut parts = Vec::new();
    for (k, x) in c.iter().enumerate().rev() {
        if x.is_zero() {
            continue;
        }
        let arg = if k == 0 {
            format!("{name}(n)")
        } else {
            format!("{name}(n+{k})")
        };
        let coef = if x.is_one() {
            String::new()
        } else if (-x).is_one() {
            "-".into()
        } else if x.is_real() {
            format!("{x}*")
        } else {
            format!("({x})*")
        };
        parts.push(format!("{coef}{arg}"));
    }
    parts.join(" + ").replace("+ -", "- ")
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub generators: Vec<SymmetryGenerator>,
    pub constraints: Vec<FunctionConstraint>,
    /// For linear homogeneous equations: `Q = s(n)` is a symmetry for every
    /// solution `s` of this recurrence.
    pub translation_family: Option<RecurrenceConstraint>,
}

// ---------------------------------------------------------------- rows

/// Linear relation `Σ f[(j,s)]·α_j(n+s) + Σ c[i]·z_i = 0`.
#[derive(Clone, Debug, PartialEq)]
struct Row {
    f: BTreeMap<(usize, u32), RatFun>,
    c: Vec<RatFun>,
}

impl Row {
    fn max_shift(&self) -> Option<u32> {
        self.f.keys().map(|k| k.1).max()
    }

    fn min_shift(&self) -> Option<u32> {
        self.f.keys().map(|k| k.1).min()
    }

    fn shifted(&self, t: i64) -> Row {
        Row {
            f: self
                .f
                .iter()
                .map(|(&(j, s), x)| ((j, (s as i64 + t) as u32), x.shift_n(t)))
                .collect(),
            c: self.c.iter().map(|x| x.shift_n(t)).collect(),
        }
    }

    fn normalized(&self) -> Row {
        match self.min_shift() {
            Some(m) if m > 0 => self.shifted(-(m as i64)),
            _ => self.clone(),
        }
    }

    /// Highest-ranked function entry: largest shift, then smallest index.
    fn pivot(&self) -> Option<(usize, u32)> {
        let s = self.max_shift()?;
        self.f
            .keys()
            .filter(|k| k.1 == s)
            .map(|k| k.0)
            .min()
            .map(|j| (j, s))
    }
}

struct Layout {
    nf: usize,
    nc: usize,
    h: u32,
}

impl Layout {
    fn ncols(&self) -> usize {
        (self.h as usize + 1) * self.nf + self.nc
    }

    fn col(&self, j: usize, s: u32) -> usize {
        (self.h - s) as usize * self.nf + j
    }

    fn dense(&self, r: &Row) -> Vec<RatFun> {
        let mut v = vec![RatFun::zero(); self.ncols()];
        for (&(j, s), x) in &r.f {
            v[self.col(j, s)] = x.clone();
        }
        let base = (self.h as usize + 1) * self.nf;
        for (i, x) in r.c.iter().enumerate() {
            v[base + i] = x.clone();
        }
        v
    }

    fn sparse(&self, v: &[RatFun]) -> Row {
        let mut f = BTreeMap::new();
        for s in 0..=self.h {
            for j in 0..self.nf {
                let x = &v[self.col(j, s)];
                if !x.is_zero() {
                    f.insert((j, s), x.clone());
                }
            }
        }
        let base = (self.h as usize + 1) * self.nf;
        Row {
            f,
            c: v[base..].to_vec(),
        }
    }
}

/// Close the rows under shifts inside the window of height `h` and return the
/// reduced echelon basis of the closure.
fn closure(base: &[Row], lay: &Layout) -> Vec<Row> {
    let mut rows: Vec<Row> = base.iter().map(Row::normalized).collect();
    let mut last_rank = usize::MAX;
    loop {
        let mut dense = Vec::new();
        for r in &rows {
            let top = r.max_shift().unwrap_or(0);
            if top > lay.h {
                continue;
            }
            let span = if r.f.is_empty() { 0 } else { lay.h - top };
            for t in 0..=span {
                dense.push(lay.dense(&r.shifted(t as i64)));
            }
        }
        let red = rref(dense, lay.ncols());
        let out: Vec<Row> = red.rows.iter().map(|v| lay.sparse(v)).collect();
        if red.rank() == last_rank {
            return out;
        }
        last_rank = red.rank();
        let mut next: Vec<Row> = Vec::new();
        for r in out.iter().map(Row::normalized) {
            if !next.contains(&r) {
                next.push(r);
            }
        }
        rows = next;
    }
}

fn lcm_poly(a: &Poly, b: &Poly) -> Poly {
    let g = gcd(a, b);
    a.div_exact(&g).expect("gcd divides").mul(b)
}

/// Split a constants-only relation holding for all `n` into `n`-free ones.
fn split_constant_row(c: &[RatFun]) -> Vec<Vec<RatFun>> {
    let mut den = Poly::one();
    for x in c {
        den = lcm_poly(&den, x.den());
    }
    let nums: Vec<Poly> = c
        .iter()
        .map(|x| {
            x.num()
                .mul(&den.div_exact(x.den()).expect("lcm is a multiple"))
        })
        .collect();
    let deg = nums.iter().map(|p| p.degree_in(Var::N)).max().unwrap_or(0) as usize;
    let split: Vec<Vec<Poly>> = nums.iter().map(|p| p.coeffs_in(Var::N)).collect();
    (0..=deg)
        .map(|k| {
            split
                .iter()
                .map(|cs| RatFun::from_poly(cs.get(k).cloned().unwrap_or_else(Poly::zero)))
                .collect()
        })
        .filter(|r: &Vec<RatFun>| r.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Result of the elimination at a fixed constant basis.
enum Analysis {
    /// New `n`-free constraints on the constants.
    Constants(Vec<Vec<RatFun>>),
    State(StateSystem),
}

struct StateSystem {
    /// Leading shift of every function; 0 means algebraically determined.
    orders: Vec<u32>,
    /// `(j, t)` pairs of the state, followed by the constants.
    state: Vec<(usize, u32)>,
    nc: usize,
    t: Vec<Vec<RatFun>>,
    /// Determined functions: `α_j(n) = Σ_m nᵐ·(L_{j,m}·x(n))`.
    determined: BTreeMap<usize, Vec<Vec<RatFun>>>,
}

impl StateSystem {
    fn dim(&self) -> usize {
        self.state.len() + self.nc
    }

    fn state_index(&self, j: usize, t: u32) -> Option<usize> {
        self.state.iter().position(|&(a, b)| a == j && b == t)
    }
}

fn signature(rows: &[Row], nf: usize) -> (Vec<Option<u32>>, usize) {
    let mut o = vec![None; nf];
    for r in rows {
        if let Some((j, s)) = r.pivot() {
            o[j] = Some(o[j].map_or(s, |x: u32| x.min(s)));
        }
    }
    (o, rows.len())
}

fn analyze(base: &[Row], nf: usize, nc: usize, p: u32) -> Result<Analysis> {
    let mut prev: Option<Vec<Option<u32>>> = None;
    for h in p + 1..=p + MAX_EXTRA_WINDOW {
        let lay = Layout { nf, nc, h };
        let rows = closure(base, &lay);
        let consts: Vec<Vec<RatFun>> = rows
            .iter()
            .filter(|r| r.f.is_empty())
            .flat_map(|r| split_constant_row(&r.c))
            .collect();
        if !consts.is_empty() {
            return Ok(Analysis::Constants(consts));
        }
        let (sig, _) = signature(&rows, nf);
        if prev.as_ref() == Some(&sig) && sig.iter().all(Option::is_some) {
            return build_state(&rows, sig.iter().map(|x| x.unwrap()).collect(), nc)
                .map(Analysis::State);
        }
        prev = Some(sig);
    }
    Err(Error::Unsupported(
        "the determining system leaves a coefficient function unconstrained".into(),
    ))
}

fn build_state(rows: &[Row], orders: Vec<u32>, nc: usize) -> Result<StateSystem> {
    let mut state = Vec::new();
    for (j, &o) in orders.iter().enumerate() {
        for t in 0..o {
            state.push((j, t));
        }
    }
    let sys = StateSystem {
        orders: orders.clone(),
        state,
        nc,
        t: Vec::new(),
        determined: BTreeMap::new(),
    };
    let dim = sys.dim();
    let lead = |j: usize| {
        rows.iter()
            .find(|r| r.pivot() == Some((j, orders[j])))
            .expect("pivot row exists")
    };
    // Express a relation `α_j(n+o_j) + rest = 0` as `−rest` over the state.
    let express = |r: &Row, j: usize| -> Result<Vec<RatFun>> {
        let mut v = vec![RatFun::zero(); dim];
        for (&(k, s), x) in &r.f {
            if (k, s) == (j, orders[j]) {
                if !x.is_one() {
                    return Err(Error::Internal("pivot is not normalized".into()));
                }
                continue;
            }
            let i = sys
                .state_index(k, s)
                .ok_or_else(|| Error::Internal(format!("relation for alpha_{j} is not reduced")))?;
            v[i] = x.neg();
        }
        for (i, x) in r.c.iter().enumerate() {
            v[sys.state.len() + i] = x.neg();
        }
        Ok(v)
    };
    let mut t = vec![vec![RatFun::zero(); dim]; dim];
    for (i, &(j, s)) in sys.state.iter().enumerate() {
        if s + 1 < orders[j] {
            t[i][sys.state_index(j, s + 1).expect("state slot")] = RatFun::one();
        } else {
            t[i] = express(lead(j), j)?;
        }
    }
    for i in 0..nc {
        t[sys.state.len() + i][sys.state.len() + i] = RatFun::one();
    }
    if t.iter().flatten().any(|x| x.has_var(Var::N)) {
        return Err(Error::Unsupported(
            "the reduced recurrence has n-dependent coefficients".into(),
        ));
    }
    let mut determined = BTreeMap::new();
    for (j, &o) in orders.iter().enumerate() {
        if o != 0 {
            continue;
        }
        let v = express(lead(j), j)?;
        let mut by_power: Vec<Vec<RatFun>> = Vec::new();
        for (i, x) in v.iter().enumerate() {
            let cs = x.n_poly_coeffs().ok_or_else(|| {
                Error::Unsupported(format!(
                    "alpha_{j} is a non-polynomial function of n times the other unknowns"
                ))
            })?;
            for (m, c) in cs.into_iter().enumerate() {
                if by_power.len() <= m {
                    by_power.push(vec![RatFun::zero(); dim]);
                }
                by_power[m][i] = c;
            }
        }
        determined.insert(j, by_power);
    }
    Ok(StateSystem {
        t,
        determined,
        ..sys
    })
}

// ---------------------------------------------------------------- linear algebra helpers

fn identity<F: Field>(d: usize) -> Vec<Vec<F>> {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|k| if i == k { F::one() } else { F::zero() })
                .collect()
        })
        .collect()
}

fn mat_mul_sq<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    crate::num::mat_mul(a, b)
}

/// First linear dependency among `vs`, normalized so the last coefficient is 1.
fn first_dependency<F: Field>(vs: &[Vec<F>]) -> Option<Vec<F>> {
    let k = vs.len();
    let len = vs.first().map_or(0, Vec::len);
    let m: Vec<Vec<F>> = (0..len)
        .map(|r| vs.iter().map(|v| v[r].clone()).collect())
        .collect();
    let ns = nullspace(m, k);
    let v = ns.into_iter().next()?;
    let lead = v[k - 1].inv()?;
    Some(v.iter().map(|x| x.mul(&lead)).collect())
}

/// Minimal polynomial of a square matrix, coefficients from low to high.
fn minimal_polynomial<F: Field>(t: &[Vec<F>]) -> Vec<F> {
    let d = t.len();
    let mut powers: Vec<Vec<Vec<F>>> = vec![identity(d)];
    loop {
        let flat: Vec<Vec<F>> = powers
            .iter()
            .map(|p| p.iter().flatten().cloned().collect())
            .collect();
        if let Some(c) = (powers.len() > 1)
            .then(|| first_dependency(&flat))
            .flatten()
        {
            return c;
        }
        let next = mat_mul_sq(powers.last().expect("nonempty"), t);
        powers.push(next);
    }
}

/// Minimal annihilating polynomial of the row vector `e` under `T`.
fn row_minimal_polynomial<F: Field>(e: &[F], t: &[Vec<F>]) -> Vec<F> {
    if e.iter().all(Field::is_zero) {
        return vec![F::one()];
    }
    let mut vs: Vec<Vec<F>> = vec![e.to_vec()];
    loop {
        if vs.len() > 1 {
            if let Some(c) = first_dependency(&vs) {
                return c;
            }
        }
        let next = vec_mat(vs.last().expect("nonempty"), t);
        vs.push(next);
    }
}

fn as_constants(c: &[RatFun]) -> Option<Vec<Gq>> {
    c.iter().map(RatFun::constant_value).collect()
}

/// Coefficients of `binom(n, k)` as a polynomial in `n`.
fn binomial_poly(k: usize) -> Vec<Gq> {
    let mut p = vec![Gq::one()];
    for i in 0..k {
        let mut q = vec![Gq::zero(); p.len() + 1];
        for (e, c) in p.iter().enumerate() {
            q[e + 1] = &q[e + 1] + c;
            q[e] = &q[e] - &(c * &Gq::from_int(i as i64));
        }
        p = q;
    }
    let mut f = 1i64;
    for i in 1..=k as i64 {
        f *= i;
    }
    let inv = Gq::from_frac(1, f);
    p.iter().map(|c| c * &inv).collect()
}

// ---------------------------------------------------------------- main entry

fn base_rows(ds: &DeterminingSystem) -> (Vec<Row>, usize) {
    let nc = if ds.xi_mode == XiMode::Affine { 2 } else { 0 };
    let rows = ds
        .equations
        .iter()
        .map(|e| {
            let mut f = BTreeMap::new();
            let mut c = vec![RatFun::zero(); nc];
            for (u, p) in &e.terms {
                let x = RatFun::from_poly(p.clone());
                match *u {
                    Unknown::Alpha { j, shift } => {
                        f.insert((j, shift), x);
                    }
                    Unknown::Xi0 => c[0] = x,
                    Unknown::Xi1 => c[1] = x,
                }
            }
            Row { f, c }
        })
        .collect();
    (rows, nc)
}

fn with_basis(rows: &[Row], basis: &[Vec<RatFun>]) -> Vec<Row> {
    // `basis[i]` is the i-th basis vector of the admissible constants.
    rows.iter()
        .map(|r| Row {
            f: r.f.clone(),
            c: basis
                .iter()
                .map(|b| {
                    r.c.iter()
                        .zip(b)
                        .fold(RatFun::zero(), |acc, (x, y)| acc.add_rf(&x.mul_rf(y)))
                })
                .collect(),
        })
        .collect()
}

fn lift(m: &[Vec<RatFun>]) -> Vec<Vec<CycRat>> {
    m.iter()
        .map(|r| r.iter().map(|x| CycRat::from_base(x.clone())).collect())
        .collect()
}

fn cyc_to_rat(c: &CycRat) -> Result<RatFun> {
    if Field::is_zero(c) {
        return Ok(RatFun::zero());
    }
    c.simplified()
        .base_value()
        .cloned()
        .ok_or_else(|| Error::Internal("ξ coefficient left the base field".into()))
}

pub fn solve_determining_system(ds: &DeterminingSystem) -> Result<Solution> {
    let eq = &ds.equation;
    let p = eq.order();
    let nf = ds.degree + 1;
    let (rows, nc0) = base_rows(ds);
    let mut basis: Vec<Vec<RatFun>> = identity(nc0);
    let sys = loop {
        let nc = basis.len();
        match analyze(&with_basis(&rows, &basis), nf, nc, p)? {
            Analysis::State(s) => break s,
            Analysis::Constants(cons) => {
                let ns = nullspace(cons, nc);
                basis = ns
                    .iter()
                    .map(|v| {
                        (0..nc0)
                            .map(|i| {
                                v.iter().zip(&basis).fold(RatFun::zero(), |acc, (a, b)| {
                                    acc.add_rf(&a.mul_rf(&b[i]))
                                })
                            })
                            .collect()
                    })
                    .collect();
            }
        }
    };
    let constraints = function_constraints(&sys, nf);
    let mut generators = generators_from_state(&sys, nf, &basis, nc0)?;
    if ds.xi_mode == XiMode::None {
        if let Some(g) = autonomous_shift_symmetry(eq) {
            generators.push(g);
        }
    }
    for g in &generators {
        let rep = verify_symbolic(eq, g)?;
        if !rep.passed {
            return Err(Error::Internal(format!(
                "solver produced a non-symmetry: {g}"
            )));
        }
    }
    Ok(Solution {
        generators,
        constraints,
        translation_family: translation_family(eq),
    })
}

fn function_constraints(sys: &StateSystem, nf: usize) -> Vec<FunctionConstraint> {
    let dim = sys.dim();
    (0..nf)
        .map(|j| {
            let kind = if sys.orders[j] == 0 {
                let l = &sys.determined[&j];
                if l.iter().flatten().all(RatFun::is_zero) {
                    ConstraintKind::Zero
                } else {
                    ConstraintKind::Determined(determined_text(sys, l))
                }
            } else {
                let mut e = vec![RatFun::zero(); dim];
                e[sys.state_index(j, 0).expect("state slot")] = RatFun::one();
                let mut c = row_minimal_polynomial(&e, &sys.t);
                while c.len() > 1 && c[0].is_zero() {
                    c.remove(0);
                }
                if c.len() == 1 {
                    ConstraintKind::Zero
                } else {
                    match as_constants(&c).map(RecurrenceConstraint::new) {
                        Some(Ok(rc)) => ConstraintKind::Recurrence(rc),
                        _ => {
                            let x = Var::param("x");
                            let poly = c.iter().enumerate().fold(RatFun::zero(), |acc, (k, ck)| {
                                acc.add_rf(
                                    &ck.mul_rf(&RatFun::var(x).powi(k as i64).expect("power")),
                                )
                            });
                            ConstraintKind::SymbolicRecurrence(format!("characteristic {poly}"))
                        }
                    }
                }
            };
            FunctionConstraint { j, kind }
        })
        .collect()
}

fn determined_text(sys: &StateSystem, l: &[Vec<RatFun>]) -> String {
    let n = RatFun::var(Var::N);
    let mut parts = Vec::new();
    let names: Vec<String> = sys
        .state
        .iter()
        .map(|&(j, t)| {
            if t == 0 {
                format!("alpha_{j}(n)")
            } else {
                format!("alpha_{j}(n+{t})")
            }
        })
        .chain((0..sys.nc).map(|i| format!("c{i}")))
        .collect();
    for (i, name) in names.iter().enumerate() {
        let mut coef = RatFun::zero();
        for (m, row) in l.iter().enumerate() {
            coef = coef.add_rf(&row[i].mul_rf(&n.powi(m as i64).expect("power")));
        }
        if coef.is_zero() {
            continue;
        }
        parts.push(if coef.is_one() {
            name.clone()
        } else {
            format!("({coef})*{name}")
        });
    }
    parts.join(" + ")
}

/// Generalized eigenvector `v` of `T` for `λ` with index `mu`, expanded into
/// the closed form `x(n) = Tⁿv`.
fn state_sequences(
    t: &[Vec<CycRat>],
    lam: &RootOfUnityScalar,
    mu: usize,
    v: &[CycRat],
) -> Vec<SequenceClosedForm> {
    let d = t.len();
    let lc: CycRat = lam.to_cyc();
    let nmat: Vec<Vec<CycRat>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|k| {
                    if i == k {
                        t[i][k].sub(&lc)
                    } else {
                        t[i][k].clone()
                    }
                })
                .collect()
        })
        .collect();
    let mut ws = vec![v.to_vec()];
    for _ in 1..mu {
        let last = ws.last().expect("nonempty");
        ws.push(
            (0..d)
                .map(|i| (0..d).fold(CycRat::zero(), |acc, k| acc.add(&nmat[i][k].mul(&last[k]))))
                .collect(),
        );
    }
    (0..d)
        .map(|i| {
            let mut terms = Vec::new();
            for (k, w) in ws.iter().enumerate() {
                if Field::is_zero(&w[i]) {
                    continue;
                }
                let base = w[i].mul(&lam.pow_cyc::<RatFun>(-(k as i64)));
                for (m, b) in binomial_poly(k).iter().enumerate() {
                    if !b.is_zero() {
                        terms.push(SeqTerm {
                            coef: base.mul_gq(b),
                            lam: lam.clone(),
                            deg: m as u32,
                        });
                    }
                }
            }
            SequenceClosedForm::from_terms(terms)
        })
        .collect()
}

fn generator_from_vector(
    sys: &StateSystem,
    nf: usize,
    basis: &[Vec<RatFun>],
    nc0: usize,
    xs: &[SequenceClosedForm],
    v: &[CycRat],
) -> Result<SymmetryGenerator> {
    let mut q = Vec::with_capacity(nf);
    for j in 0..nf {
        if sys.orders[j] > 0 {
            q.push(xs[sys.state_index(j, 0).expect("state slot")].clone());
        } else {
            let mut acc = SequenceClosedForm::zero();
            for (m, row) in sys.determined[&j].iter().enumerate() {
                let mut inner = SequenceClosedForm::zero();
                for (i, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        inner = inner.add(&xs[i].scale(&CycRat::from_base(c.clone())));
                    }
                }
                acc = acc.add(&inner.mul(&SequenceClosedForm::power_of_n(m as u32)));
            }
            q.push(acc);
        }
    }
    let mut xi = [RatFun::zero(), RatFun::zero()];
    let off = sys.state.len();
    for (i, b) in basis.iter().enumerate() {
        let z = cyc_to_rat(&v[off + i])?;
        for (slot, bi) in xi.iter_mut().zip(b.iter()).take(nc0) {
            *slot = slot.add_rf(&z.mul_rf(bi));
        }
    }
    Ok(SymmetryGenerator::new(xi, q, "solver"))
}

/// Scale so the first coefficient of the lowest nonzero `q_j` is 1, or the
/// first nonzero ξ coefficient when `Q = 0`.
fn normalize(g: &SymmetryGenerator) -> SymmetryGenerator {
    let lead: Option<CycRat> =
        g.q.iter()
            .find(|s| !s.is_zero())
            .map(|s| s.terms()[0].coef.clone())
            .or_else(|| {
                g.xi.iter()
                    .find(|x| !x.is_zero())
                    .map(|x| CycRat::from_base(x.clone()))
            });
    match lead.and_then(|c| c.inv()) {
        Some(inv) => g.scale(&inv).unwrap_or_else(|_| g.clone()),
        None => g.clone(),
    }
}

fn conj_generator(g: &SymmetryGenerator) -> SymmetryGenerator {
    SymmetryGenerator::new(
        [g.xi[0].conj_rf(), g.xi[1].conj_rf()],
        g.q.iter().map(SequenceClosedForm::conj).collect(),
        &g.provenance,
    )
}

fn generators_from_state(
    sys: &StateSystem,
    nf: usize,
    basis: &[Vec<RatFun>],
    nc0: usize,
) -> Result<Vec<SymmetryGenerator>> {
    if sys.dim() == 0 {
        return Ok(Vec::new());
    }
    let mp = minimal_polynomial(&sys.t);
    let coeffs = as_constants(&mp).ok_or_else(|| {
        Error::Unsupported(
            "the characteristic polynomial of the reduced recurrence depends on parameters".into(),
        )
    })?;
    let roots = cyclotomic_roots(&coeffs)?;
    let tc = lift(&sys.t);
    let d = tc.len();
    let mut by_root: Vec<(RootOfUnityScalar, Vec<SymmetryGenerator>)> = Vec::new();
    for (lam, mu) in &roots {
        let lc: CycRat = lam.to_cyc();
        let shifted: Vec<Vec<CycRat>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|k| {
                        if i == k {
                            tc[i][k].sub(&lc)
                        } else {
                            tc[i][k].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut pw = identity::<CycRat>(d);
        for _ in 0..*mu {
            pw = mat_mul_sq(&pw, &shifted);
        }
        let mut gens = Vec::new();
        for v in nullspace(pw, d) {
            let xs = state_sequences(&tc, lam, *mu, &v);
            let g = generator_from_vector(sys, nf, basis, nc0, &xs, &v)?;
            if !g.is_zero() {
                gens.push(normalize(&g));
            }
        }
        by_root.push((lam.clone(), gens));
    }
    // Pair conjugate roots into real combinations when the conjugates are
    // symmetries too.
    let mut out = Vec::new();
    let mut used = vec![false; by_root.len()];
    let half = CycRat::from_gq(&Gq::from_frac(1, 2));
    let mhalf_i = CycRat::from_gq(&Gq::from_parts((0, 1), (-1, 2)));
    for i in 0..by_root.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (lam, gens) = &by_root[i];
        let partner = by_root
            .iter()
            .position(|(l, _)| *l == lam.conj() && l != lam);
        if let Some(k) = partner.filter(|&k| !used[k] && by_root[k].1.len() == gens.len()) {
            let mut pair = Vec::new();
            for g in gens {
                let c = conj_generator(g);
                pair.push(g.add(&c).scale(&half)?);
                pair.push(
                    g.add(&c.scale(&CycRat::from_gq(&Gq::from_int(-1)))?)
                        .scale(&mhalf_i)?,
                );
            }
            pair.retain(|g| !g.is_zero());
            let mut ok = super::generator::generator_rank(&pair) == 2 * gens.len();
            if ok {
                for g in &pair {
                    if !g.q.iter().all(|s| {
                        s.terms()
                            .iter()
                            .all(|t| t.coef.simplified().base_value().is_some())
                    }) {
                        ok = false;
                    }
                }
            }
            if ok {
                used[k] = true;
                out.extend(pair);
                continue;
            }
        }
        out.extend(gens.iter().cloned());
    }
    Ok(out)
}

/// `ξ = 1, Q = 0` when ω does not depend on `n`.
pub fn autonomous_shift_symmetry(eq: &DifferenceEquation) -> Option<SymmetryGenerator> {
    eq.is_autonomous()
        .then(|| SymmetryGenerator::shift_n("translation in n"))
}

/// The equation's own recurrence when ω is linear homogeneous with constant
/// coefficients.
pub fn translation_family(eq: &DifferenceEquation) -> Option<RecurrenceConstraint> {
    if !eq.is_linear_homogeneous() {
        return None;
    }
    let p = eq.order();
    let mut c = vec![Gq::zero(); p as usize + 1];
    c[p as usize] = Gq::one();
    let den = eq.omega().den().constant_value()?;
    for (m, x) in eq.omega().num().terms() {
        if m.len() != 1 {
            return None;
        }
        let k = m[0].0.u_index()?;
        c[k as usize] = -(x * &den.inv()?);
    }
    RecurrenceConstraint::new(c).ok()
}

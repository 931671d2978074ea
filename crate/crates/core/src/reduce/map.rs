use std::fmt;

use super::invariant::Invariant;
use super::{eval_cyc, from_cycq, to_cycq};
use crate::eqmodel::DifferenceEquation;
use crate::error::{Error, Result};
use crate::num::{CycQ, CycRat, Field, Gq};
use crate::seqform::{cyc_text, cyclotomic_roots, RootOfUnityScalar, SequenceClosedForm};
use crate::symexpr::{Poly, RatFun, Var};

/// The symbol standing for `v(n)` in reduced maps.
pub fn v_var() -> Var {
    Var::param("v")
}

fn v0_var() -> Var {
    Var::param("v0")
}

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum MapClass {
    /// `v ↦ r(n)·v + s(n)`.
    Linear {
        r: SequenceClosedForm,
        s: SequenceClosedForm,
    },
    /// `v ↦ (A·v + B)/(C·v + D)` for the matrix `[[A, B], [C, D]]`.
    Moebius([[Gq; 2]; 2]),
    General,
}

impl MapClass {
    pub fn name(&self) -> &'static str {
        match self {
            MapClass::Linear { .. } => "linear",
            MapClass::Moebius(_) => "moebius",
            MapClass::General => "general",
        }
    }
}

/// `v(n+1)` as a function of `n` and `v = v(n)`, one expression per residue
/// of `n` modulo `period`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedMap {
    pub period: u32,
    pub by_residue: Vec<CycRat>,
    pub class: MapClass,
}

impl ReducedMap {
    fn expr_at(&self, n: i64) -> &CycRat {
        &self.by_residue[n.rem_euclid(self.period as i64) as usize]
    }

    /// `v(n+1)` for a value (possibly symbolic) of `v(n)`.
    pub fn apply_sym(&self, n: i64, x: &CycRat) -> Option<CycRat> {
        let v = v_var();
        eval_cyc::<RatFun>(self.expr_at(n), &|var| {
            if var.is_n() {
                CycRat::from_gq(&Gq::from_int(n))
            } else if var == v {
                x.clone()
            } else {
                CycRat::from_base(RatFun::var(var))
            }
        })
    }

    /// Exact `v(n+1)`; `None` at a singularity or when parameters remain.
    pub fn apply(&self, n: i64, x: &CycQ) -> Option<CycQ> {
        to_cycq(&self.apply_sym(n, &from_cycq(x))?)
    }

    pub fn text(&self) -> String {
        if self.period == 1 {
            return format!("v(n+1) = {}", with_vn(&cyc_text(&self.by_residue[0])));
        }
        let parts: Vec<String> = self
            .by_residue
            .iter()
            .enumerate()
            .map(|(r, e)| {
                format!(
                    "n≡{r} (mod {}): v(n+1) = {}",
                    self.period,
                    with_vn(&cyc_text(e))
                )
            })
            .collect();
        parts.join("; ")
    }
}

impl fmt::Display for ReducedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

/// Spell the bare symbol `v` as `v(n)`.
fn with_vn(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len() + 8);
    for (i, &c) in chars.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| chars[j]);
        let next = chars.get(i + 1).copied();
        let word = |x: Option<char>| x.is_some_and(|x| x.is_alphanumeric() || x == '_');
        if c == 'v' && !word(prev) && !word(next) && next != Some('(') {
            out.push_str("v(n)");
        } else {
            out.push(c);
        }
    }
    out
}

fn u(k: u32) -> RatFun {
    RatFun::var(Var::u(k))
}

/// Induced first-order map: shift the invariant, substitute `u(n+2) = ω`
/// and eliminate `u(n)` through the invariant itself.
pub fn reduced_map(eq: &DifferenceEquation, inv: &Invariant) -> Result<ReducedMap> {
    if eq.order() != 2 {
        return Err(Error::UnsupportedFamily(
            "reduction is implemented for second-order equations".into(),
        ));
    }
    let v = RatFun::var(v_var());
    match inv {
        Invariant::Ratio => {
            let shifted = eq.omega().div_rf(&u(1)).expect("nonzero");
            let expr = shifted.substitute(Var::u(1), &v.mul_rf(&u(0)))?;
            if expr.has_var(Var::u(0)) {
                return Err(Error::NotClosed(format!("u(n) remains in v(n+1) = {expr}")));
            }
            let class = classify(&expr);
            Ok(ReducedMap {
                period: 1,
                by_residue: vec![CycRat::from_base(expr)],
                class,
            })
        }
        Invariant::Translation { values, .. } => {
            let p = values.len();
            let mut by_residue = Vec::with_capacity(p);
            for r in 0..p {
                let rho = &values[r];
                let rho_next = &values[(r + 1) % p];
                let u1 = Field::add(
                    &CycRat::from_base(v.clone()),
                    &Field::mul(rho, &CycRat::from_base(u(0))),
                );
                let value = |var: Var| -> CycRat {
                    if var == Var::u(1) {
                        u1.clone()
                    } else {
                        CycRat::from_base(RatFun::var(var))
                    }
                };
                let num = eq.omega().num().eval::<CycRat>(&value);
                let den = eq.omega().den().eval::<CycRat>(&value);
                let omega = num.div(&den).ok_or(Error::IdenticallySingular)?;
                let expr = Field::sub(&omega, &Field::mul(rho_next, &u1)).simplified();
                if expr.coords().iter().any(|c| c.has_var(Var::u(0))) {
                    return Err(Error::NotClosed(format!(
                        "u(n) remains in v(n+1) = {}",
                        cyc_text(&expr)
                    )));
                }
                by_residue.push(expr);
            }
            let class = classify_linear(&by_residue).unwrap_or(MapClass::General);
            Ok(ReducedMap {
                period: p as u32,
                by_residue,
                class,
            })
        }
    }
}

fn coeff_rf(cs: &[Poly], k: usize, den: &Poly) -> RatFun {
    RatFun::new(cs.get(k).cloned().unwrap_or_else(Poly::zero), den.clone())
        .expect("nonzero denominator")
}

fn classify(expr: &RatFun) -> MapClass {
    let v = v_var();
    let (num, den) = (expr.num(), expr.den());
    if num.degree_in(v) > 1 || den.degree_in(v) > 1 {
        return MapClass::General;
    }
    if den.degree_in(v) == 0 {
        let cs = num.coeffs_in(v);
        let (r, s) = (coeff_rf(&cs, 1, den), coeff_rf(&cs, 0, den));
        if r.is_zero() || r.has_var(Var::N) || s.has_var(Var::N) {
            return MapClass::General;
        }
        return MapClass::Linear {
            r: SequenceClosedForm::constant_rat(r),
            s: SequenceClosedForm::constant_rat(s),
        };
    }
    let (nc, dc) = (num.coeffs_in(v), den.coeffs_in(v));
    let get = |cs: &[Poly], k: usize| cs.get(k).map_or(Some(Gq::zero()), Poly::constant_value);
    let (Some(a), Some(b), Some(c), Some(d)) = (get(&nc, 1), get(&nc, 0), get(&dc, 1), get(&dc, 0))
    else {
        return MapClass::General;
    };
    if (&a * &d - &b * &c).is_zero() {
        return MapClass::General;
    }
    MapClass::Moebius([[a, b], [c, d]])
}

/// Linear in `v` on every residue with `n`-free coefficients.
fn classify_linear(by_residue: &[CycRat]) -> Option<MapClass> {
    let v = v_var();
    let zero = RatFun::from_int(0);
    let mut rs = Vec::new();
    let mut ss = Vec::new();
    for e in by_residue {
        for c in e.coords() {
            if c.den().has_var(v) || c.num().degree_in(v) > 1 {
                return None;
            }
        }
        let r = e.map(|c| c.diff(v));
        let s = e.map(|c| c.substitute(v, &zero).expect("polynomial in v"));
        if [&r, &s]
            .iter()
            .any(|x| x.coords().iter().any(|c| c.has_var(Var::N)))
            || Field::is_zero(&r)
        {
            return None;
        }
        rs.push(r.simplified());
        ss.push(s.simplified());
    }
    Some(MapClass::Linear {
        r: SequenceClosedForm::from_periodic(&rs),
        s: SequenceClosedForm::from_periodic(&ss),
    })
}

/// Initial value of `v`.
#[derive(Clone, Debug, PartialEq)]
pub enum Seed {
    Symbol(String),
    Value(CycQ),
}

impl Seed {
    fn value(&self) -> CycRat {
        match self {
            Seed::Symbol(s) => CycRat::from_base(RatFun::var(Var::param(s))),
            Seed::Value(c) => from_cycq(c),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FirstOrderSolution {
    /// `v(n) = coef(n)·v0 + offset(n)`.
    Affine {
        coef: SequenceClosedForm,
        offset: SequenceClosedForm,
        v0: CycRat,
    },
    /// `v(n) = (a(n)·v0 + b(n)) / (c(n)·v0 + d(n))` where `[[a, b], [c, d]] = Mⁿ`.
    Moebius {
        matrix: [[Gq; 2]; 2],
        eigenvalues: Vec<RootOfUnityScalar>,
        power: [[SequenceClosedForm; 2]; 2],
        v0: CycRat,
    },
    /// Values only through iteration of the map.
    Iterated {
        map: ReducedMap,
        v0: CycRat,
        warning: String,
    },
}

impl FirstOrderSolution {
    pub fn v0(&self) -> &CycRat {
        match self {
            FirstOrderSolution::Affine { v0, .. }
            | FirstOrderSolution::Moebius { v0, .. }
            | FirstOrderSolution::Iterated { v0, .. } => v0,
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self, FirstOrderSolution::Iterated { .. })
    }

    pub fn warning(&self) -> Option<&str> {
        match self {
            FirstOrderSolution::Iterated { warning, .. } => Some(warning),
            _ => None,
        }
    }

    /// The same solution started from another `v0`.
    pub fn with_seed(&self, v0: CycRat) -> FirstOrderSolution {
        let mut out = self.clone();
        match &mut out {
            FirstOrderSolution::Affine { v0: x, .. }
            | FirstOrderSolution::Moebius { v0: x, .. }
            | FirstOrderSolution::Iterated { v0: x, .. } => *x = v0,
        }
        out
    }

    /// `v(n)` for `n ≥ 0`; `None` past a singularity.
    pub fn at(&self, n: i64) -> Option<CycRat> {
        match self {
            FirstOrderSolution::Affine { coef, offset, v0 } => {
                Some(Field::add(&Field::mul(&coef.eval(n), v0), &offset.eval(n)).simplified())
            }
            FirstOrderSolution::Moebius { power, v0, .. } => {
                let e = |i: usize, j: usize| power[i][j].eval(n);
                let num = Field::add(&Field::mul(&e(0, 0), v0), &e(0, 1));
                let den = Field::add(&Field::mul(&e(1, 0), v0), &e(1, 1));
                num.div(&den).map(|x| x.simplified())
            }
            FirstOrderSolution::Iterated { map, v0, .. } => {
                let mut x = v0.clone();
                for k in 0..n {
                    x = map.apply_sym(k, &x)?;
                }
                Some(x)
            }
        }
    }

    pub fn at_exact(&self, n: i64) -> Option<CycQ> {
        to_cycq(&self.at(n)?)
    }

    /// `coef·v0 + offset` for the affine kind.
    pub fn as_sequence(&self) -> Option<SequenceClosedForm> {
        match self {
            FirstOrderSolution::Affine { coef, offset, v0 } => Some(coef.scale(v0).add(offset)),
            _ => None,
        }
    }

    /// Exact period of `v(n)` for a concrete `v0`.
    pub fn period(&self) -> Option<u32> {
        match self {
            FirstOrderSolution::Affine { .. } => self.as_sequence()?.period(),
            FirstOrderSolution::Moebius { power, v0, .. } => {
                if let Some(x0) = to_cycq(v0) {
                    // autonomous map: the orbit is periodic once it returns
                    return (1..=48).find(|&p| self.at_exact(p as i64).as_ref() == Some(&x0));
                }
                (1..=48).find(|&p| {
                    let e = |i: usize, j: usize| power[i][j].eval(p as i64);
                    Field::is_zero(&e(0, 1)) && Field::is_zero(&e(1, 0)) && e(0, 0) == e(1, 1)
                })
            }
            FirstOrderSolution::Iterated { .. } => None,
        }
    }

    fn render(&self, seq: &dyn Fn(&SequenceClosedForm) -> String) -> String {
        let v0 = cyc_text(self.v0());
        match self {
            FirstOrderSolution::Affine { coef, offset, .. } => {
                if self.v0().coords().iter().all(RatFun::is_constant) {
                    return format!("v(n) = {}", seq(&self.as_sequence().expect("affine")));
                }
                if offset.is_zero() {
                    format!("v(n) = ({})*{v0}", seq(coef))
                } else {
                    format!("v(n) = ({})*{v0} + {}", seq(coef), seq(offset))
                }
            }
            FirstOrderSolution::Moebius { power, .. } => format!(
                "v(n) = (a(n)*v0 + b(n))/(c(n)*v0 + d(n)), v0 = {v0}, a(n) = {}, b(n) = {}, c(n) = {}, d(n) = {}",
                seq(&power[0][0]),
                seq(&power[0][1]),
                seq(&power[1][0]),
                seq(&power[1][1])
            ),
            FirstOrderSolution::Iterated { map, warning, .. } => {
                format!("v(n) by iterating {map} from v0 = {v0} ({warning})")
            }
        }
    }

    /// Exponential form.
    pub fn text(&self) -> String {
        self.render(&|s| s.to_string())
    }

    /// Real trigonometric form.
    pub fn real_text(&self) -> String {
        self.render(&SequenceClosedForm::real_form)
    }
}

impl fmt::Display for FirstOrderSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

fn rou_of(c: &CycRat) -> Option<RootOfUnityScalar> {
    RootOfUnityScalar::from_cyc(&to_cycq(c)?)
}

/// Closed-form solution of a linear map with constant coefficients or of a
/// Möbius map with cyclotomic eigenvalues; anything else is iterated.
pub fn solve_first_order(m: &ReducedMap, seed: &Seed) -> Result<FirstOrderSolution> {
    let v0 = seed.value();
    let iterated = |warning: String| FirstOrderSolution::Iterated {
        map: m.clone(),
        v0: v0.clone(),
        warning,
    };
    let sol = match &m.class {
        MapClass::Linear { r, s } => match (r.as_constant(), s.as_constant()) {
            (Some(rc), Some(sc)) => match rou_of(&rc) {
                Some(lam) => linear_closed_form(&lam, &sc, v0.clone()),
                None => iterated(format!(
                    "multiplier {} is not a scaled root of unity",
                    cyc_text(&rc)
                )),
            },
            _ => iterated("periodic coefficients are iterated rather than collapsed".into()),
        },
        MapClass::Moebius(mat) => match moebius_power(mat)? {
            Some((eigenvalues, power)) => FirstOrderSolution::Moebius {
                matrix: mat.clone(),
                eigenvalues,
                power,
                v0: v0.clone(),
            },
            None => iterated(
                Error::NonCyclotomicRoot {
                    factor: char_poly_text(mat),
                }
                .to_string(),
            ),
        },
        MapClass::General => iterated("map is neither linear nor Möbius".into()),
    };
    if sol.is_closed_form() {
        check_steps(m, &sol)?;
    }
    Ok(sol)
}

fn linear_closed_form(lam: &RootOfUnityScalar, s: &CycRat, v0: CycRat) -> FirstOrderSolution {
    let coef = SequenceClosedForm::geometric(lam.clone());
    let offset = if Field::is_zero(s) {
        SequenceClosedForm::zero()
    } else if lam.is_one() {
        SequenceClosedForm::power_of_n(1).scale(s)
    } else {
        let one_minus: CycRat = Field::sub(&CycRat::one(), &lam.to_cyc());
        let k = s.div(&one_minus).expect("λ ≠ 1");
        SequenceClosedForm::constant(k.clone()).sub(&coef.scale(&k))
    };
    FirstOrderSolution::Affine { coef, offset, v0 }
}

fn char_poly(m: &[[Gq; 2]; 2]) -> Vec<Gq> {
    let tr = &m[0][0] + &m[1][1];
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    vec![det, -tr, Gq::one()]
}

fn char_poly_text(m: &[[Gq; 2]; 2]) -> String {
    crate::seqform::upoly_text(&char_poly(m), "x")
}

type Power = [[SequenceClosedForm; 2]; 2];

/// `Mⁿ` entrywise as exponential-polynomial sequences, checked against
/// repeated multiplication for `n = 0..=12`.
fn moebius_power(m: &[[Gq; 2]; 2]) -> Result<Option<(Vec<RootOfUnityScalar>, Power)>> {
    let roots = match cyclotomic_roots(&char_poly(m)) {
        Ok(r) => r,
        Err(Error::NonCyclotomicRoot { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mc: Vec<Vec<CycRat>> = m
        .iter()
        .map(|row| row.iter().map(CycRat::from_gq).collect())
        .collect();
    let minus = |lam: &RootOfUnityScalar| -> Vec<Vec<CycRat>> {
        let l: CycRat = lam.to_cyc();
        (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| {
                        if i == j {
                            Field::sub(&mc[i][j], &l)
                        } else {
                            mc[i][j].clone()
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let z = SequenceClosedForm::zero;
    let mut power: Power = [[z(), z()], [z(), z()]];
    let eigenvalues: Vec<RootOfUnityScalar>;
    match roots.as_slice() {
        [(l1, 1), (l2, 1)] => {
            let diff: CycRat = Field::sub(&l1.to_cyc(), &l2.to_cyc());
            let (a, b) = (minus(l2), minus(l1));
            for i in 0..2 {
                for j in 0..2 {
                    let c1 = a[i][j].div(&diff).expect("distinct eigenvalues");
                    let c2 = b[i][j].div(&diff).expect("distinct eigenvalues").neg();
                    power[i][j] = SequenceClosedForm::term(c1, l1.clone(), 0)
                        .add(&SequenceClosedForm::term(c2, l2.clone(), 0));
                }
            }
            eigenvalues = vec![l1.clone(), l2.clone()];
        }
        [(l, 2)] => {
            let a = minus(l);
            let linv: CycRat = l.inv().to_cyc();
            for i in 0..2 {
                for j in 0..2 {
                    let diag = if i == j {
                        SequenceClosedForm::geometric(l.clone())
                    } else {
                        z()
                    };
                    power[i][j] = diag.add(&SequenceClosedForm::term(
                        Field::mul(&a[i][j], &linv),
                        l.clone(),
                        1,
                    ));
                }
            }
            eigenvalues = vec![l.clone(), l.clone()];
        }
        _ => {
            return Err(Error::Internal(format!(
                "unexpected eigenvalue structure for {}",
                char_poly_text(m)
            )))
        }
    }
    let mq: Vec<Vec<CycQ>> = m
        .iter()
        .map(|row| row.iter().map(CycQ::from_gq).collect())
        .collect();
    let mut acc: Vec<Vec<CycQ>> = vec![
        vec![CycQ::one(), CycQ::zero()],
        vec![CycQ::zero(), CycQ::one()],
    ];
    for n in 0..=12i64 {
        for i in 0..2 {
            for j in 0..2 {
                let got = to_cycq(&power[i][j].eval(n));
                if got.as_ref() != Some(&acc[i][j]) {
                    return Err(Error::Internal(format!(
                        "closed-form M^{n} disagrees with repeated multiplication"
                    )));
                }
            }
        }
        acc = crate::num::mat_mul(&acc, &mq);
    }
    Ok(Some((eigenvalues, power)))
}

/// `v(n+1)` from the closed form must equal one map step applied to `v(n)`.
fn check_steps(m: &ReducedMap, sol: &FirstOrderSolution) -> Result<()> {
    let v0 = v0_var();
    let probe = match sol.v0().base_value() {
        Some(b) if b.has_var(v0) || !b.is_constant() => sol.clone(),
        _ => sol.with_seed(CycRat::from_base(RatFun::var(v0))),
    };
    for n in 0..12 {
        let (Some(cur), Some(next)) = (probe.at(n), probe.at(n + 1)) else {
            continue;
        };
        let Some(step) = m.apply_sym(n, &cur) else {
            continue;
        };
        if step.simplified() != next {
            return Err(Error::Internal(format!(
                "closed form fails one map step at n = {n}"
            )));
        }
    }
    Ok(())
}

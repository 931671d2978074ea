//! Linear constant-coefficient recurrences and their exponential-polynomial
//! solution bases.

use num_complex::Complex64;

use super::rou::RootOfUnityScalar;
use super::seq::SequenceClosedForm;
use crate::error::{Error, Result};
use crate::num::{solve, CycRat, Field, Gq};
use crate::symexpr::{Poly, Var};

/// `c_r·α(n+r) + … + c_0·α(n) = 0` for all integer `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceConstraint {
    pub coefficients: Vec<Gq>,
}

impl RecurrenceConstraint {
    pub fn new(coefficients: Vec<Gq>) -> Result<Self> {
        let r = RecurrenceConstraint { coefficients };
        r.check()?;
        Ok(r)
    }

    fn check(&self) -> Result<()> {
        if self.coefficients.len() < 2 {
            return Err(Error::Invalid("a recurrence needs order at least 1".into()));
        }
        if self.coefficients.last().is_some_and(Gq::is_zero) {
            return Err(Error::Invalid(
                "leading recurrence coefficient must be nonzero".into(),
            ));
        }
        if self.coefficients.iter().all(Gq::is_zero) {
            return Err(Error::Invalid(
                "recurrence coefficients are all zero".into(),
            ));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Exact residual `Σ c_j s(n+j)`.
    pub fn apply(&self, s: &SequenceClosedForm, n: i64) -> CycRat {
        let mut acc = CycRat::zero();
        for (j, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = Field::add(&acc, &s.eval(n + j as i64).mul_gq(c));
        }
        acc
    }

    pub fn text(&self) -> String {
        upoly_text(&self.coefficients, "x")
    }
}

// ---------------------------------------------------------------- univariate helpers

type UPoly = Vec<Gq>;

fn trim(mut p: UPoly) -> UPoly {
    while p.len() > 1 && p.last().is_some_and(Gq::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(Gq::zero());
    }
    p
}

fn is_zero_poly(p: &UPoly) -> bool {
    p.iter().all(Gq::is_zero)
}

fn monic(p: &UPoly) -> UPoly {
    let lc = p
        .last()
        .expect("nonempty")
        .inv()
        .expect("nonzero leading coefficient");
    p.iter().map(|c| c * &lc).collect()
}

fn deriv(p: &UPoly) -> UPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * &Gq::from_int(j as i64))
            .collect(),
    )
}

fn divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![Gq::zero()], r);
    }
    let inv = b[db].inv().expect("nonzero divisor");
    let mut q = vec![Gq::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let f = &r[k + db] * &inv;
        if f.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &(&f * bj);
        }
        q[k] = f;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

fn psub(a: &UPoly, b: &UPoly) -> UPoly {
    let len = a.len().max(b.len());
    let z = Gq::zero();
    trim(
        (0..len)
            .map(|j| a.get(j).unwrap_or(&z) - b.get(j).unwrap_or(&z))
            .collect(),
    )
}

fn ugcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !is_zero_poly(&y) {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Square-free decomposition (Yun): `(factor, multiplicity)` pairs.
fn yun(p: &UPoly) -> Vec<(UPoly, usize)> {
    let p = monic(p);
    if p.len() <= 2 {
        return vec![(p, 1)];
    }
    let dp = deriv(&p);
    let a0 = ugcd(&p, &dp);
    let mut b = divrem(&p, &a0).0;
    let c = divrem(&dp, &a0).0;
    let mut d = psub(&c, &deriv(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        let a_i = ugcd(&b, &d);
        b = divrem(&b, &a_i).0;
        let c = divrem(&d, &a_i).0;
        d = psub(&c, &deriv(&b));
        if a_i.len() > 1 {
            out.push((a_i, i));
        }
        i += 1;
    }
    out
}

fn eval_c(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Durand–Kerner iteration followed by Newton polishing.
pub fn complex_roots(p: &[Gq]) -> Vec<Complex64> {
    let p = monic(&trim(p.to_vec()));
    let d = p.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let pc: Vec<Complex64> = p.iter().map(Gq::to_complex).collect();
    let bound = 1.0 + pc[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| seed.powi(k as i32) * (bound / 2.0).max(0.5))
        .collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for k in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if j != k {
                    den *= z[k] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 1e-12);
            }
            let step = eval_c(&pc, z[k]) / den;
            z[k] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    let dpc: Vec<Complex64> = pc
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * j as f64)
        .collect();
    for r in &mut z {
        for _ in 0..5 {
            let dv = eval_c(&dpc, *r);
            if dv.norm() == 0.0 {
                break;
            }
            *r -= eval_c(&pc, *r) / dv;
        }
    }
    z
}

pub fn upoly_text(p: &[Gq], var: &str) -> String {
    let x = Var::param(var);
    let coeffs: Vec<Poly> = p.iter().map(|c| Poly::constant(c.clone())).collect();
    Poly::from_coeffs_in(x, &coeffs).to_string()
}

/// Roots of a univariate polynomial with multiplicities, each a scaled root
/// of unity; zero roots are dropped.
pub fn cyclotomic_roots(p: &[Gq]) -> Result<Vec<(RootOfUnityScalar, usize)>> {
    let mut p = trim(p.to_vec());
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
    }
    let mut out = Vec::new();
    if p.len() <= 1 {
        return Ok(out);
    }
    for (f, mult) in yun(&p) {
        if f.len() == 2 {
            let r = -(&f[0] * &f[1].inv().expect("nonzero"));
            out.push((RootOfUnityScalar::from_gq(r), mult));
            continue;
        }
        let max_order = 24.max(4 * (f.len() as u32) * (f.len() as u32));
        let mut found: Vec<RootOfUnityScalar> = Vec::new();
        for z in complex_roots(&f) {
            match RootOfUnityScalar::recognize(z, &f, max_order) {
                Some(l) if !found.contains(&l) => found.push(l),
                _ => {}
            }
        }
        if found.len() != f.len() - 1 {
            return Err(Error::NonCyclotomicRoot {
                factor: upoly_text(&f, "x"),
            });
        }
        out.extend(found.into_iter().map(|l| (l, mult)));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Basis of exponential-polynomial solutions, verified exactly on `n = 0..=4r`.
pub fn solve_recurrence(rc: &RecurrenceConstraint) -> Result<Vec<SequenceClosedForm>> {
    rc.check()?;
    let roots = cyclotomic_roots(&rc.coefficients)?;
    let mut basis = Vec::new();
    for (lam, mult) in roots {
        for deg in 0..mult as u32 {
            basis.push(SequenceClosedForm::term(CycRat::one(), lam.clone(), deg));
        }
    }
    let r = rc.order() as i64;
    for s in &basis {
        for n in 0..=4 * r {
            if !Field::is_zero(&rc.apply(s, n)) {
                return Err(Error::Internal(format!(
                    "basis element {s} fails the recurrence at n={n}"
                )));
            }
        }
    }
    Ok(basis)
}

/// The same span with each conjugate pair `λⁿnᵐ`, `λ̄ⁿnᵐ` replaced by its
/// real and imaginary parts, so that real-form rendering shows `cos`/`sin`.
pub fn real_basis(basis: &[SequenceClosedForm]) -> Vec<SequenceClosedForm> {
    let half = CycRat::from_gq(&Gq::from_frac(1, 2));
    let half_i = CycRat::from_gq(&Gq::from_parts((0, 1), (-1, 2)));
    let mut used = vec![false; basis.len()];
    let mut out = Vec::new();
    for (a, s) in basis.iter().enumerate() {
        if used[a] {
            continue;
        }
        used[a] = true;
        let c = s.conj();
        match (a + 1..basis.len()).find(|&b| !used[b] && basis[b] == c && c != *s) {
            Some(b) => {
                used[b] = true;
                out.push(s.add(&c).scale(&half));
                out.push(s.sub(&c).scale(&half_i));
            }
            None => out.push(s.clone()),
        }
    }
    out
}

/// Coefficients `w` with `Σ_i w_i·basis_i(n0+t) = values[t]`; the system is a
/// generalized Vandermonde matrix, square when `values.len() == basis.len()`.
pub fn fit_to_basis(
    basis: &[SequenceClosedForm],
    n0: i64,
    values: &[CycRat],
) -> Option<Vec<CycRat>> {
    let k = basis.len();
    if values.len() < k {
        return None;
    }
    let a: Vec<Vec<CycRat>> = (0..k)
        .map(|t| basis.iter().map(|b| b.eval(n0 + t as i64)).collect())
        .collect();
    let w = solve(&a, &values[..k])?;
    // Remaining values must agree.
    for (t, v) in values.iter().enumerate().skip(k) {
        let mut acc = CycRat::zero();
        for (wi, b) in w.iter().zip(basis) {
            acc = Field::add(&acc, &Field::mul(wi, &b.eval(n0 + t as i64)));
        }
        if acc != *v {
            return None;
        }
    }
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(c: &[i64]) -> RecurrenceConstraint {
        RecurrenceConstraint::new(c.iter().map(|&x| Gq::from_int(x)).collect()).unwrap()
    }

    #[test]
    fn quarter_turn_basis() {
        let b = solve_recurrence(&rc(&[1, 0, 1])).unwrap();
        let lams: Vec<_> = b.iter().map(|s| s.terms()[0].lam.clone()).collect();
        assert_eq!(
            lams,
            vec![RootOfUnityScalar::root(1, 4), RootOfUnityScalar::root(3, 4)]
        );
    }

    #[test]
    fn cube_root_basis() {
        let b = solve_recurrence(&rc(&[1, 1, 1])).unwrap();
        let lams: Vec<_> = b.iter().map(|s| s.terms()[0].lam.clone()).collect();
        assert_eq!(
            lams,
            vec![RootOfUnityScalar::root(1, 3), RootOfUnityScalar::root(2, 3)]
        );
        let one = solve_recurrence(&rc(&[-1, 1])).unwrap();
        assert_eq!(one, vec![SequenceClosedForm::constant_gq(Gq::one())]);
    }

    #[test]
    fn repeated_root_gives_polynomial_factor() {
        // (x-1)^2 (x+1)
        let b = solve_recurrence(&rc(&[1, -1, -1, 1])).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.iter().any(|s| s.terms()[0].deg == 1));
    }

    #[test]
    fn rejects_golden_ratio() {
        match solve_recurrence(&rc(&[-1, -1, 1])) {
            Err(Error::NonCyclotomicRoot { factor }) => assert!(factor.contains('x')),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn scaled_roots() {
        // α(n+2) + 4α(n) = 0 → (±2i)^n
        let b = solve_recurrence(&rc(&[4, 0, 1])).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b
            .iter()
            .all(|s| s.terms()[0].lam.scale() == &Gq::from_int(2)));
    }

    #[test]
    fn fit_recovers_cosine() {
        let b = solve_recurrence(&rc(&[1, 1, 1])).unwrap();
        let c = SequenceClosedForm::cos(1, 3);
        let vals: Vec<CycRat> = (0..4).map(|n| c.eval(n)).collect();
        let w = fit_to_basis(&b, 0, &vals).unwrap();
        let half = CycRat::from_gq(&Gq::from_frac(1, 2));
        assert_eq!(w, vec![half.clone(), half]);
    }
}

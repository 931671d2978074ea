use std::fmt;

use num_complex::Complex64;

use super::generator::SymmetryGenerator;
use crate::eqmodel::DifferenceEquation;
use crate::error::{Error, Result};
use crate::num::{CycRat, Field};
use crate::seqform::cyc_text;
use crate::symexpr::{Poly, RatFun, Var};

pub const DEFAULT_MAX_DEGREE: usize = 2;

/// The linearized symmetry condition with denominators cleared:
///
/// `D^M·R = Σ_j α_{j,p}·Nʲ·D^{M-j} − Σ_{s<p} Σ_j α_{j,s}·U_sʲ·W_s − (ξ₀ + ξ₁n)·W_n`
///
/// where `ω = N/D`, `W_x = (N_x·D − N·D_x)·D^{M-2}` and `M = max(2, d)`.
#[derive(Clone, Debug)]
pub struct ResidualForm {
    pub order: u32,
    pub degree: usize,
    /// `D^M`.
    pub denom: Poly,
    /// `alpha[j][s]`, coefficient polynomial of `α_{j,s}` for `s = 0..=p`.
    pub alpha: Vec<Vec<Poly>>,
    pub xi: [Poly; 2],
    omega: RatFun,
    omega_n: RatFun,
    omega_u: Vec<RatFun>,
}

impl ResidualForm {
    pub fn new(eq: &DifferenceEquation, degree: usize) -> Self {
        let p = eq.order();
        let omega = eq.omega().clone();
        let (num, den) = (omega.num().clone(), omega.den().clone());
        let m = degree.max(2) as u32;
        let dm2 = den.pow(m - 2);
        let w = |v: Var| num.diff(v).mul(&den).sub(&num.mul(&den.diff(v))).mul(&dm2);
        let wn = w(Var::N);
        let ws: Vec<Poly> = (0..p).map(|s| w(Var::u(s))).collect();
        let mut alpha = vec![vec![Poly::zero(); p as usize + 1]; degree + 1];
        for (j, row) in alpha.iter_mut().enumerate() {
            let uj = |s: u32| Poly::var(Var::u(s)).pow(j as u32);
            for s in 0..p {
                row[s as usize] = uj(s).mul(&ws[s as usize]).neg();
            }
            row[p as usize] = num.pow(j as u32).mul(&den.pow(m - j as u32));
        }
        let xi0 = wn.neg();
        let xi1 = xi0.mul(&Poly::var(Var::N));
        let omega_n = omega.diff(Var::N);
        let omega_u = (0..p).map(|s| omega.diff(Var::u(s))).collect();
        ResidualForm {
            order: p,
            degree,
            denom: den.pow(m),
            alpha,
            xi: [xi0, xi1],
            omega,
            omega_n,
            omega_u,
        }
    }

    /// Numerator and the sum of term magnitudes of `R` at a numeric point;
    /// `None` when ω is singular there.
    pub fn eval_numeric(
        &self,
        g: &SymmetryGenerator,
        n: i64,
        us: &[Complex64],
        params: &dyn Fn(Var) -> Complex64,
    ) -> Option<(Complex64, f64)> {
        let p = self.order as usize;
        let value = |v: Var| -> Complex64 {
            if v.is_n() {
                Complex64::new(n as f64, 0.0)
            } else if let Some(k) = v.u_index() {
                us[k as usize]
            } else {
                params(v)
            }
        };
        let num = self.omega.num().eval_complex(&value);
        let den = self.omega.den().eval_complex(&value);
        if den.norm() < 1e-8 * (1.0 + num.norm()) {
            return None;
        }
        let w = num / den;
        let qval = |shift: i64, x: Complex64| -> Option<Complex64> {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, s) in g.q.iter().enumerate() {
                acc += s.eval_complex((n + shift) as f64, params)? * x.powu(j as u32);
            }
            Some(acc)
        };
        let mut terms = vec![qval(p as i64, w)?];
        let xi = g.xi[0].eval_complex(params)? + g.xi[1].eval_complex(params)? * n as f64;
        terms.push(-xi * self.omega_n.eval_complex(&value)?);
        for (s, (&u, d)) in us.iter().zip(&self.omega_u).enumerate().take(p) {
            terms.push(-qval(s as i64, u)? * d.eval_complex(&value)?);
        }
        let total: Complex64 = terms.iter().sum();
        let mag: f64 = terms.iter().map(|t| t.norm()).sum();
        if !total.re.is_finite() || !total.im.is_finite() {
            return None;
        }
        Some((total, mag))
    }
}

/// `R` restricted to each residue class `n ≡ r (mod period)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub period: u32,
    pub by_residue: Vec<CycRat>,
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        self.by_residue.iter().all(Field::is_zero)
    }

    pub fn at(&self, r: i64) -> &CycRat {
        &self.by_residue[r.rem_euclid(self.period as i64) as usize]
    }

    /// The residual as a single rational function when no residue splitting
    /// is involved.
    pub fn as_rational(&self) -> Option<RatFun> {
        self.by_residue
            .iter()
            .skip(1)
            .all(|x| x == &self.by_residue[0])
            .then_some(())?;
        self.by_residue[0]
            .simplified()
            .base_value()
            .cloned()
            .or_else(|| Field::is_zero(&self.by_residue[0]).then(|| RatFun::from_int(0)))
    }

    pub fn add(&self, o: &Residual) -> Residual {
        let l = num_integer::lcm(self.period, o.period);
        Residual {
            period: l,
            by_residue: (0..l as i64)
                .map(|r| Field::add(self.at(r), o.at(r)))
                .collect(),
        }
    }

    pub fn same_as(&self, o: &Residual) -> bool {
        let l = num_integer::lcm(self.period, o.period) as i64;
        (0..l).all(|r| self.at(r) == o.at(r))
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let parts: Vec<String> = self
            .by_residue
            .iter()
            .enumerate()
            .map(|(r, c)| format!("n≡{r} (mod {}): {}", self.period, cyc_text(c)))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub(crate) fn check_degree(g: &SymmetryGenerator, max_degree: usize) -> Result<()> {
    if g.degree() > max_degree {
        return Err(Error::DegreeTooHigh {
            degree: g.degree(),
            max: max_degree,
        });
    }
    Ok(())
}

/// Reduce a generator's coefficients by the equation's assumption equalities.
pub(crate) fn reduce_generator(
    eq: &DifferenceEquation,
    g: &SymmetryGenerator,
) -> Result<SymmetryGenerator> {
    if eq.substitutions().is_empty() {
        return Ok(g.clone());
    }
    let failed = std::cell::Cell::new(false);
    let out = g.map_coeffs(&|c| {
        eq.reduce(c).unwrap_or_else(|_| {
            failed.set(true);
            c.clone()
        })
    });
    if failed.get() {
        return Err(Error::IdenticallySingular);
    }
    Ok(out)
}

/// Numerator `D^M·R` on the residue class `r` of `period`.
fn numerator_on(form: &ResidualForm, g: &SymmetryGenerator, r: i64, period: u32) -> Result<CycRat> {
    let mut acc = CycRat::zero();
    let p = form.order;
    for (j, row) in form.alpha.iter().enumerate() {
        let seq = g.coeff(j);
        if seq.is_zero() {
            continue;
        }
        for s in 0..=p {
            let v = seq.shift(s as i64).residue(r, period)?;
            let poly = &row[s as usize];
            acc = Field::add(&acc, &v.map(|x| x.mul_poly(poly)));
        }
    }
    for (c, poly) in g.xi.iter().zip(&form.xi) {
        if !c.is_zero() {
            acc = Field::add(&acc, &CycRat::from_base(c.mul_poly(poly)));
        }
    }
    Ok(acc)
}

pub(crate) fn residual_numerators(
    form: &ResidualForm,
    g: &SymmetryGenerator,
) -> Result<(u32, Vec<CycRat>)> {
    let period = g.root_period().ok_or(Error::Aperiodic)?;
    let nums = (0..period as i64)
        .map(|r| numerator_on(form, g, r, period))
        .collect::<Result<Vec<_>>>()?;
    Ok((period, nums))
}

/// `R = S⁽ᵖ⁾Q − ξ·∂ω/∂n − Σ_s Q(n+s, U(s))·∂ω/∂U(s)` in canonical form,
/// split by residue class when the coefficients are periodic.
pub fn residual(eq: &DifferenceEquation, g: &SymmetryGenerator) -> Result<Residual> {
    residual_with(eq, g, DEFAULT_MAX_DEGREE)
}

pub fn residual_with(
    eq: &DifferenceEquation,
    g: &SymmetryGenerator,
    max_degree: usize,
) -> Result<Residual> {
    check_degree(g, max_degree)?;
    let g = reduce_generator(eq, g)?;
    let form = ResidualForm::new(eq, g.degree());
    let (period, nums) = residual_numerators(&form, &g)?;
    let dm = RatFun::from_poly(form.denom.clone());
    let by_residue = nums
        .into_iter()
        .map(|c| {
            c.map(|x| x.div_rf(&dm).expect("nonzero denominator"))
                .simplified()
        })
        .collect();
    Ok(Residual { period, by_residue })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqform::SequenceClosedForm;
    use crate::symexpr::parse_ratfun;

    fn dp1(a: &str, b: &str, c: &str) -> DifferenceEquation {
        DifferenceEquation::new(&format!("-u(0)-u(1)+({a}*n+{b})/u(1)+{c}"), 2, &[], &[]).unwrap()
    }

    #[test]
    fn scaling_is_symmetry_of_linear_map() {
        let eq = dp1("0", "0", "0");
        let g = SymmetryGenerator::monomial(SequenceClosedForm::constant_gq(1.into()), 1, "");
        assert!(residual(&eq, &g).unwrap().is_zero());
    }

    #[test]
    fn u_squared_is_not_a_characteristic_of_minus_u() {
        let eq = DifferenceEquation::new("-u(0)", 2, &[], &[]).unwrap();
        let g = SymmetryGenerator::monomial(SequenceClosedForm::constant_gq(1.into()), 2, "");
        let r = residual(&eq, &g).unwrap();
        assert_eq!(r.as_rational().unwrap(), parse_ratfun("2*u(0)^2").unwrap());
    }

    #[test]
    fn affine_xi_for_nonautonomous_map() {
        let eq =
            DifferenceEquation::new("-u(0)-u(1)+(a*n+b)/u(1)", 2, &["a", "b"], &["a!=0"]).unwrap();
        let g = SymmetryGenerator::new(
            [parse_ratfun("2*b").unwrap(), parse_ratfun("2*a").unwrap()],
            vec![
                SequenceClosedForm::zero(),
                SequenceClosedForm::constant_rat(parse_ratfun("a").unwrap()),
            ],
            "",
        );
        assert!(residual(&eq, &g).unwrap().is_zero());
        let bad = SymmetryGenerator::monomial(SequenceClosedForm::constant_gq(1.into()), 1, "");
        assert!(!residual(&eq, &bad).unwrap().is_zero());
    }

    #[test]
    fn degree_limit() {
        let eq = dp1("0", "0", "0");
        let g = SymmetryGenerator::monomial(SequenceClosedForm::constant_gq(1.into()), 3, "");
        assert!(matches!(
            residual(&eq, &g),
            Err(Error::DegreeTooHigh { degree: 3, max: 2 })
        ));
        assert!(residual_with(&eq, &g, 3).is_ok());
    }
}

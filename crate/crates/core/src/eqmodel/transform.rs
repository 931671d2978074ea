use std::collections::BTreeMap;

use num_complex::Complex64;

use super::equation::DifferenceEquation;
use crate::error::{Error, Result};
use crate::num::Gq;
use crate::symexpr::{Poly, RatFun, Var};

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Transform {
    /// `w = 1/u`
    Reciprocal,
    /// `w = ln u - δ` with the offset `δ` chosen to remove the constant term.
    Log,
    /// `w = s·u + t`
    Affine(Gq, Gq),
}

/// `δ = ln(kappa) / divisor`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogOffset {
    pub kappa: RatFun,
    pub divisor: Gq,
}

impl LogOffset {
    pub fn value(&self, params: &BTreeMap<String, Gq>) -> Option<Complex64> {
        let k = self.kappa.eval_complex(&|v| {
            params
                .get(&v.name())
                .map_or(Complex64::new(f64::NAN, 0.0), Gq::to_complex)
        })?;
        if !k.re.is_finite() {
            return None;
        }
        Some(k.ln() / self.divisor.to_complex())
    }

    pub fn text(&self) -> String {
        if self.divisor.is_one() {
            format!("ln({})", self.kappa)
        } else {
            format!("ln({})/{}", self.kappa, self.divisor)
        }
    }
}

#[derive(Clone, Debug)]
pub struct Transformed {
    pub equation: DifferenceEquation,
    pub transform: Transform,
    pub log_offset: Option<LogOffset>,
}

impl Transformed {
    pub fn forward_exact(&self, u: &Gq) -> Option<Gq> {
        match &self.transform {
            Transform::Reciprocal => u.inv(),
            Transform::Affine(s, t) => Some(&(s * u) + t),
            Transform::Log => None,
        }
    }

    pub fn backward_exact(&self, w: &Gq) -> Option<Gq> {
        match &self.transform {
            Transform::Reciprocal => w.inv(),
            Transform::Affine(s, t) => Some(&(w - t) * &s.inv()?),
            Transform::Log => None,
        }
    }

    pub fn forward(&self, u: Complex64, params: &BTreeMap<String, Gq>) -> Option<Complex64> {
        match &self.transform {
            Transform::Reciprocal => (u.norm() != 0.0).then(|| 1.0 / u),
            Transform::Affine(s, t) => Some(s.to_complex() * u + t.to_complex()),
            Transform::Log => {
                let d = self
                    .log_offset
                    .as_ref()
                    .map_or(Some(Complex64::new(0.0, 0.0)), |o| o.value(params))?;
                (u.norm() != 0.0).then(|| u.ln() - d)
            }
        }
    }

    pub fn backward(&self, w: Complex64, params: &BTreeMap<String, Gq>) -> Option<Complex64> {
        match &self.transform {
            Transform::Reciprocal => (w.norm() != 0.0).then(|| 1.0 / w),
            Transform::Affine(s, t) => Some((w - t.to_complex()) / s.to_complex()),
            Transform::Log => {
                let d = self
                    .log_offset
                    .as_ref()
                    .map_or(Some(Complex64::new(0.0, 0.0)), |o| o.value(params))?;
                Some((w + d).exp())
            }
        }
    }
}

fn rebuild(
    eq: &DifferenceEquation,
    omega: RatFun,
    transform: Transform,
    log_offset: Option<LogOffset>,
) -> Result<Transformed> {
    let assumptions = eq.assumptions().to_vec();
    let equation =
        DifferenceEquation::from_rational(omega, eq.order(), eq.params().to_vec(), assumptions)?;
    Ok(Transformed {
        equation,
        transform,
        log_offset,
    })
}

fn map_us(f: &RatFun, order: u32, g: impl Fn(Var) -> RatFun) -> Result<RatFun> {
    // Rename to fresh high indices first so substitutions do not interfere.
    let far = 1000;
    let mut h = f.rename(|v| if v.is_u() { v.shifted(far) } else { v });
    for k in 0..order {
        h = h.substitute(Var::u(k + far), &g(Var::u(k)))?;
    }
    Ok(h)
}

pub fn transform_equation(eq: &DifferenceEquation, t: &Transform) -> Result<Transformed> {
    let omega = eq.omega();
    let p = eq.order();
    match t {
        Transform::Reciprocal => {
            if omega.num().is_zero() {
                return Err(Error::Invalid(
                    "reciprocal transform needs a nonzero right-hand side".into(),
                ));
            }
            let inv_u = map_us(omega, p, |v| {
                RatFun::var(v).inv_rf().expect("nonzero variable")
            })?;
            let w = inv_u.inv_rf().ok_or(Error::IdenticallySingular)?;
            rebuild(eq, w, t.clone(), None)
        }
        Transform::Affine(s, shift) => {
            let sinv = s
                .inv()
                .ok_or_else(|| Error::Invalid("affine scale must be nonzero".into()))?;
            let sub = map_us(omega, p, |v| {
                RatFun::var(v)
                    .sub_rf(&RatFun::constant(shift.clone()))
                    .scale(&sinv)
            })?;
            let w = sub.scale(s).add_rf(&RatFun::constant(shift.clone()));
            rebuild(eq, w, t.clone(), None)
        }
        Transform::Log => {
            let (num, den) = (omega.num(), omega.den());
            if num.len() != 1 || den.len() != 1 {
                return Err(Error::NotLogLinear(
                    "right-hand side is not a monomial ratio".into(),
                ));
            }
            if omega.has_var(Var::N) {
                return Err(Error::NotLogLinear("right-hand side depends on n".into()));
            }
            let mut exps = vec![0i64; p as usize];
            let mut kappa_num = Poly::constant(num.terms()[0].1.clone());
            let mut kappa_den = Poly::constant(den.terms()[0].1.clone());
            for (poly, sign, kappa) in [(num, 1i64, &mut kappa_num), (den, -1i64, &mut kappa_den)] {
                for &(v, e) in &poly.terms()[0].0 {
                    if let Some(k) = v.u_index() {
                        exps[k as usize] += sign * e as i64;
                    } else {
                        *kappa = kappa.mul(&Poly::var(v).pow(e));
                    }
                }
            }
            let kappa = RatFun::new(kappa_num, kappa_den).expect("nonzero");
            let mut lin = RatFun::from_int(0);
            for (k, e) in exps.iter().enumerate() {
                if *e != 0 {
                    lin = lin.add_rf(&RatFun::var(Var::u(k as u32)).scale(&Gq::from_int(*e)));
                }
            }
            let divisor = Gq::from_int(1 - exps.iter().sum::<i64>());
            let offset = if kappa == RatFun::from_int(1) {
                None
            } else if divisor.is_zero() {
                return Err(Error::NotLogLinear(
                    "the constant ln-term cannot be absorbed by an offset".into(),
                ));
            } else {
                Some(LogOffset { kappa, divisor })
            };
            rebuild(eq, lin, t.clone(), offset)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse_ratfun;

    #[test]
    fn reciprocal_of_dp4_zero_is_dp1_zero() {
        let eq = DifferenceEquation::new("(-u(0)*u(1))/(u(0)+u(1))", 2, &[], &[]).unwrap();
        let t = transform_equation(&eq, &Transform::Reciprocal).unwrap();
        assert_eq!(t.equation.omega(), &parse_ratfun("-u(0)-u(1)").unwrap());
        let back = transform_equation(&t.equation, &Transform::Reciprocal).unwrap();
        assert_eq!(back.equation.omega(), eq.omega());
    }

    #[test]
    fn reciprocal_of_dp5() {
        let eq = DifferenceEquation::new("u(0)*u(1)/(2*u(1)*u(0)-u(0)-u(1))", 2, &[], &[]).unwrap();
        let t = transform_equation(&eq, &Transform::Reciprocal).unwrap();
        assert_eq!(t.equation.omega(), &parse_ratfun("2-u(0)-u(1)").unwrap());
    }

    #[test]
    fn log_of_period_four_map() {
        let eq = DifferenceEquation::new("a/u(0)", 2, &["a"], &[]).unwrap();
        let t = transform_equation(&eq, &Transform::Log).unwrap();
        assert_eq!(t.equation.omega(), &parse_ratfun("-u(0)").unwrap());
        let off = t.log_offset.clone().unwrap();
        assert_eq!(off.divisor, Gq::from_int(2));
        assert_eq!(off.text(), "ln(a)/2");
        assert!(matches!(
            transform_equation(
                &DifferenceEquation::new("u(0)+u(1)", 2, &[], &[]).unwrap(),
                &Transform::Log
            ),
            Err(Error::NotLogLinear(_))
        ));
    }

    #[test]
    fn affine_roundtrip() {
        let eq = DifferenceEquation::new("2-u(0)-u(1)", 2, &[], &[]).unwrap();
        let t =
            transform_equation(&eq, &Transform::Affine(Gq::from_int(3), Gq::from_int(-2))).unwrap();
        let u = Gq::from_frac(5, 7);
        assert_eq!(t.backward_exact(&t.forward_exact(&u).unwrap()).unwrap(), u);
    }
}

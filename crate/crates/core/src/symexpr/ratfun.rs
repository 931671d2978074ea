//! Rational functions in canonical form: coprime numerator and denominator,
//! denominator with grlex-leading coefficient 1, zero stored as 0/1.

use num_complex::Complex64;

use super::poly::{gcd, Poly};
use super::var::Var;
use crate::error::{Error, Result};
use crate::num::{Field, Gq};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Gq) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn from_int(v: i64) -> Self {
        RatFun::constant(Gq::from_int(v))
    }

    pub fn var(v: Var) -> Self {
        RatFun::from_poly(Poly::var(v))
    }

    /// Canonicalize `num/den`; `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFun {
                num,
                den: Poly::one(),
            });
        }
        if den.is_constant() {
            let c = den.lead_coeff().inv()?;
            return Some(RatFun {
                num: num.scale(&c),
                den: Poly::one(),
            });
        }
        let g = gcd(&num, &den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        Some(RatFun::normalized(n, d))
    }

    /// Assumes `num` and `den` coprime; only fixes the leading coefficient.
    fn normalized(num: Poly, den: Poly) -> Self {
        let lc = den.lead_coeff();
        if lc.is_one() {
            RatFun { num, den }
        } else {
            let inv = lc.inv().expect("nonzero denominator");
            RatFun {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<Gq> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn has_var(&self, v: Var) -> bool {
        self.num.has_var(v) || self.den.has_var(v)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn add_rf(&self, o: &RatFun) -> RatFun {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return RatFun::from_poly(self.num.add(&o.num));
            }
            return RatFun::new(self.num.add(&o.num), self.den.clone()).expect("nonzero");
        }
        if self.den.is_one() {
            return RatFun::normalized(self.num.mul(&o.den).add(&o.num), o.den.clone());
        }
        if o.den.is_one() {
            return RatFun::normalized(o.num.mul(&self.den).add(&self.num), self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            return RatFun::normalized(n, self.den.mul(&o.den));
        }
        let d1 = self.den.div_exact(&g).expect("divides");
        let d2 = o.den.div_exact(&g).expect("divides");
        let n = self.num.mul(&d2).add(&o.num.mul(&d1));
        if n.is_zero() {
            return RatFun::from_int(0);
        }
        let h = gcd(&n, &g);
        if h.is_one() {
            RatFun::normalized(n, d1.mul(&d2).mul(&g))
        } else {
            let n = n.div_exact(&h).expect("divides");
            let g = g.div_exact(&h).expect("divides");
            RatFun::normalized(n, d1.mul(&d2).mul(&g))
        }
    }

    pub fn mul_rf(&self, o: &RatFun) -> RatFun {
        if self.num.is_zero() || o.num.is_zero() {
            return RatFun::from_int(0);
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFun::from_poly(self.num.mul(&o.num));
        }
        let g1 = if o.den.is_one() {
            Poly::one()
        } else {
            gcd(&self.num, &o.den)
        };
        let g2 = if self.den.is_one() {
            Poly::one()
        } else {
            gcd(&o.num, &self.den)
        };
        let n1 = self.num.div_exact(&g1).expect("divides");
        let d2 = o.den.div_exact(&g1).expect("divides");
        let n2 = o.num.div_exact(&g2).expect("divides");
        let d1 = self.den.div_exact(&g2).expect("divides");
        RatFun::normalized(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFun {
        self.mul_rf(&RatFun::from_poly(p.clone()))
    }

    pub fn scale(&self, c: &Gq) -> RatFun {
        if c.is_zero() {
            return RatFun::from_int(0);
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn neg_rf(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub_rf(&self, o: &RatFun) -> RatFun {
        self.add_rf(&o.neg_rf())
    }

    pub fn inv_rf(&self) -> Option<RatFun> {
        if self.num.is_zero() {
            return None;
        }
        Some(RatFun::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div_rf(&self, o: &RatFun) -> Option<RatFun> {
        Some(self.mul_rf(&o.inv_rf()?))
    }

    pub fn powi(&self, e: i64) -> Option<RatFun> {
        let base = if e < 0 { self.inv_rf()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Some(RatFun {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn diff(&self, v: Var) -> RatFun {
        if !self.den.has_var(v) {
            return RatFun {
                num: self.num.diff(v),
                den: self.den.clone(),
            };
        }
        let n = self
            .num
            .diff(v)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.diff(v)));
        RatFun::new(n, self.den.mul(&self.den)).expect("nonzero")
    }

    /// `n ↦ n+i`, `U(k) ↦ U(k+i)`. The map is a ring automorphism, so
    /// coprimality is preserved and only the leading coefficient is refreshed.
    pub fn shift(&self, i: u32) -> RatFun {
        RatFun::normalized(self.num.shift(i), self.den.shift(i))
    }

    pub fn shift_n(&self, s: i64) -> RatFun {
        RatFun::normalized(self.num.shift_n(s), self.den.shift_n(s))
    }

    /// Substitute `v := g`.
    pub fn substitute(&self, v: Var, g: &RatFun) -> Result<RatFun> {
        if !self.has_var(v) {
            return Ok(self.clone());
        }
        let n = compose_rf(&self.num, v, g);
        let d = compose_rf(&self.den, v, g);
        if d.num.is_zero() {
            return Err(Error::IdenticallySingular);
        }
        Ok(n.div_rf(&d).expect("nonzero"))
    }

    pub fn rename(&self, f: impl Fn(Var) -> Var + Copy) -> RatFun {
        RatFun::new(self.num.rename(f), self.den.rename(f)).expect("nonzero")
    }

    pub fn eval<F: Field>(&self, value: &dyn Fn(Var) -> F) -> Option<F> {
        let d = self.den.eval(value);
        let n = self.num.eval(value);
        n.div(&d)
    }

    pub fn eval_complex(&self, value: &dyn Fn(Var) -> Complex64) -> Option<Complex64> {
        let d = self.den.eval_complex(value);
        if d.norm() == 0.0 {
            return None;
        }
        Some(self.num.eval_complex(value) / d)
    }

    /// Coefficients of `n^k` when the denominator is free of `n`.
    pub fn n_poly_coeffs(&self) -> Option<Vec<RatFun>> {
        if self.den.has_var(Var::N) {
            return None;
        }
        Some(
            self.num
                .coeffs_in(Var::N)
                .into_iter()
                .map(|c| RatFun::normalized_checked(c, self.den.clone()))
                .collect(),
        )
    }

    fn normalized_checked(num: Poly, den: Poly) -> RatFun {
        RatFun::new(num, den).expect("nonzero")
    }

    pub fn conj_rf(&self) -> RatFun {
        let c = |p: &Poly| {
            Poly::from_terms(
                p.terms()
                    .iter()
                    .map(|(m, x)| (m.clone(), x.conj()))
                    .collect(),
            )
        };
        RatFun::normalized(c(&self.num), c(&self.den))
    }
}

fn compose_rf(p: &Poly, v: Var, g: &RatFun) -> RatFun {
    let cs = p.coeffs_in(v);
    let mut acc = RatFun::from_int(0);
    for c in cs.iter().rev() {
        acc = acc.mul_rf(g).add_rf(&RatFun::from_poly(c.clone()));
    }
    acc
}

impl Field for RatFun {
    fn zero() -> Self {
        RatFun::from_int(0)
    }
    fn one() -> Self {
        RatFun::from_int(1)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self.add_rf(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_rf(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_rf(o)
    }
    fn neg(&self) -> Self {
        self.neg_rf()
    }
    fn inv(&self) -> Option<Self> {
        self.inv_rf()
    }
    fn from_gq(g: &Gq) -> Self {
        RatFun::constant(g.clone())
    }
    fn conj(&self) -> Self {
        self.conj_rf()
    }
    fn mul_gq(&self, g: &Gq) -> Self {
        self.scale(g)
    }
    fn complexity(&self) -> usize {
        self.num.height() + self.den.height()
    }
    fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_to_one() {
        let u0 = RatFun::var(Var::u(0));
        let u1 = RatFun::var(Var::u(1));
        let e = u0
            .add_rf(&u1)
            .div_rf(&u0)
            .unwrap()
            .sub_rf(&u1.div_rf(&u0).unwrap());
        assert!(Field::is_one(&e));
    }

    #[test]
    fn denominator_is_monic() {
        let u0 = Poly::var(Var::u(0));
        let r = RatFun::new(Poly::one(), u0.scale(&Gq::from_int(3))).unwrap();
        assert!(r.den().lead_coeff().is_one());
        assert_eq!(r.num().constant_value().unwrap(), Gq::from_frac(1, 3));
    }

    #[test]
    fn substitute_into_zero_denominator_fails() {
        let f = RatFun::var(Var::u(1)).inv_rf().unwrap();
        assert!(matches!(
            f.substitute(Var::u(1), &RatFun::from_int(0)),
            Err(Error::IdenticallySingular)
        ));
    }
}

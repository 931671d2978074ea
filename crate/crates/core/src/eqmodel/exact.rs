//! Exact iteration over Q(i) by evaluating `ω` in Gaussian integers over a
//! common denominator, so that each step reduces one fraction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::num::Gq;
use crate::symexpr::{Poly, RatFun, Var};

#[derive(Clone, Debug, PartialEq)]
struct GInt {
    re: BigInt,
    im: BigInt,
}

impl GInt {
    fn zero() -> Self {
        GInt {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn real(re: BigInt) -> Self {
        GInt {
            re,
            im: BigInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add_assign(&mut self, o: &GInt) {
        self.re += &o.re;
        self.im += &o.im;
    }

    fn mul(&self, o: &GInt) -> GInt {
        if self.im.is_zero() && o.im.is_zero() {
            return GInt::real(&self.re * &o.re);
        }
        GInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scale(&self, k: &BigInt) -> GInt {
        GInt {
            re: &self.re * k,
            im: &self.im * k,
        }
    }
}

/// `g = p/q` with `p` a Gaussian integer and `q > 0`.
fn split(g: &Gq) -> (GInt, BigInt) {
    let q = g.re.denom().lcm(g.im.denom());
    let p = GInt {
        re: g.re.numer() * (&q / g.re.denom()),
        im: g.im.numer() * (&q / g.im.denom()),
    };
    (p, q)
}

/// `ω` with integer coefficients and per-variable degree bounds.
pub(super) struct Homogenized {
    vars: Vec<Var>,
    bound: Vec<u32>,
    num: Vec<(Vec<u32>, GInt)>,
    den: Vec<(Vec<u32>, GInt)>,
}

impl Homogenized {
    pub(super) fn new(omega: &RatFun) -> Self {
        let mut vars: Vec<Var> = omega.vars().into_iter().collect();
        vars.sort();
        let bound: Vec<u32> = vars
            .iter()
            .map(|&v| omega.num().degree_in(v).max(omega.den().degree_in(v)))
            .collect();
        let mut lcm = BigInt::one();
        for p in [omega.num(), omega.den()] {
            for (_, c) in p.terms() {
                lcm = lcm.lcm(&split(c).1);
            }
        }
        let terms = |p: &Poly| -> Vec<(Vec<u32>, GInt)> {
            p.terms()
                .iter()
                .map(|(m, c)| {
                    let exps = vars
                        .iter()
                        .map(|v| m.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e))
                        .collect();
                    let (cp, cq) = split(c);
                    (exps, cp.scale(&(&lcm / cq)))
                })
                .collect()
        };
        Homogenized {
            num: terms(omega.num()),
            den: terms(omega.den()),
            vars,
            bound,
        }
    }

    /// `ω` at the given point, or `None` when the denominator vanishes.
    pub(super) fn eval(&self, value: &dyn Fn(Var) -> Gq) -> Option<Gq> {
        // powers[i][k] = p_i^k · q_i^(bound_i − k)
        let powers: Vec<Vec<GInt>> = self
            .vars
            .iter()
            .zip(&self.bound)
            .map(|(&v, &d)| {
                let (p, q) = split(&value(v));
                let mut pp = vec![GInt::real(BigInt::one())];
                let mut qq = vec![BigInt::one()];
                for k in 1..=d as usize {
                    pp.push(pp[k - 1].mul(&p));
                    qq.push(&qq[k - 1] * &q);
                }
                (0..=d as usize)
                    .map(|k| pp[k].scale(&qq[d as usize - k]))
                    .collect()
            })
            .collect();
        let sum = |terms: &[(Vec<u32>, GInt)]| {
            let mut acc = GInt::zero();
            for (exps, c) in terms {
                let mut t = c.clone();
                for (i, &e) in exps.iter().enumerate() {
                    t = t.mul(&powers[i][e as usize]);
                }
                acc.add_assign(&t);
            }
            acc
        };
        let n = sum(&self.num);
        let d = sum(&self.den);
        if d.is_zero() {
            return None;
        }
        let norm = &d.re * &d.re + &d.im * &d.im;
        let re = &n.re * &d.re + &n.im * &d.im;
        let im = &n.im * &d.re - &n.re * &d.im;
        Some(Gq::new(
            BigRational::new(re, norm.clone()),
            BigRational::new(im, norm),
        ))
    }
}

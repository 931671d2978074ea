//! Gaussian rationals `p/q + (r/s)·i` with exact big-integer parts.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An element of Q(i). Both parts are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gq {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gq {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gq { re, im }
    }

    pub fn zero() -> Self {
        Gq {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Gq::from_int(1)
    }

    pub fn i() -> Self {
        Gq {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Gq {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        Gq {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::zero(),
        }
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Gq {
            re: BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    pub fn real(re: BigRational) -> Self {
        Gq {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn conj(&self) -> Self {
        Gq {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|^2, always a nonnegative rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(Gq {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        if e < 0 {
            return self.inv().map(|x| x.pow_u(e.unsigned_abs()));
        }
        Some(self.pow_u(e as u64))
    }

    pub fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Gq::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Multiply by i^k.
    pub fn mul_i_pow(&self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => Gq {
                re: -self.im.clone(),
                im: self.re.clone(),
            },
            2 => -self.clone(),
            _ => Gq {
                re: self.im.clone(),
                im: -self.re.clone(),
            },
        }
    }

    /// Rough size used to prefer simple pivots.
    pub fn height(&self) -> usize {
        (self.re.numer().bits()
            + self.re.denom().bits()
            + self.im.numer().bits()
            + self.im.denom().bits()) as usize
    }

    /// Closest Gaussian rational with denominators bounded by `max_den`.
    pub fn approximate(z: Complex64, max_den: i64) -> Option<Gq> {
        Some(Gq {
            re: approx_rational(z.re, max_den)?,
            im: approx_rational(z.im, max_den)?,
        })
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down huge parts before converting.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                if r.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }
}

/// Continued-fraction best approximation with bounded denominator.
pub fn approx_rational(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut y = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = y.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = y - a as f64;
        if frac < 1e-14 {
            break;
        }
        y = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(sign * p1), BigInt::from(q1)))
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gq {
    /// `p/q+r/s*i`, with `i`, `-i` and pure parts shortened.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &BigRational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rat(im))
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", fmt_rat(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}", im_part(&self.im))
        } else if self.im.is_positive() {
            write!(f, "{}+{}", fmt_rat(&self.re), im_part(&self.im))
        } else {
            write!(f, "{}{}", fmt_rat(&self.re), im_part(&self.im))
        }
    }
}

impl<'a> Add<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn add(self, o: &Gq) -> Gq {
        Gq {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl<'a> Sub<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn sub(self, o: &Gq) -> Gq {
        Gq {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl<'a> Mul<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn mul(self, o: &Gq) -> Gq {
        if self.im.is_zero() && o.im.is_zero() {
            return Gq {
                re: &self.re * &o.re,
                im: BigRational::zero(),
            };
        }
        Gq {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Div<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn div(self, o: &Gq) -> Gq {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

impl Add for Gq {
    type Output = Gq;
    fn add(self, o: Gq) -> Gq {
        &self + &o
    }
}

impl Sub for Gq {
    type Output = Gq;
    fn sub(self, o: Gq) -> Gq {
        &self - &o
    }
}

impl Mul for Gq {
    type Output = Gq;
    fn mul(self, o: Gq) -> Gq {
        &self * &o
    }
}

impl Div for Gq {
    type Output = Gq;
    fn div(self, o: Gq) -> Gq {
        &self / &o
    }
}

impl Neg for Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl From<i64> for Gq {
    fn from(v: i64) -> Self {
        Gq::from_int(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(Gq::from_parts((1, 2), (3, 4)).to_string(), "1/2+3/4*i");
        assert_eq!(Gq::from_parts((1, 2), (-3, 4)).to_string(), "1/2-3/4*i");
        assert_eq!(Gq::i().to_string(), "i");
        assert_eq!((-Gq::i()).to_string(), "-i");
        assert_eq!(Gq::from_int(-3).to_string(), "-3");
        assert_eq!(Gq::zero().to_string(), "0");
    }

    #[test]
    fn i_squared() {
        assert_eq!(&Gq::i() * &Gq::i(), Gq::from_int(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let z = Gq::from_parts((2, 3), (-5, 7));
        assert!((&z * &z.inv().unwrap()).is_one());
        assert!(Gq::zero().inv().is_none());
    }

    #[test]
    fn approximation_recovers_small_fractions() {
        let z = Gq::approximate(Complex64::new(-0.5, 5.0 / 3.0), 1000).unwrap();
        assert_eq!(z, Gq::from_parts((-1, 2), (5, 3)));
    }
}

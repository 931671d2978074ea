//! Scaled roots of unity `s·e^{2πik/m}` with `s ∈ Q(i)`.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Signed;

use crate::num::{Cyc, CycQ, Field, Gq};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RootOfUnityScalar {
    scale: Gq,
    k: u32,
    m: u32,
}

impl RootOfUnityScalar {
    /// Canonicalize `scale·e^{2πik/m}`. The scale is rotated by a power of
    /// `i` into the quadrant `re > 0, im ≥ 0`; the angle absorbs the unit.
    pub fn new(scale: Gq, k: i64, m: u32) -> Self {
        assert!(
            !scale.is_zero(),
            "a root-of-unity scalar needs a nonzero scale"
        );
        assert!(m > 0, "root order must be positive");
        let mut s = scale;
        let mut j = 0i64;
        while !(s.re.is_positive() && !s.im.is_negative()) {
            s = s.mul_i_pow(-1);
            j += 1;
        }
        // angle = k/m + j/4
        let den = 4 * m as i64;
        let num = (4 * k + j * m as i64).rem_euclid(den);
        let g = num.gcd(&den);
        let (k, m) = if num == 0 {
            (0, 1)
        } else {
            ((num / g) as u32, (den / g) as u32)
        };
        RootOfUnityScalar { scale: s, k, m }
    }

    pub fn root(k: i64, m: u32) -> Self {
        Self::new(Gq::one(), k, m)
    }

    pub fn one() -> Self {
        Self::root(0, 1)
    }

    pub fn from_gq(s: Gq) -> Self {
        Self::new(s, 0, 1)
    }

    pub fn scale(&self) -> &Gq {
        &self.scale
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_one(&self) -> bool {
        self.k == 0 && self.scale.is_one()
    }

    /// True when the value is a root of unity (scale exactly 1).
    pub fn is_pure_root(&self) -> bool {
        self.scale.is_one()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let l = self.m.lcm(&o.m);
        let k = self.k as i64 * (l / self.m) as i64 + o.k as i64 * (l / o.m) as i64;
        Self::new(&self.scale * &o.scale, k, l)
    }

    pub fn inv(&self) -> Self {
        Self::new(
            self.scale.inv().expect("nonzero scale"),
            -(self.k as i64),
            self.m,
        )
    }

    pub fn pow(&self, e: i64) -> Self {
        let s = self.scale.pow(e).expect("nonzero scale");
        let k = (self.k as i64 * e).rem_euclid(self.m as i64);
        Self::new(s, k, self.m)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.scale.conj(), -(self.k as i64), self.m)
    }

    pub fn to_cyc<F: Field>(&self) -> Cyc<F> {
        let z: Cyc<F> = Cyc::root_of_unity(self.k as i64, self.m);
        z.mul_gq(&self.scale)
    }

    /// Exact `λ^e`.
    pub fn pow_cyc<F: Field>(&self, e: i64) -> Cyc<F> {
        self.pow(e).to_cyc()
    }

    pub fn to_complex(&self) -> Complex64 {
        self.scale.to_complex()
            * Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * self.k as f64 / self.m as f64,
            )
    }

    /// Recognize a cyclotomic number as a scaled root of unity.
    pub fn from_cyc(x: &CycQ) -> Option<Self> {
        if Field::is_zero(x) {
            return None;
        }
        let x = x.simplified();
        let n = x.order();
        for k in 0..n as i64 {
            let y = Field::mul(&x, &CycQ::root_of_unity(-k, n));
            if let Some(s) = y.base_value() {
                return Some(Self::new(s.clone(), k, n));
            }
        }
        None
    }

    /// Recognize a numerically computed root of `poly` (lowest coefficient
    /// first) as a scaled root of unity, confirmed by exact evaluation.
    pub fn recognize(z: Complex64, poly: &[Gq], max_order: u32) -> Option<Self> {
        if z.norm() < 1e-300 {
            return None;
        }
        for m in 1..=max_order {
            for k in 0..m {
                if k.gcd(&m) != 1 && !(k == 0 && m == 1) {
                    continue;
                }
                let w = z * Complex64::from_polar(
                    1.0,
                    -2.0 * std::f64::consts::PI * k as f64 / m as f64,
                );
                if w.re <= 0.0 || w.im < -1e-9 * w.norm() {
                    continue;
                }
                let Some(s) = Gq::approximate(w, 100_000) else {
                    continue;
                };
                if s.is_zero() || (s.to_complex() - w).norm() > 1e-8 * w.norm().max(1.0) {
                    continue;
                }
                let cand = Self::new(s, k as i64, m);
                if eval_poly_at(poly, &cand) {
                    return Some(cand);
                }
            }
        }
        None
    }

    fn sort_key(&self) -> (u32, u32) {
        (self.m, self.k)
    }
}

fn eval_poly_at(poly: &[Gq], lam: &RootOfUnityScalar) -> bool {
    let x: CycQ = lam.to_cyc();
    let mut acc = CycQ::zero();
    for c in poly.iter().rev() {
        acc = Field::add(&Field::mul(&acc, &x), &CycQ::from_gq(c));
    }
    Field::is_zero(&acc)
}

impl Ord for RootOfUnityScalar {
    fn cmp(&self, o: &Self) -> Ordering {
        self.sort_key()
            .cmp(&o.sort_key())
            .then_with(|| self.scale.re.cmp(&o.scale.re))
            .then_with(|| self.scale.im.cmp(&o.scale.im))
    }
}

impl PartialOrd for RootOfUnityScalar {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for RootOfUnityScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("rou({},{})", self.k, self.m);
        match (self.scale.is_one(), self.k == 0) {
            (true, _) => f.write_str(&root),
            (false, true) => {
                if self.scale.is_real() {
                    write!(f, "{}", self.scale)
                } else {
                    write!(f, "({})", self.scale)
                }
            }
            (false, false) => write!(f, "({})*{}", self.scale, root),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_are_absorbed() {
        let a = RootOfUnityScalar::new(Gq::i(), 0, 1);
        assert_eq!(a, RootOfUnityScalar::root(1, 4));
        let b = RootOfUnityScalar::new(Gq::from_int(-2), 1, 3);
        assert_eq!(b, RootOfUnityScalar::new(Gq::from_int(2), 5, 6));
        assert_eq!(RootOfUnityScalar::root(6, 4), RootOfUnityScalar::root(1, 2));
    }

    #[test]
    fn product_and_power() {
        let w = RootOfUnityScalar::root(1, 3);
        assert!(w.pow(3).is_one());
        assert_eq!(w.mul(&w.conj()), RootOfUnityScalar::one());
        assert_eq!(
            w.mul(&RootOfUnityScalar::root(1, 4)),
            RootOfUnityScalar::root(7, 12)
        );
    }

    #[test]
    fn recognition() {
        let poly = [Gq::one(), Gq::one(), Gq::one()];
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert_eq!(
            RootOfUnityScalar::recognize(z, &poly, 24),
            Some(RootOfUnityScalar::root(1, 3))
        );
        let sq2 = [Gq::from_int(-2), Gq::zero(), Gq::one()];
        let r = RootOfUnityScalar::recognize(Complex64::new(2f64.sqrt(), 0.0), &sq2, 24).unwrap();
        assert_eq!(r.scale(), &Gq::from_parts((1, 1), (1, 1)));
        assert!((r.to_cyc::<Gq>().to_complex() - Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-12);
        let exact =
            RootOfUnityScalar::from_cyc(&CycQ::root_of_unity(5, 12).mul_gq(&Gq::from_int(-3)))
                .unwrap();
        assert_eq!(exact, RootOfUnityScalar::new(Gq::from_int(3), 11, 12));
    }
}

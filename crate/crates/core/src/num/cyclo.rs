//! Cyclotomic extensions `F(ζ_N)` of a field containing Q(i).
//!
//! Elements are stored as coordinates in the power basis of
//! `F[x]/(m_N)`, where `4 | N` and `m_N` is the minimal polynomial of
//! `ζ_N = e^{2πi/N}` over Q(i). Values with different orders are lifted to
//! the least common multiple before any operation, so equality is exact.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use num_integer::Integer;
use once_cell::sync::Lazy;

use super::field::{solve, Field};
use super::gaussian::Gq;
use crate::symexpr::RatFun;

#[derive(Debug)]
pub struct CycData {
    pub order: u32,
    pub degree: usize,
    /// Monic minimal polynomial, lowest coefficient first.
    pub modulus: Vec<Gq>,
    /// `x^j mod m_N` for `j = 0..N`.
    pub powers: Vec<Vec<Gq>>,
}

static TABLE: Lazy<Mutex<HashMap<u32, Arc<CycData>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Order of the smallest admissible extension containing `ζ_m`.
pub fn admissible_order(m: u32) -> u32 {
    m.max(1).lcm(&4)
}

pub fn cyc_data(order: u32) -> Arc<CycData> {
    assert!(
        order.is_multiple_of(4) && order > 0,
        "cyclotomic order must be a positive multiple of 4"
    );
    if let Some(d) = TABLE.lock().expect("table poisoned").get(&order) {
        return d.clone();
    }
    let d = Arc::new(build(order));
    TABLE
        .lock()
        .expect("table poisoned")
        .insert(order, d.clone());
    d
}

fn build(order: u32) -> CycData {
    let n = order as u64;
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for k in 1..n {
        if k.gcd(&n) != 1 || k % 4 != 1 {
            continue;
        }
        let root = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * root;
        }
        poly = next;
    }
    let modulus: Vec<Gq> = poly
        .iter()
        .map(|c| Gq::from_parts((c.re.round() as i64, 1), (c.im.round() as i64, 1)))
        .collect();
    let degree = modulus.len() - 1;
    let mut powers = Vec::with_capacity(order as usize + 1);
    let mut cur = vec![Gq::zero(); degree];
    cur[0] = Gq::one();
    for _ in 0..=order {
        powers.push(cur.clone());
        // multiply by x
        let top = cur[degree - 1].clone();
        let mut next = vec![Gq::zero(); degree];
        for j in (1..degree).rev() {
            next[j] = cur[j - 1].clone();
        }
        if !top.is_zero() {
            for j in 0..degree {
                next[j] = &next[j] - &(&top * &modulus[j]);
            }
        }
        cur = next;
    }
    let wrap = powers.pop().expect("x^N computed");
    assert!(
        wrap == powers[0],
        "minimal polynomial of order {order} failed its exact check"
    );
    CycData {
        order,
        degree,
        modulus,
        powers,
    }
}

#[derive(Clone, Debug)]
pub struct Cyc<F: Field> {
    order: u32,
    coords: Vec<F>,
}

pub type CycQ = Cyc<Gq>;
pub type CycRat = Cyc<RatFun>;

impl<F: Field> Cyc<F> {
    pub fn from_base(x: F) -> Self {
        Cyc {
            order: 4,
            coords: vec![x],
        }
    }

    pub fn from_coords(order: u32, coords: Vec<F>) -> Self {
        let d = cyc_data(order);
        assert_eq!(
            coords.len(),
            d.degree,
            "coordinate count must match the extension degree"
        );
        Cyc { order, coords }
    }

    /// `ζ_m^k`.
    pub fn root_of_unity(k: i64, m: u32) -> Self {
        let order = admissible_order(m);
        let d = cyc_data(order);
        let e = (k * (order / m.max(1)) as i64).rem_euclid(order as i64) as usize;
        Cyc {
            order,
            coords: d.powers[e].iter().map(F::from_gq).collect(),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn base_value(&self) -> Option<&F> {
        if self.coords[1..].iter().all(F::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn lift(&self, order: u32) -> Self {
        if order == self.order {
            return self.clone();
        }
        assert!(
            order.is_multiple_of(self.order),
            "lift target must be a multiple"
        );
        let r = (order / self.order) as usize;
        let d = cyc_data(order);
        let mut out = vec![F::zero(); d.degree];
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, g) in d.powers[j * r].iter().enumerate() {
                if !g.is_zero() {
                    out[l] = out[l].add(&c.mul_gq(g));
                }
            }
        }
        Cyc { order, coords: out }
    }

    fn aligned(&self, o: &Self) -> (Self, Self) {
        if self.order == o.order {
            return (self.clone(), o.clone());
        }
        let l = self.order.lcm(&o.order);
        (self.lift(l), o.lift(l))
    }

    fn reduce(order: u32, raw: Vec<F>) -> Self {
        let d = cyc_data(order);
        let mut out = vec![F::zero(); d.degree];
        for (j, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j < d.degree {
                out[j] = out[j].add(&c);
                continue;
            }
            for (l, g) in d.powers[j % order as usize].iter().enumerate() {
                if !g.is_zero() {
                    out[l] = out[l].add(&c.mul_gq(g));
                }
            }
        }
        Cyc { order, coords: out }
    }

    /// Action of `ζ ↦ ζ^k` for `k ≡ 1 (mod 4)` coprime to the order.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.order as i64;
        let kk = k.rem_euclid(n);
        assert!(kk % 4 == 1 && kk.gcd(&n) == 1, "Galois exponent must fix i");
        let raw: Vec<(usize, F)> = self
            .coords
            .iter()
            .enumerate()
            .map(|(j, c)| ((j as i64 * kk % n) as usize, c.clone()))
            .collect();
        let mut full = vec![F::zero(); self.order as usize];
        for (e, c) in raw {
            full[e] = full[e].add(&c);
        }
        Cyc::reduce(self.order, full)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Cyc<G> {
        Cyc {
            order: self.order,
            coords: self.coords.iter().map(f).collect(),
        }
    }

    pub fn to_complex_with(&self, f: impl Fn(&F) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * j as f64 / self.order as f64,
            );
            acc += f(c) * z;
        }
        acc
    }

    /// The same value expressed over the smallest admissible order.
    pub fn simplified(&self) -> Self {
        if self.order == 4 {
            return self.clone();
        }
        let mut divisors: Vec<u32> = (1..self.order)
            .filter(|d| self.order.is_multiple_of(*d) && d % 4 == 0)
            .collect();
        divisors.sort_unstable();
        for d in divisors {
            if let Some(x) = self.descend(d) {
                return x;
            }
        }
        self.clone()
    }

    fn descend(&self, target: u32) -> Option<Self> {
        let small = cyc_data(target);
        let big = cyc_data(self.order);
        let r = (self.order / target) as usize;
        // Columns are the lifted basis vectors of the subfield.
        let deg = small.degree;
        let rows: Vec<Vec<F>> = (0..big.degree)
            .map(|l| {
                let mut row: Vec<F> = (0..deg)
                    .map(|j| F::from_gq(&big.powers[j * r][l]))
                    .collect();
                row.push(self.coords[l].clone());
                row
            })
            .collect();
        let red = super::field::rref(rows, deg + 1);
        if red.pivots.contains(&deg) {
            return None;
        }
        let mut coords = vec![F::zero(); deg];
        for (row, &p) in red.rows.iter().zip(&red.pivots) {
            coords[p] = row[deg].clone();
        }
        Some(Cyc {
            order: target,
            coords,
        })
    }

    pub fn pow_i(&self, e: i64) -> Option<Self> {
        Field::pow(self, e)
    }
}

impl CycQ {
    pub fn to_complex(&self) -> Complex64 {
        self.to_complex_with(Gq::to_complex)
    }
}

impl<F: Field> PartialEq for Cyc<F> {
    fn eq(&self, o: &Self) -> bool {
        let (a, b) = self.aligned(o);
        a.coords == b.coords
    }
}

impl<F: Field> Field for Cyc<F> {
    fn zero() -> Self {
        Cyc::from_base(F::zero())
    }
    fn one() -> Self {
        Cyc::from_base(F::one())
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(F::is_zero)
    }
    fn add(&self, o: &Self) -> Self {
        let (a, b) = self.aligned(o);
        Cyc {
            order: a.order,
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x.add(y))
                .collect(),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        let (a, b) = self.aligned(o);
        Cyc {
            order: a.order,
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x.sub(y))
                .collect(),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        if let Some(x) = o.base_value() {
            return Cyc {
                order: self.order,
                coords: self.coords.iter().map(|c| c.mul(x)).collect(),
            };
        }
        if let Some(x) = self.base_value() {
            return Cyc {
                order: o.order,
                coords: o.coords.iter().map(|c| x.mul(c)).collect(),
            };
        }
        let (a, b) = self.aligned(o);
        let d = a.coords.len();
        let mut raw = vec![F::zero(); 2 * d - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] = raw[i + j].add(&x.mul(y));
                }
            }
        }
        Cyc::reduce(a.order, raw)
    }
    fn neg(&self) -> Self {
        Cyc {
            order: self.order,
            coords: self.coords.iter().map(F::neg).collect(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if let Some(x) = self.base_value() {
            return Some(Cyc {
                order: self.order,
                coords: {
                    let mut v = vec![F::zero(); self.coords.len()];
                    v[0] = x.inv()?;
                    v
                },
            });
        }
        let d = self.coords.len();
        let data = cyc_data(self.order);
        // Column j holds the coordinates of self * x^j.
        let cols: Vec<Cyc<F>> = (0..d)
            .map(|j| {
                self.mul(&Cyc {
                    order: self.order,
                    coords: data.powers[j].iter().map(F::from_gq).collect(),
                })
            })
            .collect();
        let a: Vec<Vec<F>> = (0..d)
            .map(|l| cols.iter().map(|c| c.coords[l].clone()).collect())
            .collect();
        let mut rhs = vec![F::zero(); d];
        rhs[0] = F::one();
        let y = solve(&a, &rhs)?;
        Some(Cyc {
            order: self.order,
            coords: y,
        })
    }
    fn from_gq(g: &Gq) -> Self {
        Cyc::from_base(F::from_gq(g))
    }
    fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut full = vec![F::zero(); n];
        for (j, c) in self.coords.iter().enumerate() {
            let e = (n - j) % n;
            full[e] = full[e].add(&c.conj());
        }
        Cyc::reduce(self.order, full)
    }
    fn mul_gq(&self, g: &Gq) -> Self {
        Cyc {
            order: self.order,
            coords: self.coords.iter().map(|c| c.mul_gq(g)).collect(),
        }
    }
    fn complexity(&self) -> usize {
        self.coords
            .iter()
            .map(|c| c.complexity() + usize::from(!c.is_zero()))
            .sum()
    }
    fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(F::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_polynomials_have_expected_degree() {
        for (n, deg) in [(4, 1), (8, 2), (12, 2), (24, 4), (20, 4)] {
            assert_eq!(cyc_data(n).degree, deg, "order {n}");
        }
    }

    #[test]
    fn cube_root_relation() {
        let w = CycQ::root_of_unity(1, 3);
        let s = Field::add(&Field::add(&Field::mul(&w, &w), &w), &CycQ::one());
        assert!(Field::is_zero(&s));
        assert_eq!(w.pow_i(3).unwrap(), CycQ::one());
    }

    #[test]
    fn mixed_orders_align() {
        let w3 = CycQ::root_of_unity(1, 3);
        let w8 = CycQ::root_of_unity(1, 8);
        let p = Field::mul(&w3, &w8);
        assert_eq!(p, CycQ::root_of_unity(11, 24));
        let back = Field::mul(&p, &w8.inv().unwrap());
        assert_eq!(back, w3);
        assert_eq!(back.simplified().order(), 12);
    }

    #[test]
    fn conjugation_inverts_roots() {
        let z = CycQ::root_of_unity(5, 12);
        assert_eq!(Field::conj(&z), CycQ::root_of_unity(-5, 12));
        let x = Field::add(&z, &CycQ::from_gq(&Gq::from_parts((1, 2), (3, 1))));
        let c = x.to_complex();
        let cc = Field::conj(&x).to_complex();
        assert!((c.conj() - cc).norm() < 1e-12);
    }

    #[test]
    fn inverse_roundtrip() {
        let x = Field::add(
            &CycQ::root_of_unity(1, 12),
            &CycQ::from_gq(&Gq::from_int(2)),
        );
        let y = x.inv().unwrap();
        assert!(Field::is_one(&Field::mul(&x, &y)));
    }
}

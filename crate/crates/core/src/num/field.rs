//! The `Field` abstraction shared by Q(i), rational functions and cyclotomic
//! extensions, plus dense exact linear algebra over any such field.

use std::fmt::Debug;

use super::gaussian::Gq;

pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_gq(g: &Gq) -> Self;
    /// Complex conjugation of numeric coefficients (symbols are treated as real).
    fn conj(&self) -> Self;

    fn mul_gq(&self, g: &Gq) -> Self {
        self.mul(&Self::from_gq(g))
    }

    /// Size estimate used when choosing pivots.
    fn complexity(&self) -> usize {
        0
    }

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|x| self.mul(&x))
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    fn pow(&self, e: i64) -> Option<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Some(acc)
    }
}

impl Field for Gq {
    fn zero() -> Self {
        Gq::zero()
    }
    fn one() -> Self {
        Gq::one()
    }
    fn is_zero(&self) -> bool {
        Gq::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        Gq::inv(self)
    }
    fn from_gq(g: &Gq) -> Self {
        g.clone()
    }
    fn conj(&self) -> Self {
        Gq::conj(self)
    }
    fn complexity(&self) -> usize {
        self.height()
    }
}

/// Reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    /// Nonzero rows, each with a leading one at the matching pivot column.
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss-Jordan elimination processing columns left to right.
pub fn rref<F: Field>(mut m: Vec<Vec<F>>, ncols: usize) -> Rref<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(r) {
            if !row[c].is_zero() {
                let w = row[c].complexity();
                if best.is_none_or(|(_, bw)| w < bw) {
                    best = Some((i, w));
                }
            }
        }
        let Some((pi, _)) = best else { continue };
        m.swap(r, pi);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut().skip(c) {
            *x = x.mul(&inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j].sub(&f.mul(&pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Rref { rows: m, pivots }
}

pub fn rank<F: Field>(m: Vec<Vec<F>>, ncols: usize) -> usize {
    rref(m, ncols).rank()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<F: Field>(m: Vec<Vec<F>>, ncols: usize) -> Vec<Vec<F>> {
    let r = rref(m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (row, &p) in r.rows.iter().zip(&r.pivots) {
            v[p] = row[free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Solve the square system `a x = b`; `None` when singular.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let n = a.len();
    let aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let r = rref(aug, n + 1);
    if r.pivots.len() != n || r.pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(r.rows.iter().map(|row| row[n].clone()).collect())
}

pub fn inverse<F: Field>(a: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = a.len();
    let aug: Vec<Vec<F>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { F::one() } else { F::zero() });
            }
            r
        })
        .collect();
    let r = rref(aug, 2 * n);
    if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.rows.iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    let mut acc = F::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&x.mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn vec_mat<F: Field>(v: &[F], m: &[Vec<F>]) -> Vec<F> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| {
            let mut acc = F::zero();
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() && !m[k][j].is_zero() {
                    acc = acc.add(&x.mul(&m[k][j]));
                }
            }
            acc
        })
        .collect()
}

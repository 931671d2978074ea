//! Sparse multivariate polynomials over Q(i) in graded-lexicographic order,
//! with exact division and a recursive primitive-PRS gcd.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_complex::Complex64;
use smallvec::SmallVec;

use super::var::Var;
use crate::num::{Field, Gq};

/// Exponent vector sorted by variable, all exponents positive.
pub type Mono = SmallVec<[(Var, u32); 4]>;

pub fn mono_degree(m: &Mono) -> u32 {
    m.iter().map(|&(_, e)| e).sum()
}

/// Graded lexicographic comparison; larger variables are more significant.
pub fn grlex(a: &Mono, b: &Mono) -> Ordering {
    let da = mono_degree(a);
    let db = mono_degree(b);
    if da != db {
        return da.cmp(&db);
    }
    let mut i = a.len();
    let mut j = b.len();
    while i > 0 && j > 0 {
        let (va, ea) = a[i - 1];
        let (vb, eb) = b[j - 1];
        if va != vb {
            return va.cmp(&vb);
        }
        if ea != eb {
            return ea.cmp(&eb);
        }
        i -= 1;
        j -= 1;
    }
    i.cmp(&j)
}

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = Mono::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn mono_div(a: &Mono, b: &Mono) -> Option<Mono> {
    let mut out = Mono::new();
    let mut i = 0;
    for &(vb, eb) in b {
        while i < a.len() && a[i].0 < vb {
            out.push(a[i]);
            i += 1;
        }
        if i == a.len() || a[i].0 != vb || a[i].1 < eb {
            return None;
        }
        if a[i].1 > eb {
            out.push((vb, a[i].1 - eb));
        }
        i += 1;
    }
    out.extend_from_slice(&a[i..]);
    Some(out)
}

fn mono_exp(m: &Mono, v: Var) -> u32 {
    m.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
}

fn mono_without(m: &Mono, v: Var) -> Mono {
    m.iter().copied().filter(|&(w, _)| w != v).collect()
}

/// Polynomial with terms sorted in decreasing grlex order and no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Mono, Gq)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Gq::one())
    }

    pub fn constant(c: Gq) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Mono::new(), c)],
            }
        }
    }

    pub fn from_int(v: i64) -> Self {
        Poly::constant(Gq::from_int(v))
    }

    pub fn var(v: Var) -> Self {
        let mut m = Mono::new();
        m.push((v, 1));
        Poly {
            terms: vec![(m, Gq::one())],
        }
    }

    pub fn monomial(m: Mono, c: Gq) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Build from unsorted, possibly repeated terms.
    pub fn from_terms(raw: Vec<(Mono, Gq)>) -> Self {
        let mut acc: HashMap<Mono, Gq> = HashMap::with_capacity(raw.len());
        for (m, c) in raw {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(x) => *x = &*x + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Mono, Gq)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grlex(&b.0, &a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, Gq)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_empty())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_empty() && self.terms[0].1.is_one()
    }

    pub fn constant_value(&self) -> Option<Gq> {
        if self.terms.is_empty() {
            Some(Gq::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead_coeff(&self) -> Gq {
        self.terms.first().map_or_else(Gq::zero, |t| t.1.clone())
    }

    pub fn lead_mono(&self) -> Option<&Mono> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |t| mono_degree(&t.0))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for (m, _) in &self.terms {
            for &(v, _) in m {
                s.insert(v);
            }
        }
        s
    }

    pub fn has_var(&self, v: Var) -> bool {
        self.terms
            .iter()
            .any(|(m, _)| m.iter().any(|&(w, _)| w == v))
    }

    pub fn max_var(&self) -> Option<Var> {
        self.terms
            .iter()
            .filter_map(|(m, _)| m.last().map(|&(v, _)| v))
            .max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| mono_exp(m, v))
            .max()
            .unwrap_or(0)
    }

    pub fn height(&self) -> usize {
        self.terms.iter().map(|(m, c)| c.height() + m.len()).sum()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match grlex(&self.terms[i].0, &o.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &o.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Gq) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Gq) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, x)| (mono_mul(t, m), x * c))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.is_constant() {
            return self.scale(&o.terms[0].1);
        }
        if self.is_constant() {
            return o.scale(&self.terms[0].1);
        }
        if o.terms.len() == 1 {
            return self.mul_mono(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_mono(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Mono, Gq> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = mono_mul(ma, mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(x) => *x = &*x + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<(Mono, Gq)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grlex(&b.0, &a.0));
        Poly { terms }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Scale so the grlex-leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    pub fn diff(&self, v: Var) -> Poly {
        let mut raw = Vec::new();
        for (m, c) in &self.terms {
            let e = mono_exp(m, v);
            if e == 0 {
                continue;
            }
            let mut nm = Mono::new();
            for &(w, k) in m {
                if w == v {
                    if k > 1 {
                        nm.push((w, k - 1));
                    }
                } else {
                    nm.push((w, k));
                }
            }
            raw.push((nm, c * &Gq::from_int(e as i64)));
        }
        Poly::from_terms(raw)
    }

    /// Coefficients with respect to `v`: entry `k` multiplies `v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut raw: Vec<Vec<(Mono, Gq)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            raw[mono_exp(m, v) as usize].push((mono_without(m, v), c.clone()));
        }
        raw.into_iter()
            .map(|r| {
                // Removing one variable keeps the relative grlex order only
                // within equal exponents of it, so re-sort.
                let mut p = Poly { terms: r };
                p.terms.sort_by(|a, b| grlex(&b.0, &a.0));
                p
            })
            .collect()
    }

    pub fn from_coeffs_in(v: Var, coeffs: &[Poly]) -> Poly {
        let mut raw = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                let mut nm = m.clone();
                if k > 0 {
                    let pos = nm.iter().position(|&(w, _)| w > v).unwrap_or(nm.len());
                    nm.insert(pos, (v, k as u32));
                }
                raw.push((nm, x.clone()));
            }
        }
        Poly::from_terms(raw)
    }

    /// Substitute `v := g`.
    pub fn compose(&self, v: Var, g: &Poly) -> Poly {
        if !self.has_var(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        let mut acc = Poly::zero();
        for c in cs.iter().rev() {
            acc = acc.mul(g).add(c);
        }
        acc
    }

    /// Rename variables with a strictly monotone map.
    pub fn rename_monotone(&self, f: impl Fn(Var) -> Var) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().map(|&(v, e)| (f(v), e)).collect(), c.clone()))
                .collect(),
        }
    }

    /// Rename variables with an arbitrary injective map.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let mut nm: Mono = m.iter().map(|&(v, e)| (f(v), e)).collect();
                    nm.sort_by_key(|&(v, _)| v);
                    (nm, c.clone())
                })
                .collect(),
        )
    }

    /// Apply `n ↦ n+i`, `U(k) ↦ U(k+i)`.
    pub fn shift(&self, i: u32) -> Poly {
        if i == 0 {
            return self.clone();
        }
        let renamed = self.rename_monotone(|v| v.shifted(i));
        let np = Poly::var(Var::N).add(&Poly::from_int(i as i64));
        renamed.compose(Var::N, &np)
    }

    /// `n ↦ n + s` for any integer `s` (U indices unchanged).
    pub fn shift_n(&self, s: i64) -> Poly {
        if s == 0 || !self.has_var(Var::N) {
            return self.clone();
        }
        self.compose(Var::N, &Poly::var(Var::N).add(&Poly::from_int(s)))
    }

    pub fn eval<F: Field>(&self, value: &dyn Fn(Var) -> F) -> F {
        let mut cache: HashMap<Var, F> = HashMap::new();
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = F::from_gq(c);
            for &(v, e) in m {
                let x = cache.entry(v).or_insert_with(|| value(v)).clone();
                t = t.mul(&x.pow(e as i64).expect("nonnegative power"));
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn eval_complex(&self, value: &dyn Fn(Var) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for &(v, e) in m {
                t *= value(v).powu(e);
            }
            acc += t;
        }
        acc
    }

    /// Exact quotient `self / b`, or `None` when `b` does not divide.
    pub fn div_exact(&self, b: &Poly) -> Option<Poly> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = b.constant_value() {
            return Some(self.scale(&c.inv()?));
        }
        let (lb_m, lb_c) = &b.terms[0];
        let lb_inv = lb_c.inv()?;
        let mut r = self.clone();
        let mut q = Vec::new();
        while !r.is_zero() {
            let (lm, lc) = &r.terms[0];
            let m = mono_div(lm, lb_m)?;
            let c = lc * &lb_inv;
            r = r.sub(&b.mul_mono(&m, &c));
            q.push((m, c));
        }
        Some(Poly::from_terms(q))
    }

    /// Gcd of all coefficients with respect to `v`.
    pub fn content_in(&self, v: Var) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_in(&self, v: Var) -> Poly {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides").monic()
    }
}

/// Pseudo-remainder of `f` by `g` in the variable `x`.
fn prem(f: &Poly, g: &Poly, x: Var) -> Poly {
    let dg = g.degree_in(x);
    let gc = g.coeffs_in(x);
    let lc_g = gc[dg as usize].clone();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(x) >= dg && r.has_var(x) {
        let dr = r.degree_in(x);
        let lc_r = r.coeffs_in(x).swap_remove(dr as usize);
        let mut xm = Mono::new();
        if dr > dg {
            xm.push((x, dr - dg));
        }
        let shifted = g.mul(&lc_r).mul_mono(&xm, &Gq::one());
        r = r.mul(&lc_g).sub(&shifted);
    }
    if !r.is_zero() && dg == 0 {
        return Poly::zero();
    }
    r
}

/// Euclid for polynomials whose only variable is `x`.
fn univariate_gcd(a: &Poly, b: &Poly, x: Var) -> Poly {
    let mut f = a.monic();
    let mut g = b.monic();
    if f.degree_in(x) < g.degree_in(x) {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        let dg = g.degree_in(x);
        let lc_inv = g.lead_coeff().inv().expect("monic");
        let mut r = f.clone();
        while !r.is_zero() && r.degree_in(x) >= dg {
            let dr = r.degree_in(x);
            let c = &r.lead_coeff() * &lc_inv;
            let mut xm = Mono::new();
            if dr > dg {
                xm.push((x, dr - dg));
            }
            r = r.sub(&g.mul_mono(&xm, &c));
        }
        f = g;
        g = r.monic();
    }
    f.monic()
}

/// Greatest common divisor, normalized to leading coefficient 1.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.len() == 1 || b.len() == 1 {
        return monomial_gcd(a, b);
    }
    let x = a.max_var().max(b.max_var()).expect("nonconstant");
    let ha = a.has_var(x);
    let hb = b.has_var(x);
    if !ha {
        return gcd(a, &b.content_in(x));
    }
    if !hb {
        return gcd(&a.content_in(x), b);
    }
    let only_x = |p: &Poly| p.terms.iter().all(|(m, _)| m.iter().all(|&(v, _)| v == x));
    if only_x(a) && only_x(b) {
        return univariate_gcd(a, b, x);
    }
    let ca = a.content_in(x);
    let cb = b.content_in(x);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    if coprime_by_specialization(&pa, &pb, x) {
        return c.monic();
    }
    if pa.degree_in(x) >= pb.degree_in(x) && pa.div_exact(&pb).is_some() {
        return c.mul(&pb).monic();
    }
    if pb.degree_in(x) >= pa.degree_in(x) && pb.div_exact(&pa).is_some() {
        return c.mul(&pa).monic();
    }
    let (mut f, mut g) = if pa.degree_in(x) >= pb.degree_in(x) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    let prim = loop {
        let r = prem(&f, &g, x);
        if r.is_zero() {
            break g.primitive_in(x);
        }
        if !r.has_var(x) {
            break Poly::one();
        }
        f = g;
        g = r.primitive_in(x);
    };
    c.mul(&prim).monic()
}

/// Substitute integers for every variable except `x`.
fn specialize(p: &Poly, x: Var, attempt: i64) -> Poly {
    let terms = p
        .terms
        .iter()
        .map(|(m, c)| {
            let mut coeff = c.clone();
            let mut keep = Mono::new();
            for &(v, e) in m {
                if v == x {
                    keep.push((v, e));
                } else {
                    let point = 2 + 3 * (v.0 as i64) + 7 * attempt;
                    coeff = &coeff * &Gq::from_int(point).pow_u(e as u64);
                }
            }
            (keep, coeff)
        })
        .collect();
    Poly::from_terms(terms)
}

/// True when `a` and `b` share no factor of positive degree in `x`, shown by
/// a specialization that keeps both degrees and has a constant gcd. A false
/// result is inconclusive.
fn coprime_by_specialization(a: &Poly, b: &Poly, x: Var) -> bool {
    (0..2).any(|attempt| {
        let sa = specialize(a, x, attempt);
        let sb = specialize(b, x, attempt);
        sa.degree_in(x) == a.degree_in(x)
            && sb.degree_in(x) == b.degree_in(x)
            && !sa.is_zero()
            && !sb.is_zero()
            && univariate_gcd(&sa, &sb, x).is_constant()
    })
}

/// Gcd when at least one input is a single term.
fn monomial_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mono, other) = if a.len() == 1 { (a, b) } else { (b, a) };
    let mut m = mono.terms[0].0.clone();
    for (t, _) in &other.terms {
        m = m
            .iter()
            .filter_map(|&(v, e)| {
                let k = e.min(mono_exp(t, v));
                (k > 0).then_some((v, k))
            })
            .collect();
        if m.is_empty() {
            break;
        }
    }
    Poly::monomial(m, Gq::one())
}

fn fmt_term(m: &Mono) -> String {
    m.iter()
        .map(|&(v, e)| {
            if e == 1 {
                v.name()
            } else {
                format!("{}^{}", v.name(), e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) =
                if c.is_real() && c.re < num_rational::BigRational::from_integer(0.into()) {
                    (true, -c)
                } else {
                    (false, c.clone())
                };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let cstr = if mag.is_real() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            if m.is_empty() {
                write!(f, "{cstr}")?;
            } else if mag.is_one() {
                write!(f, "{}", fmt_term(m))?;
            } else {
                write!(f, "{}*{}", cstr, fmt_term(m))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Poly {
        match name {
            "n" => Poly::var(Var::N),
            "u0" => Poly::var(Var::u(0)),
            "u1" => Poly::var(Var::u(1)),
            p => Poly::var(Var::param(p)),
        }
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let x = v("u0");
        let y = v("u1");
        let a = v("a");
        let common = x.add(&y.mul(&a)).add(&Poly::from_int(1));
        let f = common.mul(&x.sub(&y));
        let g = common.mul(&x.add(&a).pow(2));
        assert_eq!(gcd(&f, &g), common.monic());
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let x = v("u0");
        let y = v("u1");
        assert!(gcd(&x.add(&y), &x.sub(&y)).is_one());
    }

    #[test]
    fn gcd_with_gaussian_factor() {
        let x = v("u0");
        let i = Poly::constant(Gq::i());
        let f = x.mul(&x).add(&Poly::one()); // (x+i)(x-i)
        let g = x.sub(&i).mul(&x.add(&Poly::from_int(3)));
        assert_eq!(gcd(&f, &g), x.sub(&i));
    }

    #[test]
    fn exact_division() {
        let x = v("u0");
        let y = v("n");
        let p = x.add(&y).mul(&x.sub(&y));
        assert_eq!(p.div_exact(&x.add(&y)).unwrap(), x.sub(&y));
        assert!(p.div_exact(&x.add(&Poly::one())).is_none());
    }

    #[test]
    fn shift_maps_n_and_u() {
        let p = v("a").mul(&v("n")).add(&v("u0").pow(2));
        let s = p.shift(2);
        let expect = v("a")
            .mul(&v("n").add(&Poly::from_int(2)))
            .add(&Poly::var(Var::u(2)).pow(2));
        assert_eq!(s, expect);
    }
}

//! Sequences `Σ c·λⁿ·nᵐ` with cyclotomic-rational coefficients.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde_json::{json, Value};

use super::rou::RootOfUnityScalar;
use crate::error::{Error, Result};
use crate::num::{rank, Cyc, CycRat, Field, Gq};
use crate::symexpr::{parse_ratfun, RatFun, Var};

#[derive(Clone, Debug, PartialEq)]
pub struct SeqTerm {
    pub coef: CycRat,
    pub lam: RootOfUnityScalar,
    pub deg: u32,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SequenceClosedForm {
    terms: Vec<SeqTerm>,
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut r = 1i64;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

impl SequenceClosedForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(raw: Vec<SeqTerm>) -> Self {
        let mut terms: Vec<SeqTerm> = Vec::with_capacity(raw.len());
        let mut raw = raw;
        raw.sort_by(|a, b| a.lam.cmp(&b.lam).then(a.deg.cmp(&b.deg)));
        for t in raw {
            if let Some(last) = terms.last_mut() {
                if last.lam == t.lam && last.deg == t.deg {
                    last.coef = Field::add(&last.coef, &t.coef);
                    continue;
                }
            }
            terms.push(t);
        }
        terms.retain(|t| !Field::is_zero(&t.coef));
        for t in &mut terms {
            t.coef = t.coef.simplified();
        }
        SequenceClosedForm { terms }
    }

    pub fn term(coef: CycRat, lam: RootOfUnityScalar, deg: u32) -> Self {
        Self::from_terms(vec![SeqTerm { coef, lam, deg }])
    }

    pub fn constant(c: CycRat) -> Self {
        Self::term(c, RootOfUnityScalar::one(), 0)
    }

    pub fn constant_rat(c: RatFun) -> Self {
        Self::constant(Cyc::from_base(c))
    }

    pub fn constant_gq(c: Gq) -> Self {
        Self::constant(CycRat::from_gq(&c))
    }

    pub fn geometric(lam: RootOfUnityScalar) -> Self {
        Self::term(CycRat::one(), lam, 0)
    }

    /// `n^deg`.
    pub fn power_of_n(deg: u32) -> Self {
        Self::term(CycRat::one(), RootOfUnityScalar::one(), deg)
    }

    /// `cos(2πkn/m)`.
    pub fn cos(k: i64, m: u32) -> Self {
        let half = CycRat::from_gq(&Gq::from_frac(1, 2));
        Self::from_terms(vec![
            SeqTerm {
                coef: half.clone(),
                lam: RootOfUnityScalar::root(k, m),
                deg: 0,
            },
            SeqTerm {
                coef: half,
                lam: RootOfUnityScalar::root(-k, m),
                deg: 0,
            },
        ])
    }

    /// `sin(2πkn/m)`.
    pub fn sin(k: i64, m: u32) -> Self {
        let c = CycRat::from_gq(&Gq::from_parts((0, 1), (-1, 2)));
        Self::from_terms(vec![
            SeqTerm {
                coef: c.clone(),
                lam: RootOfUnityScalar::root(k, m),
                deg: 0,
            },
            SeqTerm {
                coef: c.neg(),
                lam: RootOfUnityScalar::root(-k, m),
                deg: 0,
            },
        ])
    }

    /// The sequence of period `values.len()` with `s(r) = values[r]`, as a
    /// discrete Fourier sum over the roots of unity of that order.
    pub fn from_periodic(values: &[CycRat]) -> Self {
        assert!(
            !values.is_empty(),
            "a periodic sequence needs at least one value"
        );
        if values.iter().all(|v| v == &values[0]) {
            return Self::constant(values[0].clone());
        }
        let p = values.len() as i64;
        let inv_p = Gq::from_frac(1, p);
        let terms = (0..p)
            .map(|k| {
                let mut c = CycRat::zero();
                for (r, v) in values.iter().enumerate() {
                    c = Field::add(
                        &c,
                        &Field::mul(v, &CycRat::root_of_unity(-k * r as i64, p as u32)),
                    );
                }
                SeqTerm {
                    coef: c.mul_gq(&inv_p),
                    lam: RootOfUnityScalar::root(k, p as u32),
                    deg: 0,
                }
            })
            .collect();
        Self::from_terms(terms)
    }

    pub fn terms(&self) -> &[SeqTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        Self::from_terms(t)
    }

    pub fn neg(&self) -> Self {
        SequenceClosedForm {
            terms: self
                .terms
                .iter()
                .map(|t| SeqTerm {
                    coef: t.coef.neg(),
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &CycRat) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| SeqTerm {
                    coef: Field::mul(&t.coef, c),
                    ..t.clone()
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &o.terms {
                out.push(SeqTerm {
                    coef: Field::mul(&a.coef, &b.coef),
                    lam: a.lam.mul(&b.lam),
                    deg: a.deg + b.deg,
                });
            }
        }
        Self::from_terms(out)
    }

    /// `n ↦ s(n+j)`.
    pub fn shift(&self, j: i64) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            let lj: CycRat = t.lam.pow_cyc(j);
            let base = Field::mul(&t.coef, &lj);
            for i in 0..=t.deg {
                let w = binomial(t.deg, i) as i128 * (j as i128).pow(t.deg - i);
                let w = Gq::real(num_rational::BigRational::from_integer(w.into()));
                if w.is_zero() {
                    continue;
                }
                out.push(SeqTerm {
                    coef: base.mul_gq(&w),
                    lam: t.lam.clone(),
                    deg: i,
                });
            }
        }
        Self::from_terms(out)
    }

    pub fn eval(&self, n: i64) -> CycRat {
        let mut acc = CycRat::zero();
        for t in &self.terms {
            let np = Gq::from_int(n).pow_u(t.deg as u64);
            if np.is_zero() {
                continue;
            }
            let l: CycRat = t.lam.pow_cyc(n);
            acc = Field::add(&acc, &Field::mul(&t.coef, &l).mul_gq(&np));
        }
        acc.simplified()
    }

    /// Exact value when it lies in Q(i) and carries no parameters.
    pub fn eval_gq(&self, n: i64) -> Option<Gq> {
        self.eval(n).base_value()?.constant_value()
    }

    pub fn eval_complex(&self, n: f64, params: &dyn Fn(Var) -> Complex64) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let c = coef_complex(&t.coef, params)?;
            let lam = t.lam.to_complex();
            let ln = if n.fract() == 0.0 {
                lam.powi(n as i32)
            } else {
                lam.powf(n)
            };
            acc += c * ln * n.powi(t.deg as i32);
        }
        Some(acc)
    }

    /// Value restricted to `n ≡ r (mod period)`, as a polynomial in the
    /// continuous variable `n`. `period` must be a multiple of every root order.
    pub fn residue(&self, r: i64, period: u32) -> Result<CycRat> {
        let mut acc = CycRat::zero();
        for t in &self.terms {
            if !t.lam.is_pure_root() || !period.is_multiple_of(t.lam.m()) {
                return Err(Error::Aperiodic);
            }
            let l: CycRat = t.lam.pow_cyc(r);
            let np = RatFun::var(Var::N)
                .powi(t.deg as i64)
                .expect("positive power");
            acc = Field::add(&acc, &Field::mul(&t.coef, &l).map(|x| x.mul_rf(&np)));
        }
        Ok(acc)
    }

    /// Period of the sequence when it is a finite sum of pure roots of unity.
    pub fn period(&self) -> Option<u32> {
        if self.terms.iter().any(|t| t.deg > 0) {
            return None;
        }
        self.root_period()
    }

    /// Least common multiple of the root orders, ignoring polynomial
    /// factors; `None` when some scale differs from 1.
    pub fn root_period(&self) -> Option<u32> {
        let mut l = 1u32;
        for t in &self.terms {
            if !t.lam.is_pure_root() {
                return None;
            }
            l = l.lcm(&t.lam.m());
        }
        Some(l)
    }

    pub fn max_deg(&self) -> u32 {
        self.terms.iter().map(|t| t.deg).max().unwrap_or(0)
    }

    pub fn conj(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| SeqTerm {
                    coef: Field::conj(&t.coef),
                    lam: t.lam.conj(),
                    deg: t.deg,
                })
                .collect(),
        )
    }

    pub fn map_coeffs(&self, f: &dyn Fn(&RatFun) -> RatFun) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| SeqTerm {
                    coef: t.coef.map(f),
                    ..t.clone()
                })
                .collect(),
        )
    }

    /// Constant value when the sequence is constant.
    pub fn as_constant(&self) -> Option<CycRat> {
        match self.terms.as_slice() {
            [] => Some(CycRat::zero()),
            [t] if t.deg == 0 && t.lam.is_one() => Some(t.coef.clone()),
            _ => None,
        }
    }

    /// Human-readable form pairing conjugate exponentials into cos/sin.
    pub fn real_form(&self) -> String {
        let mut used = vec![false; self.terms.len()];
        let mut parts: Vec<String> = Vec::new();
        for i in 0..self.terms.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let t = &self.terms[i];
            let c: Option<RatFun> = t.coef.simplified().base_value().cloned();
            let real_scale = t.lam.scale().is_real();
            let npow = match t.deg {
                0 => String::new(),
                1 => "*n".to_string(),
                d => format!("*n^{d}"),
            };
            let scale_txt = if t.lam.scale().is_one() {
                String::new()
            } else {
                format!("{}^n*", t.lam.scale())
            };
            let partner = if t.lam.m() > 2 && real_scale {
                c.as_ref().and_then(|c| {
                    let cc = c.conj_rf();
                    (i + 1..self.terms.len()).find(|&j| {
                        !used[j]
                            && self.terms[j].deg == t.deg
                            && self.terms[j].lam == t.lam.conj()
                            && self.terms[j].coef.simplified().base_value() == Some(&cc)
                    })
                })
            } else {
                None
            };
            match (c, partner) {
                (Some(c), Some(j)) => {
                    used[j] = true;
                    // c λⁿ + c̄ λ̄ⁿ = 2Re(c) cos(nθ) − 2Im(c) sin(nθ)
                    let cc = c.conj_rf();
                    let re2 = c.add_rf(&cc);
                    let mut im2 = c.sub_rf(&cc).scale(&Gq::i());
                    let k = if 2 * t.lam.k() < t.lam.m() {
                        t.lam.k() as i64
                    } else {
                        t.lam.k() as i64 - t.lam.m() as i64
                    };
                    let m = t.lam.m();
                    let k = if k < 0 {
                        im2 = im2.neg_rf();
                        -k
                    } else {
                        k
                    };
                    let angle = angle_text(k, m);
                    if !re2.is_zero() {
                        parts.push(format!(
                            "{}{scale_txt}cos({angle}){npow}",
                            coef_prefix(&re2)
                        ));
                    }
                    if !im2.is_zero() {
                        parts.push(format!(
                            "{}{scale_txt}sin({angle}){npow}",
                            coef_prefix(&im2)
                        ));
                    }
                }
                (Some(c), None) if t.lam.k() == 0 || (t.lam.m() == 2 && real_scale) => {
                    let sign = if t.lam.m() == 2 { "(-1)^n*" } else { "" };
                    let body = format!("{sign}{scale_txt}");
                    let body = body.trim_end_matches('*').to_string();
                    let rest = format!("{body}{npow}");
                    let rest = rest.trim_start_matches('*').to_string();
                    if rest.is_empty() {
                        let txt = c.to_string();
                        parts.push(if txt.contains(" + ") || txt[1..].contains(" - ") {
                            format!("({txt})")
                        } else {
                            txt
                        });
                    } else {
                        parts.push(format!("{}{rest}", coef_prefix(&c)));
                    }
                }
                _ => parts.push(exp_term_text(t)),
            }
        }
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(" + ").replace("+ -", "- ")
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|t| {
                    let mut o = json!({
                        "c": cyc_to_json(&t.coef),
                        "k": t.lam.k(),
                        "m_root": t.lam.m(),
                        "deg": t.deg,
                    });
                    if !t.lam.scale().is_one() {
                        o["scale"] = Value::String(t.lam.scale().to_string());
                    }
                    o
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Invalid("sequence must be a JSON array".into()))?;
        let mut terms = Vec::new();
        for t in arr {
            let coef = cyc_from_json(&t["c"])?;
            let k = t["k"]
                .as_i64()
                .ok_or_else(|| Error::Invalid("term needs integer `k`".into()))?;
            let m = t["m_root"]
                .as_u64()
                .ok_or_else(|| Error::Invalid("term needs integer `m_root`".into()))?;
            let deg = t.get("deg").and_then(Value::as_u64).unwrap_or(0) as u32;
            let scale = match t.get("scale") {
                Some(Value::String(s)) => crate::symexpr::parse_gq(s)?,
                None | Some(Value::Null) => Gq::one(),
                Some(_) => return Err(Error::Invalid("`scale` must be a string".into())),
            };
            if m == 0 || scale.is_zero() {
                return Err(Error::Invalid(
                    "root order and scale must be nonzero".into(),
                ));
            }
            terms.push(SeqTerm {
                coef,
                lam: RootOfUnityScalar::new(scale, k, m as u32),
                deg,
            });
        }
        Ok(Self::from_terms(terms))
    }
}

fn angle_text(k: i64, m: u32) -> String {
    // θ = 2πk/m = (p/q)π
    let g = (2 * k).gcd(&(m as i64));
    let (p, q) = (2 * k / g, m as i64 / g);
    match (p, q) {
        (1, 1) => "n*pi".into(),
        (p, 1) => format!("{p}*n*pi"),
        (1, q) => format!("n*pi/{q}"),
        (p, q) => format!("{p}*n*pi/{q}"),
    }
}

fn coef_prefix(c: &RatFun) -> String {
    let txt = c.to_string();
    if c.is_one() {
        String::new()
    } else if txt == "-1" {
        "-".into()
    } else if !txt.contains(" + ") && !txt[1..].contains(" - ") && !txt.contains('/') {
        format!("{txt}*")
    } else {
        format!("({txt})*")
    }
}

pub fn cyc_text(c: &CycRat) -> String {
    let c = c.simplified();
    if let Some(b) = c.base_value() {
        return b.to_string();
    }
    let order = c.order() as usize;
    // For order 4k with k odd, ζ_{4k} = i^x·ζ_k^y; print in powers of ζ_k.
    let k = order / 4;
    let split = (k % 2 == 1 && k > 1).then(|| {
        let x = (0..4).find(|x| (x * k) % 4 == 1).expect("k is odd");
        let y = (0..k).find(|y| (4 * y) % k == 1).expect("k is odd");
        (x, y)
    });
    let mut parts = Vec::new();
    for (j, x) in c.coords().iter().enumerate() {
        if Field::is_zero(x) {
            continue;
        }
        let (x, root) = match split {
            Some((a, b)) if j > 0 => {
                let mut w = x.clone();
                for _ in 0..(a * j) % 4 {
                    w = w.scale(&Gq::i());
                }
                (w, ((b * j) % k, k))
            }
            _ => (x.clone(), (j, order)),
        };
        let xs = x.to_string();
        let xs = if xs.contains(['+', '-', '/']) && !xs.starts_with('(') {
            format!("({xs})")
        } else {
            xs
        };
        if j == 0 {
            parts.push(xs);
        } else {
            parts.push(format!("{xs}*rou({},{})", root.0, root.1));
        }
    }
    format!("({})", parts.join(" + "))
}

fn exp_term_text(t: &SeqTerm) -> String {
    let mut s = cyc_text(&t.coef);
    if t.coef.base_value().is_some() && s[1..].contains(['+', '-']) {
        s = format!("({s})");
    }
    if !t.lam.is_one() {
        s.push_str(&format!(" * {}^n", t.lam));
    }
    if t.deg > 0 {
        s.push_str(&format!(" * n^{}", t.deg));
    }
    s
}

impl fmt::Display for SequenceClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(exp_term_text).collect();
        f.write_str(&parts.join(" + "))
    }
}

pub fn coef_complex(c: &CycRat, params: &dyn Fn(Var) -> Complex64) -> Option<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, x) in c.coords().iter().enumerate() {
        if Field::is_zero(x) {
            continue;
        }
        let z = Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * j as f64 / c.order() as f64,
        );
        acc += x.eval_complex(params)? * z;
    }
    Some(acc)
}

pub fn cyc_to_json(c: &CycRat) -> Value {
    let c = c.simplified();
    if let Some(b) = c.base_value() {
        return Value::String(b.to_string());
    }
    json!({
        "order": c.order(),
        "coords": c.coords().iter().map(|x| Value::String(x.to_string())).collect::<Vec<_>>(),
    })
}

pub fn cyc_from_json(v: &Value) -> Result<CycRat> {
    match v {
        Value::String(s) => Ok(Cyc::from_base(parse_ratfun(s)?)),
        Value::Number(n) => {
            let x = n
                .as_i64()
                .ok_or_else(|| Error::Invalid("numeric coefficient must be an integer".into()))?;
            Ok(CycRat::from_gq(&Gq::from_int(x)))
        }
        Value::Object(o) => {
            let order = o
                .get("order")
                .and_then(Value::as_u64)
                .filter(|n| *n > 0 && n % 4 == 0)
                .ok_or_else(|| Error::Invalid("`order` must be a positive multiple of 4".into()))?;
            let coords = o
                .get("coords")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Invalid("`coords` must be an array".into()))?;
            let deg = crate::num::cyc_data(order as u32).degree;
            if coords.len() != deg {
                return Err(Error::Invalid(format!(
                    "expected {deg} coordinates for order {order}"
                )));
            }
            let mut xs = Vec::new();
            for c in coords {
                let s = c
                    .as_str()
                    .ok_or_else(|| Error::Invalid("coordinates must be strings".into()))?;
                xs.push(parse_ratfun(s)?);
            }
            Ok(Cyc::from_coords(order as u32, xs))
        }
        _ => Err(Error::Invalid("unrecognized coefficient".into())),
    }
}

/// Number of distinct `(λ, degree)` basis functions used by a family.
fn basis_size(seqs: &[&SequenceClosedForm]) -> usize {
    let mut keys: Vec<(RootOfUnityScalar, u32)> = Vec::new();
    for s in seqs {
        for t in &s.terms {
            let k = (t.lam.clone(), t.deg);
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
    }
    keys.len()
}

/// Whether two families span the same space of sequences. The evaluation
/// window covers every exponential-polynomial basis function involved, so a
/// nonzero combination cannot vanish on it.
pub fn seq_equal_span(a: &[SequenceClosedForm], b: &[SequenceClosedForm]) -> bool {
    let all: Vec<&SequenceClosedForm> = a.iter().chain(b.iter()).collect();
    let w = basis_size(&all).max(a.len() + b.len()) + 1;
    seq_equal_span_window(a, b, w)
}

pub fn seq_equal_span_window(
    a: &[SequenceClosedForm],
    b: &[SequenceClosedForm],
    window: usize,
) -> bool {
    let rows = |s: &[SequenceClosedForm]| -> Vec<Vec<CycRat>> {
        s.iter()
            .map(|x| (0..window as i64).map(|n| x.eval(n)).collect())
            .collect()
    };
    let ra = rows(a);
    let rb = rows(b);
    let mut both = ra.clone();
    both.extend(rb.iter().cloned());
    let ka = rank(ra, window);
    let kb = rank(rb, window);
    ka == kb && rank(both, window) == ka
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gq(c: &CycRat) -> Gq {
        c.base_value().unwrap().constant_value().unwrap()
    }

    #[test]
    fn cosine_values() {
        let c = SequenceClosedForm::cos(1, 3);
        let vals: Vec<Gq> = (0..4).map(|n| gq(&c.eval(n))).collect();
        assert_eq!(
            vals,
            vec![
                Gq::one(),
                Gq::from_frac(-1, 2),
                Gq::from_frac(-1, 2),
                Gq::one()
            ]
        );
        assert_eq!(c.period(), Some(3));
    }

    #[test]
    fn shift_laws() {
        let i_n = SequenceClosedForm::geometric(RootOfUnityScalar::root(1, 4));
        assert_eq!(i_n.shift(1), i_n.scale(&CycRat::from_gq(&Gq::i())));
        let n = SequenceClosedForm::power_of_n(1);
        assert_eq!(
            n.shift(1),
            n.add(&SequenceClosedForm::constant_gq(Gq::one()))
        );
        assert_eq!(n.shift(1).shift(-1), n);
        assert_eq!(n.period(), None);
        let two_n = n.scale(&CycRat::from_gq(&Gq::from_int(2)));
        assert_eq!(gq(&two_n.eval(3)), Gq::from_int(6));
    }

    #[test]
    fn spans() {
        let w = SequenceClosedForm::geometric(RootOfUnityScalar::root(1, 3));
        let wb = SequenceClosedForm::geometric(RootOfUnityScalar::root(-1, 3));
        let alt = |s: SequenceClosedForm| {
            s.mul(&SequenceClosedForm::geometric(RootOfUnityScalar::root(
                1, 2,
            )))
        };
        let real = [
            alt(SequenceClosedForm::cos(1, 6)),
            alt(SequenceClosedForm::sin(1, 6)),
        ];
        assert!(seq_equal_span(&[w.clone(), wb.clone()], &real));
        let one = SequenceClosedForm::constant_gq(Gq::one());
        let i_n = SequenceClosedForm::geometric(RootOfUnityScalar::root(1, 4));
        assert!(!seq_equal_span(&[one], &[i_n]));
    }

    #[test]
    fn json_roundtrip() {
        let s = SequenceClosedForm::sin(1, 3).add(&SequenceClosedForm::power_of_n(2));
        let back = SequenceClosedForm::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn real_form_text() {
        assert_eq!(SequenceClosedForm::cos(1, 4).real_form(), "cos(n*pi/2)");
        assert_eq!(SequenceClosedForm::sin(1, 3).real_form(), "sin(2*n*pi/3)");
        let alt = SequenceClosedForm::geometric(RootOfUnityScalar::root(1, 2));
        assert_eq!(alt.real_form(), "(-1)^n");
    }
}

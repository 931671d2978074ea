use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::equation::DifferenceEquation;
use super::exact::Homogenized;
use crate::error::{Error, Result};
use crate::num::{Field, Gq};
use crate::symexpr::{RatFun, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimMode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flag {
    Ok,
    Singular,
    PostSingular,
}

impl Flag {
    pub fn name(self) -> &'static str {
        match self {
            Flag::Ok => "ok",
            Flag::Singular => "singular",
            Flag::PostSingular => "post-singular",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Exact(Gq),
    Float(Complex64),
    Missing,
}

impl Entry {
    pub fn to_complex(&self) -> Option<Complex64> {
        match self {
            Entry::Exact(g) => Some(g.to_complex()),
            Entry::Float(z) => Some(*z),
            Entry::Missing => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub n0: i64,
    pub values: Vec<Entry>,
    pub flags: Vec<Flag>,
}

impl Trajectory {
    pub fn first_singular(&self) -> Option<usize> {
        self.flags.iter().position(|f| *f == Flag::Singular)
    }

    pub fn exact_values(&self) -> Vec<Option<Gq>> {
        self.values
            .iter()
            .map(|e| {
                if let Entry::Exact(g) = e {
                    Some(g.clone())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,re,im,flag\n");
        for (i, (e, f)) in self.values.iter().zip(&self.flags).enumerate() {
            let n = self.n0 + i as i64;
            match e.to_complex() {
                Some(z) => out.push_str(&format!("{n},{:e},{:e},{}\n", z.re, z.im, f.name())),
                None => out.push_str(&format!("{n},,,{}\n", f.name())),
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.values
                .iter()
                .zip(&self.flags)
                .enumerate()
                .map(|(i, (e, f))| {
                    let mut o = json!({ "n": self.n0 + i as i64, "flag": f.name() });
                    match e {
                        Entry::Exact(g) => {
                            o["value"] = Value::String(g.to_string());
                            o["re"] = json!(g.to_complex().re);
                            o["im"] = json!(g.to_complex().im);
                        }
                        Entry::Float(z) => {
                            o["re"] = json!(z.re);
                            o["im"] = json!(z.im);
                        }
                        Entry::Missing => {}
                    }
                    o
                })
                .collect(),
        )
    }
}

/// Iterate `u(n+p) = ω` over any field; returns the values and the index of
/// the first singular step, after which iteration stops.
pub fn iterate<F: Field>(
    omega: &RatFun,
    order: u32,
    init: &[F],
    n0: i64,
    steps: usize,
    param: &dyn Fn(Var) -> F,
) -> (Vec<F>, Option<usize>) {
    let p = order as usize;
    let mut vals: Vec<F> = init.to_vec();
    for s in 0..steps {
        let n = n0 + s as i64;
        let window = &vals[s..s + p];
        let value = |v: Var| -> F {
            if v.is_n() {
                F::from_gq(&Gq::from_int(n))
            } else if let Some(k) = v.u_index() {
                window[k as usize].clone()
            } else {
                param(v)
            }
        };
        let d = omega.den().eval(&value);
        if d.is_zero() {
            return (vals, Some(s + p));
        }
        let x = omega
            .num()
            .eval(&value)
            .div(&d)
            .expect("nonzero denominator");
        vals.push(x);
    }
    (vals, None)
}

/// `iterate` over Q(i) with one fraction reduction per step.
pub fn iterate_exact(
    omega: &RatFun,
    order: u32,
    init: &[Gq],
    n0: i64,
    steps: usize,
    param: &dyn Fn(Var) -> Gq,
) -> (Vec<Gq>, Option<usize>) {
    let h = Homogenized::new(omega);
    let p = order as usize;
    let mut vals: Vec<Gq> = init.to_vec();
    for s in 0..steps {
        let n = n0 + s as i64;
        let window = &vals[s..s + p];
        let value = |v: Var| -> Gq {
            if v.is_n() {
                Gq::from_int(n)
            } else if let Some(k) = v.u_index() {
                window[k as usize].clone()
            } else {
                param(v)
            }
        };
        match h.eval(&value) {
            Some(x) => vals.push(x),
            None => return (vals, Some(s + p)),
        }
    }
    (vals, None)
}

#[derive(Clone, Debug)]
pub struct SimOptions {
    pub mode: SimMode,
    /// Relative threshold for float-mode singularity detection.
    pub tol: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            mode: SimMode::Exact,
            tol: 1e-12,
        }
    }
}

fn flags_for(total: usize, singular: Option<usize>) -> Vec<Flag> {
    (0..total)
        .map(|i| match singular {
            Some(s) if i == s => Flag::Singular,
            Some(s) if i > s => Flag::PostSingular,
            _ => Flag::Ok,
        })
        .collect()
}

pub fn simulate(
    eq: &DifferenceEquation,
    params: &BTreeMap<String, Gq>,
    init: &[Gq],
    n0: i64,
    steps: usize,
    opts: &SimOptions,
) -> Result<Trajectory> {
    let p = eq.order() as usize;
    if init.len() != p {
        return Err(Error::Invalid(format!(
            "expected {p} initial values, got {}",
            init.len()
        )));
    }
    let bound = eq.bind(params)?;
    if let Some(name) = eq.unbound(&bound) {
        return Err(Error::UnboundParameter(name));
    }
    let total = p + steps;
    match opts.mode {
        SimMode::Exact => {
            let (vals, sing) = iterate_exact(eq.omega(), eq.order(), init, n0, steps, &|v| {
                bound[&v.name()].clone()
            });
            let mut values: Vec<Entry> = vals.into_iter().map(Entry::Exact).collect();
            values.resize(total, Entry::Missing);
            Ok(Trajectory {
                n0,
                values,
                flags: flags_for(total, sing),
            })
        }
        SimMode::Float => {
            let cvals: BTreeMap<String, Complex64> = bound
                .iter()
                .map(|(k, v)| (k.clone(), v.to_complex()))
                .collect();
            let init: Vec<Complex64> = init.iter().map(Gq::to_complex).collect();
            let (vals, sing) = iterate_float(
                eq.omega(),
                eq.order(),
                &init,
                n0,
                steps,
                &|v| cvals[&v.name()],
                opts.tol,
            );
            let mut values: Vec<Entry> = vals.into_iter().map(Entry::Float).collect();
            values.resize(total, Entry::Missing);
            Ok(Trajectory {
                n0,
                values,
                flags: flags_for(total, sing),
            })
        }
    }
}

/// Float iteration with the relative singularity test
/// `|den| < tol·(1 + |num|)`.
pub fn iterate_float(
    omega: &RatFun,
    order: u32,
    init: &[Complex64],
    n0: i64,
    steps: usize,
    param: &dyn Fn(Var) -> Complex64,
    tol: f64,
) -> (Vec<Complex64>, Option<usize>) {
    let p = order as usize;
    let mut vals = init.to_vec();
    for s in 0..steps {
        let n = n0 + s as i64;
        let window = vals[s..s + p].to_vec();
        let value = |v: Var| -> Complex64 {
            if v.is_n() {
                Complex64::new(n as f64, 0.0)
            } else if let Some(k) = v.u_index() {
                window[k as usize]
            } else {
                param(v)
            }
        };
        let d = omega.den().eval_complex(&value);
        let num = omega.num().eval_complex(&value);
        if d.norm() < tol * (1.0 + num.norm()) {
            return (vals, Some(s + p));
        }
        vals.push(num / d);
    }
    (vals, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: i64) -> Gq {
        Gq::from_int(v)
    }

    #[test]
    fn exact_iteration_matches_generic_field_iteration() {
        for (w, pars) in [
            (
                "(-u(0)*u(1)+mu/u(1)^2+eps0)/(u(0)+u(1))",
                vec![
                    ("mu", Gq::from_parts((-7, 3), (5, 2))),
                    ("eps0", Gq::from_parts((4, 5), (-9, 4))),
                ],
            ),
            (
                "-u(0)-u(1)+(a*n+b)/u(1)",
                vec![("a", Gq::from_frac(2, 3)), ("b", Gq::i())],
            ),
            ("u(0)*u(1)/(2*u(1)*u(0)-u(0)-u(1))", vec![]),
        ] {
            let names: Vec<&str> = pars.iter().map(|(k, _)| *k).collect();
            let eq = DifferenceEquation::new(w, 2, &names, &[]).unwrap();
            let vals: BTreeMap<String, Gq> =
                pars.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            let param = |v: Var| vals[&v.name()].clone();
            let init = [
                Gq::from_parts((3, 4), (-5, 2)),
                Gq::from_parts((-7, 3), (1, 4)),
            ];
            let generic = iterate::<Gq>(eq.omega(), 2, &init, -3, 12, &param);
            let fast = iterate_exact(eq.omega(), 2, &init, -3, 12, &param);
            assert_eq!(generic, fast, "{w}");
        }
        let eq = DifferenceEquation::new("1/(u(1)-1)", 2, &[], &[]).unwrap();
        let fast = iterate_exact(eq.omega(), 2, &[g(0), g(2)], 0, 4, &|_| unreachable!());
        assert_eq!(fast, (vec![g(0), g(2), g(1)], Some(3)));
    }

    #[test]
    fn period_three_orbit() {
        let eq = DifferenceEquation::new("-u(0)-u(1)", 2, &[], &[]).unwrap();
        let t = simulate(
            &eq,
            &BTreeMap::new(),
            &[g(1), g(1)],
            0,
            4,
            &SimOptions::default(),
        )
        .unwrap();
        let v: Vec<Gq> = t.exact_values().into_iter().map(Option::unwrap).collect();
        assert_eq!(v, vec![g(1), g(1), g(-2), g(1), g(1), g(-2)]);
    }

    #[test]
    fn period_four_orbit() {
        let eq = DifferenceEquation::new("a/u(0)", 2, &["a"], &[]).unwrap();
        let mut p = BTreeMap::new();
        p.insert("a".to_string(), g(4));
        let t = simulate(&eq, &p, &[g(1), g(2)], 0, 5, &SimOptions::default()).unwrap();
        let v: Vec<Gq> = t.exact_values().into_iter().map(Option::unwrap).collect();
        assert_eq!(v, vec![g(1), g(2), g(4), g(2), g(1), g(2), g(4)]);
    }

    #[test]
    fn singular_flag() {
        let eq =
            DifferenceEquation::new("-u(0)-u(1)+(a*n+b)/u(1)+c", 2, &["a", "b", "c"], &[]).unwrap();
        let mut p = BTreeMap::new();
        p.insert("a".to_string(), g(1));
        p.insert("b".to_string(), g(0));
        p.insert("c".to_string(), g(0));
        for mode in [SimMode::Exact, SimMode::Float] {
            let t = simulate(
                &eq,
                &p,
                &[g(1), g(0)],
                0,
                3,
                &SimOptions { mode, tol: 1e-12 },
            )
            .unwrap();
            assert_eq!(t.first_singular(), Some(2));
            assert_eq!(t.flags[3], Flag::PostSingular);
        }
        let missing = simulate(
            &eq,
            &BTreeMap::new(),
            &[g(1), g(2)],
            0,
            3,
            &SimOptions::default(),
        );
        assert!(matches!(missing, Err(Error::UnboundParameter(_))));
    }
}

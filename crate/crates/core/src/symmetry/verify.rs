use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::generator::SymmetryGenerator;
use super::residual::{reduce_generator, residual_numerators, ResidualForm};
use crate::eqmodel::DifferenceEquation;
use crate::error::{Error, Result};
use crate::num::{Field, Gq};
use crate::seqform::cyc_text;
use crate::symexpr::Var;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Symbolic,
    Numeric,
}

impl VerifyMode {
    pub fn name(self) -> &'static str {
        match self {
            VerifyMode::Symbolic => "symbolic",
            VerifyMode::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub n: i64,
    pub u: Vec<Complex64>,
    pub residual: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    pub passed: bool,
    /// Largest relative residual over the samples (numeric mode).
    pub residual_norm: Option<f64>,
    pub witness: Option<Witness>,
    pub residues_checked: Vec<u32>,
    pub failing_residue: Option<u32>,
    /// Nonzero residual on the failing residue class (symbolic mode).
    pub failing_value: Option<String>,
    pub samples_used: usize,
}

impl VerificationReport {
    pub fn verdict(&self) -> &'static str {
        if self.passed {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn to_json(&self) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "n": w.n,
                "u": w.u.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
                "residual": [w.residual.re, w.residual.im],
            })
        });
        json!({
            "mode": self.mode.name(),
            "verdict": self.verdict(),
            "residual_norm": self.residual_norm,
            "witness": witness,
            "residues_checked": self.residues_checked,
            "failing_residue": self.failing_residue,
            "failing_value": self.failing_value,
            "samples": self.samples_used,
        })
    }
}

/// Exact check on every residue class modulo the coefficient period.
pub fn verify_symbolic(
    eq: &DifferenceEquation,
    g: &SymmetryGenerator,
) -> Result<VerificationReport> {
    let g = reduce_generator(eq, g)?;
    let form = ResidualForm::new(eq, g.degree());
    let (period, nums) = residual_numerators(&form, &g)?;
    let failing = nums.iter().position(|c| !Field::is_zero(c));
    Ok(VerificationReport {
        mode: VerifyMode::Symbolic,
        passed: failing.is_none(),
        residual_norm: None,
        witness: None,
        residues_checked: (0..period).collect(),
        failing_residue: failing.map(|r| r as u32),
        failing_value: failing.map(|r| {
            let dm = crate::symexpr::RatFun::from_poly(form.denom.clone());
            cyc_text(
                &nums[r]
                    .map(|x| x.div_rf(&dm).expect("nonzero"))
                    .simplified(),
            )
        }),
        samples_used: 0,
    })
}

#[derive(Clone, Debug)]
pub struct NumericOptions {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    /// Parameter values; free parameters left out are drawn at random.
    pub params: BTreeMap<String, Gq>,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            samples: 100,
            tol: 1e-9,
            seed: 0x5eed,
            params: BTreeMap::new(),
        }
    }
}

fn random_gq(rng: &mut ChaCha8Rng) -> Gq {
    let den = rng.gen_range(1..=5);
    Gq::from_parts((rng.gen_range(-9..=9), den), (rng.gen_range(-9..=9), den))
}

/// Complete `given` with random values for the remaining free parameters so
/// that every nonzero assumption holds.
pub fn bind_random_params(
    eq: &DifferenceEquation,
    given: &BTreeMap<String, Gq>,
    rng: &mut ChaCha8Rng,
) -> Result<BTreeMap<String, Gq>> {
    for _ in 0..64 {
        let mut vals = given.clone();
        for p in eq.free_params() {
            vals.entry(p).or_insert_with(|| random_gq(rng));
        }
        let bound = match eq.bind(&vals) {
            Ok(b) => b,
            Err(Error::InconsistentAssumptions(_)) if given.len() < vals.len() => continue,
            Err(e) => return Err(e),
        };
        let ok = eq.nonzero_conditions().iter().all(|c| {
            !c.eval::<Gq>(&|v| bound.get(&v.name()).cloned().unwrap_or_else(Gq::zero))
                .is_zero()
        });
        if ok {
            return Ok(bound);
        }
    }
    Err(Error::InconsistentAssumptions(
        "no parameter values satisfy the assumptions".into(),
    ))
}

/// Residual at random complex points, relative to the sum of term
/// magnitudes (floored at 1).
pub fn verify_numeric(
    eq: &DifferenceEquation,
    g: &SymmetryGenerator,
    opts: &NumericOptions,
) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let bound = bind_random_params(eq, &opts.params, &mut rng)?;
    let g = reduce_generator(eq, g)?;
    let mut names: Vec<String> =
        g.xi.iter()
            .flat_map(|x| x.vars())
            .map(|v| v.name())
            .collect();
    for s in &g.q {
        for t in s.terms() {
            for c in t.coef.coords() {
                names.extend(c.vars().into_iter().map(|v| v.name()));
            }
        }
    }
    if let Some(missing) = names.into_iter().find(|n| !bound.contains_key(n)) {
        return Err(Error::UnboundParameter(missing));
    }
    let cvals: BTreeMap<String, Complex64> = bound
        .iter()
        .map(|(k, v)| (k.clone(), v.to_complex()))
        .collect();
    if let Some(missing) = eq.unbound(&bound) {
        return Err(Error::UnboundParameter(missing));
    }
    let params = |v: Var| {
        cvals
            .get(&v.name())
            .copied()
            .unwrap_or(Complex64::new(f64::NAN, 0.0))
    };
    let form = ResidualForm::new(eq, g.degree());
    let p = eq.order() as usize;
    let mut worst: Option<(f64, Witness)> = None;
    let mut used = 0;
    let mut attempts = 0;
    while used < opts.samples && attempts < opts.samples * 20 {
        attempts += 1;
        let n = rng.gen_range(-12..=12);
        let us: Vec<Complex64> = (0..p)
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let Some((r, mag)) = form.eval_numeric(&g, n, &us, &params) else {
            continue;
        };
        used += 1;
        let rel = r.norm() / mag.max(1.0);
        if worst.as_ref().is_none_or(|(w, _)| rel > *w) {
            worst = Some((
                rel,
                Witness {
                    n,
                    u: us,
                    residual: r,
                },
            ));
        }
    }
    let (norm, witness) = worst.ok_or(Error::AllSamplesSingular)?;
    let passed = norm <= opts.tol;
    Ok(VerificationReport {
        mode: VerifyMode::Numeric,
        passed,
        residual_norm: Some(norm),
        witness: (!passed).then_some(witness),
        residues_checked: Vec::new(),
        failing_residue: None,
        failing_value: None,
        samples_used: used,
    })
}

pub fn verify(
    eq: &DifferenceEquation,
    g: &SymmetryGenerator,
    mode: VerifyMode,
    samples: usize,
    tol: f64,
) -> Result<VerificationReport> {
    match mode {
        VerifyMode::Symbolic => verify_symbolic(eq, g),
        VerifyMode::Numeric => verify_numeric(
            eq,
            g,
            &NumericOptions {
                samples,
                tol,
                ..NumericOptions::default()
            },
        ),
    }
}

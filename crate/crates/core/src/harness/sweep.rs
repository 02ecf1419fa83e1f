use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::identities::{
    check_identity, is_skippable, solve_constraints, IdentityId, IdentityReport, ParamSet,
};
use crate::mpnum::{BoundedValue, EvalContext, Mag};
use crate::qpoch::QBase;

/// Draws per sample before the admissible region is declared empty.
pub const MAX_REJECTIONS: usize = 1000;

/// Modulus range of sampled free parameters.
pub const PARAM_MODULUS: (f64, f64) = (0.1, 0.9);

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub identity: IdentityId,
    /// Samples per entry of `n_values` (a single batch for identities
    /// without a depth parameter).
    pub samples: usize,
    pub seed: u64,
    pub precision_digits: u32,
    pub q_range: (f64, f64),
    pub complex_params: bool,
    pub n_values: Vec<u32>,
    pub tolerance: f64,
}

impl SweepConfig {
    pub fn new(identity: IdentityId) -> SweepConfig {
        SweepConfig {
            identity,
            samples: 50,
            seed: 0,
            precision_digits: 50,
            q_range: (0.05, 0.5),
            complex_params: false,
            n_values: vec![0],
            tolerance: 1e-30,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.q_range;
        if !(lo > 0.0 && lo <= hi && hi < 1.0) {
            return Err(Error::Config(format!(
                "q range [{lo}, {hi}] must lie in (0, 1)"
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        if self.identity.is_semi_finite() && self.n_values.is_empty() {
            return Err(Error::Config("n values must not be empty".into()));
        }
        Ok(())
    }

    /// The depths actually swept: `n_values` for semi-finite identities,
    /// `[0]` otherwise.
    pub fn depths(&self) -> Vec<u32> {
        if self.identity.is_semi_finite() {
            self.n_values.clone()
        } else {
            vec![0]
        }
    }

    pub fn total_samples(&self) -> usize {
        self.samples * self.depths().len()
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Checked(IdentityReport),
    /// The check could not be certified and the identity allows skipping.
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct SampleRecord {
    pub index: usize,
    pub params: ParamSet,
    /// Draws rejected before this sample was accepted.
    pub rejected: usize,
    pub outcome: Outcome,
}

impl SampleRecord {
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, Outcome::Checked(r) if r.pass)
    }

    pub fn skipped(&self) -> bool {
        matches!(self.outcome, Outcome::Skipped(_))
    }

    pub fn residual(&self) -> Option<Mag> {
        match &self.outcome {
            Outcome::Checked(r) => Some(r.residual),
            Outcome::Skipped(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SweepSummary {
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub rejected: usize,
    pub max_residual: Mag,
}

impl SweepSummary {
    pub fn of(records: &[SampleRecord]) -> SweepSummary {
        let mut s = SweepSummary {
            samples: records.len(),
            ..Default::default()
        };
        for r in records {
            s.rejected += r.rejected;
            if r.skipped() {
                s.skipped += 1;
            } else if r.passed() {
                s.passed += 1;
            } else {
                s.failed += 1;
            }
            if let Some(res) = r.residual() {
                s.max_residual = s.max_residual.max(res);
            }
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub records: Vec<SampleRecord>,
    pub summary: SweepSummary,
}

fn draw_value(rng: &mut ChaCha8Rng, complex: bool, prec: u32) -> BoundedValue {
    let m = rng.random_range(PARAM_MODULUS.0..=PARAM_MODULUS.1);
    if complex {
        let phase = rng.random_range(0.0..TAU);
        BoundedValue::from_parts(m * phase.cos(), m * phase.sin(), prec)
    } else {
        BoundedValue::from_f64(m, prec)
    }
}

/// Draws free parameters until the constraints hold and the check can be
/// evaluated away from poles.
fn run_sample(
    config: &SweepConfig,
    ctx: &EvalContext,
    index: usize,
    n: u32,
) -> Result<SampleRecord> {
    let id = config.identity;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let (q_lo, q_hi) = config.q_range;
    for rejected in 0..MAX_REJECTIONS {
        let q = rng.random_range(q_lo..=q_hi);
        let mut free = ParamSet::new(QBase::from_f64(q, ctx)?).with_n(n);
        for &p in id.free_params() {
            free.set(p, draw_value(&mut rng, config.complex_params, ctx.bits()));
        }
        let params = match solve_constraints(id, &free, ctx) {
            Ok(p) => p,
            Err(Error::ConstraintViolation(_)) => continue,
            Err(e) => return Err(e),
        };
        let outcome = match check_identity(id, &params, ctx, config.tolerance) {
            Ok(report) => Outcome::Checked(report),
            Err(e) if is_skippable(id, &e) => Outcome::Skipped(e.to_string()),
            Err(e) if e.is_pole() => continue,
            Err(e) => return Err(e),
        };
        return Ok(SampleRecord {
            index,
            params,
            rejected,
            outcome,
        });
    }
    Err(Error::Config(format!(
        "no admissible {id} parameters after {MAX_REJECTIONS} draws for sample {index}"
    )))
}

/// Runs `config.samples` checks per depth. Samples are evaluated in
/// parallel; each draws from its own ChaCha8 stream, so the result does not
/// depend on the number of workers.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let ctx = EvalContext::new(config.precision_digits)?;
    let depths = config.depths();
    let total = config.total_samples();
    let results: Vec<Result<SampleRecord>> = (0..total)
        .into_par_iter()
        .map(|i| run_sample(config, &ctx, i, depths[i / config.samples.max(1)]))
        .collect();
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    let summary = SweepSummary::of(&records);
    Ok(SweepReport {
        config: config.clone(),
        records,
        summary,
    })
}

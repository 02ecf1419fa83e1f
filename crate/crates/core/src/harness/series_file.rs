//! JSON description of a raw series for `qpsi eval`:
//!
//! ```json
//! {"q": "0.3", "z": "0.5", "lower": "zero",
//!  "numer": ["0.2", "0.4"], "denom": ["0.7"]}
//! ```
//!
//! `lower` is `"zero"`, `"bilateral"` or `"minus_n"` (with `"n": 3`). An
//! entry written `"vwp:A"` is the very-well-poised square-root pair of `A`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mpnum::{BoundedValue, EvalContext};
use crate::qpoch::QBase;
use crate::qseries::{eval_series, EvalResult, Lower, ParamExpr, SeriesSpec};

use super::report::mag_to_string;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesFile {
    pub q: String,
    pub z: String,
    pub lower: String,
    #[serde(default)]
    pub n: u32,
    pub numer: Vec<String>,
    pub denom: Vec<String>,
}

fn entry(s: &str, prec: u32) -> Result<ParamExpr> {
    match s.trim().strip_prefix("vwp:") {
        Some(rest) => Ok(ParamExpr::VwpPair(BoundedValue::parse(rest, prec)?)),
        None => Ok(ParamExpr::Plain(BoundedValue::parse(s, prec)?)),
    }
}

impl SeriesFile {
    pub fn from_json(bytes: &[u8]) -> Result<SeriesFile> {
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("series spec: {e}")))
    }

    pub fn to_spec(&self, ctx: &EvalContext) -> Result<SeriesSpec> {
        let prec = ctx.bits();
        let lower = match self.lower.as_str() {
            "zero" => Lower::Zero,
            "bilateral" => Lower::Bilateral,
            "minus_n" => Lower::MinusN(self.n),
            other => return Err(Error::Parse(format!("unknown lower bound {other:?}"))),
        };
        let list = |xs: &[String]| {
            xs.iter()
                .map(|s| entry(s, prec))
                .collect::<Result<Vec<_>>>()
        };
        SeriesSpec::new(
            list(&self.numer)?,
            list(&self.denom)?,
            BoundedValue::parse(&self.z, prec)?,
            lower,
            QBase::new(BoundedValue::parse(&self.q, prec)?)?,
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvalDoc {
    pub value: String,
    pub abs_err: String,
    pub terms_up: usize,
    pub terms_down: usize,
    pub tail_bound: String,
    pub converged: bool,
}

impl EvalDoc {
    pub fn of(res: &EvalResult, digits: usize) -> EvalDoc {
        EvalDoc {
            value: res.value.to_decimal(digits),
            abs_err: mag_to_string(res.value.abs_err),
            terms_up: res.terms_up,
            terms_down: res.terms_down,
            tail_bound: mag_to_string(res.tail_bound),
            converged: res.converged,
        }
    }
}

/// Parses and evaluates a series file.
pub fn eval_series_file(bytes: &[u8], ctx: &EvalContext) -> Result<EvalDoc> {
    let spec = SeriesFile::from_json(bytes)?.to_spec(ctx)?;
    let res = eval_series(&spec, ctx)?;
    Ok(EvalDoc::of(&res, ctx.precision_digits() as usize))
}

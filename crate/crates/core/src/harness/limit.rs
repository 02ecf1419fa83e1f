use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::{
    limit_parts, semi_finite_lhs_spec, solve_constraints, IdentityId, ParamSet,
};
use crate::mpnum::{BoundedValue, EvalContext, Mag};
use crate::qpoch::QBase;
use crate::qseries::direct_term;

use super::report::mag_to_string;

#[derive(Clone, Debug)]
pub struct LimitRow {
    pub n: u32,
    pub semi_finite_lhs: BoundedValue,
    pub bilateral_target: BoundedValue,
    pub vanishing_term: BoundedValue,
    /// Upper bound on `|semi_finite_lhs - bilateral_target|`.
    pub gap: Mag,
}

#[derive(Clone, Debug)]
pub struct LimitStudyResult {
    pub identity: IdentityId,
    /// Solved parameters; `n` is set to zero.
    pub params: ParamSet,
    pub rows: Vec<LimitRow>,
}

impl LimitStudyResult {
    /// Smallest depth from which the gap decreases strictly over the
    /// remaining rows.
    pub fn decreasing_from(&self) -> Option<u32> {
        let rows = &self.rows;
        let mut start = rows.len().checked_sub(1)?;
        while start > 0 && rows[start].gap < rows[start - 1].gap {
            start -= 1;
        }
        Some(rows[start].n)
    }

    /// First depth whose gap is below `tol`.
    pub fn first_below(&self, tol: f64) -> Option<u32> {
        let tol = Mag::from_f64(tol);
        self.rows.iter().find(|r| r.gap < tol).map(|r| r.n)
    }

    pub fn gap_at(&self, n: u32) -> Option<Mag> {
        self.rows.iter().find(|r| r.n == n).map(|r| r.gap)
    }
}

/// Evaluates the semi-finite left side, its bilateral limit and the
/// vanishing part at each depth in `n_values`. `params` holds the free
/// parameters; derived ones are solved here.
pub fn run_limit_study(
    id: IdentityId,
    params: &ParamSet,
    n_values: &[u32],
    ctx: &EvalContext,
) -> Result<LimitStudyResult> {
    if !id.is_semi_finite() {
        return Err(Error::Config(format!(
            "{id} has no semi-finite limit study"
        )));
    }
    let solved = solve_constraints(id, &params.clone().with_n(0), ctx)?;
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let parts = limit_parts(id, &solved.clone().with_n(n), ctx)?;
        let gap = (&parts.semi_finite_lhs - &parts.target).abs_upper();
        rows.push(LimitRow {
            n,
            semi_finite_lhs: parts.semi_finite_lhs,
            bilateral_target: parts.target,
            vanishing_term: parts.vanishing,
            gap,
        });
    }
    Ok(LimitStudyResult {
        identity: id,
        params: solved,
        rows,
    })
}

/// Depths used by the CLI for a study up to `n_max`.
pub fn limit_depths(n_max: u32) -> Vec<u32> {
    let mut out: Vec<u32> = [0, 1, 2, 5]
        .into_iter()
        .chain((10..=20).step_by(5))
        .chain((30..).step_by(10).take_while(|&n| n <= n_max))
        .filter(|&n| n <= n_max)
        .collect();
    if out.last() != Some(&n_max) {
        out.push(n_max);
    }
    out
}

/// Free parameters of the reference limit studies, all real with `q = 0.3`.
pub fn default_limit_params(id: IdentityId, ctx: &EvalContext) -> Result<ParamSet> {
    let vals: &[f64] = match id {
        // b = qa^2/cdef = 0.048/0.168
        IdentityId::Semi6Psi6 => &[0.4, 0.5, 0.6, 0.7, 0.8],
        IdentityId::Semi8Phi7 => &[0.4, 0.5, 0.5, 0.6, 0.7, 0.8],
        // c = q^2 a^3 / bdefgh
        IdentityId::Semi10Phi9 => &[0.62, 0.5, 0.65, 0.7, 0.8, 0.5, 0.6],
        _ => {
            return Err(Error::Config(format!(
                "{id} has no semi-finite limit study"
            )))
        }
    };
    let mut p = ParamSet::new(QBase::from_f64(0.3, ctx)?);
    for (&name, &v) in id.free_params().iter().zip(vals) {
        p.set(name, BoundedValue::from_f64(v, ctx.bits()));
    }
    Ok(p)
}

/// Fit of `max_n |t_n(k)| <= C r^|k|` over the terms of the semi-finite
/// left sums: a convergent dominating series exists when `r < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DominanceFit {
    /// `(k, max_n |t_n(k)|)` over the probed indices.
    pub envelope: Vec<(i64, f64)>,
    pub r: f64,
    pub c: f64,
}

impl DominanceFit {
    pub fn dominated(&self) -> bool {
        self.r < 1.0
    }
}

/// Probes `|t_n(k)|` for `|k| <= k_max` over the depths `n_values` (terms
/// with `k < -n` are absent) and fits a geometric envelope in `|k|`.
pub fn tannery_probe(
    id: IdentityId,
    params: &ParamSet,
    n_values: &[u32],
    k_max: i64,
    ctx: &EvalContext,
) -> Result<DominanceFit> {
    let solved = solve_constraints(id, &params.clone().with_n(0), ctx)?;
    let mut envelope: BTreeMap<i64, f64> = BTreeMap::new();
    for &n in n_values {
        let spec = semi_finite_lhs_spec(id, &solved.clone().with_n(n), ctx)?;
        for k in (-(n as i64)).max(-k_max)..=k_max {
            let t = direct_term(&spec, k, ctx)?.abs_upper().to_f64();
            let m = envelope.entry(k).or_insert(0.0);
            *m = m.max(t);
        }
    }
    let points: Vec<(f64, f64)> = envelope
        .iter()
        .filter(|(_, &m)| m > 0.0)
        .map(|(&k, &m)| (k.abs() as f64, m.ln()))
        .collect();
    if points.len() < 2 {
        return Err(Error::Config(
            "dominance probe needs at least two nonzero terms".into(),
        ));
    }
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let r = slope.exp();
    // lift the fitted line until it bounds every envelope point
    let log_c = points
        .iter()
        .map(|p| p.1 - slope * p.0)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(DominanceFit {
        envelope: envelope.into_iter().collect(),
        r,
        c: log_c.exp(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitRowDoc {
    pub n: u32,
    pub semi_finite_lhs: String,
    pub bilateral_target: String,
    pub vanishing_term: String,
    pub gap: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DominanceDoc {
    pub r: f64,
    pub c: f64,
    pub dominated: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitStudyDoc {
    pub identity: String,
    pub params: BTreeMap<String, String>,
    pub rows: Vec<LimitRowDoc>,
    pub decreasing_from: Option<u32>,
    pub dominance: Option<DominanceDoc>,
}

impl LimitStudyDoc {
    pub fn of(
        study: &LimitStudyResult,
        fit: Option<&DominanceFit>,
        digits: usize,
    ) -> LimitStudyDoc {
        let mut params = study.params.to_strings(digits);
        params.remove("n");
        LimitStudyDoc {
            identity: study.identity.name().to_string(),
            params,
            rows: study
                .rows
                .iter()
                .map(|r| LimitRowDoc {
                    n: r.n,
                    semi_finite_lhs: r.semi_finite_lhs.to_decimal(digits),
                    bilateral_target: r.bilateral_target.to_decimal(digits),
                    vanishing_term: r.vanishing_term.to_decimal(digits),
                    gap: mag_to_string(r.gap),
                })
                .collect(),
            decreasing_from: study.decreasing_from(),
            dominance: fit.map(|f| DominanceDoc {
                r: f.r,
                c: f.c,
                dominated: f.dominated(),
            }),
        }
    }
}

/// Reads free parameters from a JSON object of decimal strings, e.g.
/// `{"q": "0.3", "a": "0.4", ...}`.
pub fn params_from_json(bytes: &[u8], ctx: &EvalContext) -> Result<ParamSet> {
    let map: BTreeMap<String, String> =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("params file: {e}")))?;
    ParamSet::from_strings(&map, ctx)
}

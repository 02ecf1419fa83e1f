//! The pieces of the semi-finite identities that a `n -> infinity` study
//! tracks: the semi-finite left sum, the bilateral value it tends to and the
//! part of the identity that vanishes in the limit.

use crate::error::{Error, Result};
use crate::mpnum::{BoundedValue, EvalContext};
use crate::qseries::{Lower, SeriesSpec};

use super::checks::{
    r, semi_pairs, semi_six_psi6_terms, semi_ten_pairs, six_psi6_product, Builder, Ten,
};
use super::params::{Param, ParamSet};
use super::{ComponentDiagnostic, IdentityId};

type BV = BoundedValue;

#[derive(Clone, Debug)]
pub struct LimitParts {
    /// The semi-finite sum over `k >= -n` on the left.
    pub semi_finite_lhs: BV,
    /// The bilateral value the left sum tends to.
    pub target: BV,
    /// For the three-term summation the `b^{n+1}` term on the right; for the
    /// transformations the part `k < -n` of the bilateral limit series.
    pub vanishing: BV,
    pub diagnostics: Vec<ComponentDiagnostic>,
}

fn unsupported(id: IdentityId) -> Error {
    Error::Config(format!("{id} has no semi-finite limit study"))
}

fn below_one(what: &str, x: &BV) -> Result<()> {
    let m = x.mid_upper().to_f64();
    if m < 1.0 {
        Ok(())
    } else {
        Err(Error::ConstraintViolation(format!(
            "limit regime needs |{what}| < 1, got {m:.6}"
        )))
    }
}

fn get(p: &ParamSet, names: [Param; 6]) -> Result<[&BV; 6]> {
    let mut out = Vec::with_capacity(6);
    for x in names {
        out.push(p.get(x)?);
    }
    Ok(out.try_into().unwrap())
}

const ABCDEF: [Param; 6] = [Param::A, Param::B, Param::C, Param::D, Param::E, Param::F];

/// Checks the moduli under which the semi-finite identity has a limit.
pub fn check_limit_regime(id: IdentityId, p: &ParamSet) -> Result<()> {
    let q = p.q();
    match id {
        IdentityId::Semi6Psi6 | IdentityId::Semi8Phi7 => {
            let [a, _, c, d, e, f] = get(p, ABCDEF)?;
            below_one("qa^2/cdef", &r(&[q, a, a], &[c, d, e, f])?)
        }
        IdentityId::Semi10Phi9 => {
            let t = Ten::of(p)?;
            below_one("c", t.c)?;
            below_one("aq/de", &r(&[t.a, q], &[t.d, t.e])?)
        }
        _ => Err(unsupported(id)),
    }
}

/// The series on the left of a semi-finite identity at depth `p.n`.
pub fn semi_finite_lhs_spec(id: IdentityId, p: &ParamSet, ctx: &EvalContext) -> Result<SeriesSpec> {
    let bd = Builder::new(id, p, ctx);
    let q = &bd.q;
    let n = p.n;
    match id {
        IdentityId::Semi6Psi6 | IdentityId::Semi8Phi7 => {
            let [a, b, c, d, e, f] = get(p, ABCDEF)?;
            let z = if id == IdentityId::Semi6Psi6 {
                q.clone()
            } else {
                r(&[q, q, a, a], &[b, c, d, e, f])?
            };
            let pairs = semi_pairs(&bd, a, n, b, &[c, d, e, f])?;
            SeriesSpec::very_well_poised(a, pairs, z, Lower::MinusN(n), &p.base)
        }
        IdentityId::Semi10Phi9 => {
            let t = Ten::of(p)?;
            SeriesSpec::very_well_poised(
                t.a,
                semi_ten_pairs(&bd, &t, n)?,
                q.clone(),
                Lower::MinusN(n),
                &p.base,
            )
        }
        _ => Err(unsupported(id)),
    }
}

/// The bilateral limit series with numerators `us` and its part `k < -n`.
fn bilateral_with_tail(bd: &mut Builder, a: &BV, us: &[BV], z: &BV, n: u32) -> Result<(BV, BV)> {
    let full = bd.psi("limit bilateral series", a, us, z)?;
    let head = bd.series(
        "limit bilateral head",
        SeriesSpec::vwp_from_numerators(a, us, z.clone(), Lower::MinusN(n), bd.base),
    )?;
    let tail = &full - &head;
    Ok((full, tail))
}

/// Evaluates the semi-finite left side, its bilateral limit and the
/// vanishing part at depth `p.n`.
pub fn limit_parts(id: IdentityId, p: &ParamSet, ctx: &EvalContext) -> Result<LimitParts> {
    check_limit_regime(id, p)?;
    let mut bd = Builder::new(id, p, ctx);
    let q = bd.q.clone();
    let n = p.n;
    if id == IdentityId::Semi6Psi6 {
        let [a, _, c, d, e, f] = get(p, ABCDEF)?;
        let [semi_finite_lhs, first, _] = semi_six_psi6_terms(p, &mut bd, n, "lhs sum", false)?;
        return Ok(LimitParts {
            semi_finite_lhs,
            target: six_psi6_product(&bd, a, [c, d, e, f])?,
            vanishing: first,
            diagnostics: bd.diagnostics,
        });
    }
    let semi_finite_lhs = bd.series("lhs sum", semi_finite_lhs_spec(id, p, ctx))?;
    let (target, vanishing) = match id {
        IdentityId::Semi8Phi7 => {
            let [a, _, c, d, e, f] = get(p, ABCDEF)?;
            let z = r(&[&q, a, a], &[c, d, e, f])?;
            let us = [c.clone(), d.clone(), e.clone(), f.clone()];
            bilateral_with_tail(&mut bd, a, &us, &z, n)?
        }
        IdentityId::Semi10Phi9 => {
            let t = Ten::of(p)?;
            let mut us = vec![t.b.clone()];
            us.extend(t.defgh().iter().map(|x| (*x).clone()));
            bilateral_with_tail(&mut bd, t.a, &us, t.c, n)?
        }
        _ => unreachable!("checked by check_limit_regime"),
    };
    Ok(LimitParts {
        semi_finite_lhs,
        target,
        vanishing,
        diagnostics: bd.diagnostics,
    })
}

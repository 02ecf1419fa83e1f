//! Unilateral `s phi s-1`, bilateral `s psi s` and semi-finite (`k >= -n`)
//! basic hypergeometric series with certified truncation.
//!
//! Square-root pairs of very-well-poised series are carried symbolically as
//! [`ParamExpr::VwpPair`]: in a numerator list the token stands for
//! `(q sqrt(A), -q sqrt(A))`, in a denominator list for `(sqrt(A), -sqrt(A))`.
//! Since `(x;q)_k (-x;q)_k = (x^2;q^2)_k`, both are evaluated through `A`
//! alone and no square root is ever taken.

mod eval;
#[cfg(test)]
mod tests;

pub use eval::{direct_term, eval_series, term_ratio, verify_shift_invariance, EvalResult};

use crate::error::{Error, Result};
use crate::mpnum::BoundedValue;
use crate::qpoch::QBase;

#[derive(Clone, Debug, PartialEq)]
pub enum ParamExpr {
    Plain(BoundedValue),
    VwpPair(BoundedValue),
}

impl ParamExpr {
    /// Number of Pochhammer parameters the entry stands for.
    pub fn arity(&self) -> usize {
        match self {
            ParamExpr::Plain(_) => 1,
            ParamExpr::VwpPair(_) => 2,
        }
    }

    pub fn value(&self) -> &BoundedValue {
        match self {
            ParamExpr::Plain(x) | ParamExpr::VwpPair(x) => x,
        }
    }
}

/// Lower summation bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lower {
    /// `sum_{k>=0}` with the implicit `(q;q)_k` in the denominator.
    Zero,
    /// `sum_{k>=-n}` with explicit parameter lists.
    MinusN(u32),
    /// `sum_{k in Z}` with explicit parameter lists.
    Bilateral,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec {
    pub numer: Vec<ParamExpr>,
    pub denom: Vec<ParamExpr>,
    pub z: BoundedValue,
    pub lower: Lower,
    pub base: QBase,
}

fn arity(list: &[ParamExpr]) -> usize {
    list.iter().map(ParamExpr::arity).sum()
}

impl SeriesSpec {
    pub fn new(
        numer: Vec<ParamExpr>,
        denom: Vec<ParamExpr>,
        z: BoundedValue,
        lower: Lower,
        base: QBase,
    ) -> Result<SeriesSpec> {
        let spec = SeriesSpec {
            numer,
            denom,
            z,
            lower,
            base,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let (s_num, s_den) = (arity(&self.numer), arity(&self.denom));
        let ok = match self.lower {
            Lower::Zero => s_num == s_den + 1,
            Lower::MinusN(_) | Lower::Bilateral => s_num == s_den,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "{} numerator and {} denominator parameters do not fit a {:?} series",
                s_num, s_den, self.lower
            )))
        }
    }

    /// The very-well-poised series with base parameter `a`: the square-root
    /// pair of `a` plus, for each `(u, v)` in `pairs`, `u` upstairs and `v`
    /// downstairs. When `lower` is [`Lower::Zero`], `a` itself is added to
    /// the numerator (pairing with the implicit `(q;q)_k`).
    pub fn very_well_poised(
        a: &BoundedValue,
        pairs: Vec<(BoundedValue, BoundedValue)>,
        z: BoundedValue,
        lower: Lower,
        base: &QBase,
    ) -> Result<SeriesSpec> {
        let mut numer = Vec::with_capacity(pairs.len() + 2);
        let mut denom = Vec::with_capacity(pairs.len() + 1);
        if lower == Lower::Zero {
            numer.push(ParamExpr::Plain(a.clone()));
        }
        numer.push(ParamExpr::VwpPair(a.clone()));
        denom.push(ParamExpr::VwpPair(a.clone()));
        for (u, v) in pairs {
            numer.push(ParamExpr::Plain(u));
            denom.push(ParamExpr::Plain(v));
        }
        SeriesSpec::new(numer, denom, z, lower, base.clone())
    }

    /// Like [`SeriesSpec::very_well_poised`] with each denominator taken as
    /// `aq/u`.
    pub fn vwp_from_numerators(
        a: &BoundedValue,
        numerators: &[BoundedValue],
        z: BoundedValue,
        lower: Lower,
        base: &QBase,
    ) -> Result<SeriesSpec> {
        let aq = a * base.q();
        let pairs = numerators
            .iter()
            .map(|u| Ok((u.clone(), aq.checked_div(u)?)))
            .collect::<Result<Vec<_>>>()?;
        SeriesSpec::very_well_poised(a, pairs, z, lower, base)
    }

    /// Ratio and tail bookkeeping works over the denominator list extended
    /// by the implicit `(q;q)_k` of unilateral series.
    pub(crate) fn effective_denominators(&self) -> Vec<ParamExpr> {
        let mut d = self.denom.clone();
        if self.lower == Lower::Zero {
            d.push(ParamExpr::Plain(self.base.q().clone()));
        }
        d
    }
}

//! Left and right sides of every registered identity, evaluated as written:
//! series through `eval_series`, infinite-product prefactors and finite
//! `(.)_n` coefficients through the Pochhammer routines.

use crate::error::{Result, ResultExt};
use crate::mpnum::{BoundedValue, EvalContext};
use crate::qpoch::{poch_ratio, PochOrder, QBase};
use crate::qseries::{eval_series, Lower, SeriesSpec};

use super::params::{Param, ParamSet};
use super::{coeffs, ComponentDiagnostic, IdentityId};

type BV = BoundedValue;

/// `prod(num) / prod(den)`.
pub(super) fn r(num: &[&BV], den: &[&BV]) -> Result<BV> {
    let prec = num.iter().chain(den).map(|x| x.prec()).max().unwrap_or(64);
    let top = num.iter().fold(BV::one(prec), |acc, x| &acc * *x);
    let bottom = den.iter().fold(BV::one(prec), |acc, x| &acc * *x);
    top.checked_div(&bottom)
}

pub(super) struct Builder<'a> {
    pub ctx: &'a EvalContext,
    pub base: &'a QBase,
    pub q: BV,
    id: IdentityId,
    pub diagnostics: Vec<ComponentDiagnostic>,
}

impl<'a> Builder<'a> {
    pub fn new(id: IdentityId, params: &'a ParamSet, ctx: &'a EvalContext) -> Builder<'a> {
        Builder {
            ctx,
            base: &params.base,
            q: params.q().clone(),
            id,
            diagnostics: Vec::new(),
        }
    }

    fn label(&self, what: &str) -> String {
        format!("{} {what}", self.id.name())
    }

    /// `(num)_inf / (den)_inf`.
    pub fn inf(&self, what: &str, num: &[BV], den: &[BV]) -> Result<BV> {
        poch_ratio(num, den, PochOrder::Infinite, self.base, self.ctx).component(&self.label(what))
    }

    /// `(num)_n / (den)_n`.
    pub fn fin(&self, what: &str, num: &[BV], den: &[BV], n: u32) -> Result<BV> {
        poch_ratio(num, den, PochOrder::Finite(n as i64), self.base, self.ctx)
            .component(&self.label(what))
    }

    pub fn series(&mut self, what: &str, spec: Result<SeriesSpec>) -> Result<BV> {
        let label = self.label(what);
        let spec = spec.component(&label)?;
        let res = eval_series(&spec, self.ctx).component(&label)?;
        self.diagnostics.push(ComponentDiagnostic {
            label,
            spec,
            value: res.value.clone(),
            terms_up: res.terms_up,
            terms_down: res.terms_down,
            tail_bound: res.tail_bound,
        });
        Ok(res.value)
    }

    pub fn pow(&self, k: i64) -> BV {
        self.base.pow(k)
    }

    /// Unilateral very-well-poised series in base `a` with numerators `us`.
    pub fn phi(&mut self, what: &str, a: &BV, us: &[BV], z: &BV) -> Result<BV> {
        let spec = SeriesSpec::vwp_from_numerators(a, us, z.clone(), Lower::Zero, self.base);
        self.series(what, spec)
    }

    /// Bilateral very-well-poised series in base `a` with numerators `us`.
    pub fn psi(&mut self, what: &str, a: &BV, us: &[BV], z: &BV) -> Result<BV> {
        let spec = SeriesSpec::vwp_from_numerators(a, us, z.clone(), Lower::Bilateral, self.base);
        self.series(what, spec)
    }

    /// Very-well-poised sum over `k >= -n` with explicit `(upper, lower)` pairs.
    pub fn semi(&mut self, what: &str, a: &BV, pairs: Vec<(BV, BV)>, z: &BV, n: u32) -> Result<BV> {
        let spec = SeriesSpec::very_well_poised(a, pairs, z.clone(), Lower::MinusN(n), self.base);
        self.series(what, spec)
    }
}

pub(super) struct Sides {
    pub lhs: BV,
    pub rhs: BV,
}

/// `aq / x`.
pub(super) fn aq_over(a: &BV, q: &BV, x: &BV) -> Result<BV> {
    r(&[a, q], &[x])
}

pub(super) fn evaluate(id: IdentityId, p: &ParamSet, b: &mut Builder) -> Result<Sides> {
    match id {
        IdentityId::SixPhi5Sum => six_phi5_sum(p, b),
        IdentityId::OnePsi1Sum => one_psi1_sum(p, b),
        IdentityId::SixPsi6Sum => six_psi6_sum(p, b),
        IdentityId::EightPhi7Ext => semi_six_psi6(p, b, 0, "lhs 8phi7", true),
        IdentityId::Semi6Psi6 => semi_six_psi6(p, b, p.n, "lhs sum", false),
        IdentityId::EightPhi7Trans => eight_phi7_trans(p, b),
        IdentityId::Semi8Phi7 => semi_eight_phi7(p, b, p.n),
        IdentityId::SixPsi6Trans => six_psi6_trans(p, b),
        IdentityId::TenPhi9FourTerm => ten_phi9_four_term(p, b),
        IdentityId::Semi10Phi9 => semi_ten_phi9(p, b, p.n),
        IdentityId::EightPsi8Trans => eight_psi8_trans(p, b),
    }
}

fn six_phi5_sum(p: &ParamSet, bd: &mut Builder) -> Result<Sides> {
    let q = bd.q.clone();
    let (a, b, c, d) = (
        p.get(Param::A)?,
        p.get(Param::B)?,
        p.get(Param::C)?,
        p.get(Param::D)?,
    );
    let aq = a * &q;
    let z = r(&[&aq], &[b, c, d])?;
    let lhs = bd.phi("lhs 6phi5", a, &[b.clone(), c.clone(), d.clone()], &z)?;
    let rhs = bd.inf(
        "rhs products",
        &[
            aq.clone(),
            r(&[&aq], &[b, c])?,
            r(&[&aq], &[b, d])?,
            r(&[&aq], &[c, d])?,
        ],
        &[
            aq_over(a, &q, b)?,
            aq_over(a, &q, c)?,
            aq_over(a, &q, d)?,
            z,
        ],
    )?;
    Ok(Sides { lhs, rhs })
}

fn one_psi1_sum(p: &ParamSet, bd: &mut Builder) -> Result<Sides> {
    let q = bd.q.clone();
    let (a, b, z) = (p.get(Param::A)?, p.get(Param::B)?, p.get(Param::Z)?);
    let spec = SeriesSpec::new(
        vec![crate::qseries::ParamExpr::Plain(a.clone())],
        vec![crate::qseries::ParamExpr::Plain(b.clone())],
        z.clone(),
        Lower::Bilateral,
        bd.base.clone(),
    );
    let lhs = bd.series("lhs 1psi1", spec)?;
    let az = a * z;
    let rhs = bd.inf(
        "rhs products",
        &[q.clone(), r(&[b], &[a])?, az.clone(), r(&[&q], &[&az])?],
        &[b.clone(), r(&[&q], &[a])?, z.clone(), r(&[b], &[&az])?],
    )?;
    Ok(Sides { lhs, rhs })
}

/// The closed-form product side of the bilateral `6psi6` sum with
/// numerators `b, c, d, e`.
pub(super) fn six_psi6_product(bd: &Builder, a: &BV, ps: [&BV; 4]) -> Result<BV> {
    let q = &bd.q;
    let aq = a * q;
    let [b, c, d, e] = ps;
    let z = r(&[q, a, a], &[b, c, d, e])?;
    bd.inf(
        "rhs products",
        &[
            q.clone(),
            aq.clone(),
            r(&[q], &[a])?,
            r(&[&aq], &[b, c])?,
            r(&[&aq], &[b, d])?,
            r(&[&aq], &[b, e])?,
            r(&[&aq], &[c, d])?,
            r(&[&aq], &[c, e])?,
            r(&[&aq], &[d, e])?,
        ],
        &[
            r(&[q], &[b])?,
            r(&[q], &[c])?,
            r(&[q], &[d])?,
            r(&[q], &[e])?,
            aq_over(a, q, b)?,
            aq_over(a, q, c)?,
            aq_over(a, q, d)?,
            aq_over(a, q, e)?,
            z,
        ],
    )
}

fn six_psi6_sum(p: &ParamSet, bd: &mut Builder) -> Result<Sides> {
    let q = bd.q.clone();
    let a = p.get(Param::A)?;
    let ps = [
        p.get(Param::B)?,
        p.get(Param::C)?,
        p.get(Param::D)?,
        p.get(Param::E)?,
    ];
    let z = r(&[&q, a, a], &ps)?;
    let lhs = bd.psi("lhs 6psi6", a, &ps.map(Clone::clone), &z)?;
    let rhs = six_psi6_product(bd, a, ps)?;
    Ok(Sides { lhs, rhs })
}

/// Label of the right-hand `8phi7` whose non-convergence skips a sample.
pub(super) const SEMI_6PSI6_RHS_SERIES: &str = "rhs 8phi7";

/// The three-term `8phi7` summation at depth `n`; `n = 0` with
/// `unilateral = true` gives the plain unilateral left side.
fn semi_six_psi6(
    p: &ParamSet,
    bd: &mut Builder,
    n: u32,
    lhs_label: &str,
    unilateral: bool,
) -> Result<Sides> {
    let [lhs, first, second] = semi_six_psi6_terms(p, bd, n, lhs_label, unilateral)?;
    Ok(Sides {
        lhs,
        rhs: &first + &second,
    })
}

/// Left side and the two right-hand terms (the `b^{n+1}` term first) of
/// the three-term summation at depth `n`.
pub(super) fn semi_six_psi6_terms(
    p: &ParamSet,
    bd: &mut Builder,
    n: u32,
    lhs_label: &str,
    unilateral: bool,
) -> Result<[BV; 3]> {
    let q = bd.q.clone();
    let [a, b, c, d, e, f] =
        [Param::A, Param::B, Param::C, Param::D, Param::E, Param::F].map(|x| p.get(x));
    let (a, b, c, d, e, f) = (a?, b?, c?, d?, e?, f?);
    let n64 = n as i64;
    let qn = bd.pow(n64);
    let aq = a * &q;
    let lhs = if unilateral {
        bd.phi(
            lhs_label,
            a,
            &[b.clone(), c.clone(), d.clone(), e.clone(), f.clone()],
            &q,
        )?
    } else {
        let lhs_pairs = semi_pairs(bd, a, n, b, &[c, d, e, f])?;
        bd.semi(lhs_label, a, lhs_pairs, &q, n)?
    };

    let bqn = b * &qn;
    let bqn_a = r(&[&bqn], &[a])?;
    // b^2 q^2n / a
    let big = &bqn * &bqn_a;
    let series = bd.phi(
        SEMI_6PSI6_RHS_SERIES,
        &big,
        &[b.clone(), &bqn_a * c, &bqn_a * d, &bqn_a * e, &bqn_a * f],
        &q,
    )?;
    let bq1n = &bqn * &q;
    let prod1 = bd.inf(
        "rhs first products",
        &[
            aq.clone(),
            c.clone(),
            d.clone(),
            e.clone(),
            f.clone(),
            r(&[&bq1n, &qn], &[a])?,
            r(&[&bq1n], &[c])?,
            r(&[&bq1n], &[d])?,
            r(&[&bq1n], &[e])?,
            r(&[&bq1n], &[f])?,
        ],
        &[
            aq_over(a, &q, b)?,
            aq_over(a, &q, c)?,
            aq_over(a, &q, d)?,
            aq_over(a, &q, e)?,
            aq_over(a, &q, f)?,
            &bqn_a * c,
            &bqn_a * d,
            &bqn_a * e,
            &bqn_a * f,
            r(&[b, &bq1n, &qn], &[a])?,
        ],
    )?;
    let fin1 = bd.fin(
        "rhs first coefficient",
        &[q.clone(), r(&[&q], &[a])?],
        &[b.clone(), r(&[b], &[a])?],
        n,
    )?;
    let power = r(&[&b.powi(n64 + 1)?], &[a])?;
    let first = &(&(&prod1 * &fin1) * &power) * &series;

    let prod2 = bd.inf(
        "rhs second products",
        &[
            aq.clone(),
            r(&[&aq], &[c, d])?,
            r(&[&aq], &[c, e])?,
            r(&[&aq], &[c, f])?,
            r(&[&aq], &[d, e])?,
            r(&[&aq], &[d, f])?,
            r(&[&aq], &[e, f])?,
            bqn_a.clone(),
        ],
        &[
            aq_over(a, &q, c)?,
            aq_over(a, &q, d)?,
            aq_over(a, &q, e)?,
            aq_over(a, &q, f)?,
            &bqn_a * c,
            &bqn_a * d,
            &bqn_a * e,
            &bqn_a * f,
        ],
    )?;
    let fin2 = bd.fin(
        "rhs second coefficient",
        &[q.clone(), r(&[&q], &[a])?],
        &[
            b.clone(),
            r(&[&q], &[c])?,
            r(&[&q], &[d])?,
            r(&[&q], &[e])?,
            r(&[&q], &[f])?,
        ],
        n,
    )?;
    let second = &prod2 * &fin2;
    Ok([lhs, first, second])
}

/// `(aq^-n, q^{1+n}), (b q^n, a q^{1-n}/b)` followed by `(x, aq/x)` for the
/// remaining numerators: the pairs of a very-well-poised series shifted to
/// start at `k = -n`.
pub(super) fn semi_pairs(
    bd: &Builder,
    a: &BV,
    n: u32,
    b: &BV,
    rest: &[&BV],
) -> Result<Vec<(BV, BV)>> {
    let q = &bd.q;
    let n64 = n as i64;
    let qn = bd.pow(n64);
    let q1n = bd.pow(1 - n64);
    let mut pairs = vec![
        (a * &bd.pow(-n64), bd.pow(1 + n64)),
        (b * &qn, r(&[a, &q1n], &[b])?),
    ];
    for x in rest {
        pairs.push(((*x).clone(), aq_over(a, q, x)?));
    }
    Ok(pairs)
}

/// `lambda = q a^2 / (x y w)`.
pub(super) fn lambda_of(q: &BV, a: &BV, x: &BV, y: &BV, w: &BV) -> Result<BV> {
    r(&[q, a, a], &[x, y, w])
}

fn eight_phi7_trans(p: &ParamSet, bd: &mut Builder) -> Result<Sides> {
    let q = bd.q.clone();
    let [a, b, c, d, e, f] =
        [Param::A, Param::B, Param::C, Param::D, Param::E, Param::F].map(|x| p.get(x));
    let (a, b, c, d, e, f) = (a?, b?, c?, d?, e?, f?);
    let l = p.get(Param::Lambda)?;
    let aq = a * &q;
    let lq = l * &q;
    let z = r(&[&q, &q, a, a], &[b, c, d, e, f])?;
    let z2 = r(&[&aq], &[e, f])?;
    let lhs = bd.phi(
        "lhs 8phi7",
        a,
        &[b.clone(), c.clone(), d.clone(), e.clone(), f.clone()],
        &z,
    )?;
    let pre = bd.inf(
        "rhs products",
        &[aq.clone(), z2.clone(), r(&[&lq], &[e])?, r(&[&lq], &[f])?],
        &[
            aq_over(a, &q, e)?,
            aq_over(a, &q, f)?,
            r(&[&lq], &[e, f])?,
            lq.clone(),
        ],
    )?;
    let l_a = r(&[l], &[a])?;
    let series = bd.phi(
        "rhs 8phi7",
        l,
        &[&l_a * b, &l_a * c, &l_a * d, e.clone(), f.clone()],
        &z2,
    )?;
    Ok(Sides {
        lhs,
        rhs: &pre * &series,
    })
}

fn semi_eight_phi7(p: &ParamSet, bd: &mut Builder, n: u32) -> Result<Sides> {
    let q = bd.q.clone();
    let [a, b, c, d, e, f] =
        [Param::A, Param::B, Param::C, Param::D, Param::E, Param::F].map(|x| p.get(x));
    let (a, b, c, d, e, f) = (a?, b?, c?, d?, e?, f?);
    let l = p.get(Param::Lambda)?;
    let n64 = n as i64;
    let aq = a * &q;
    let lq = l * &q;
    let z = r(&[&q, &q, a, a], &[b, c, d, e, f])?;
    let z2 = r(&[&aq], &[e, f])?;
    let lhs_pairs = semi_pairs(bd, a, n, b, &[c, d, e, f])?;
    let lhs = bd.semi("lhs sum", a, lhs_pairs, &z, n)?;

    let pre = bd.inf(
        "rhs products",
        &[aq.clone(), z2.clone(), r(&[&lq], &[e])?, r(&[&lq], &[f])?],
        &[
            aq_over(a, &q, e)?,
            aq_over(a, &q, f)?,
            r(&[&lq], &[e, f])?,
            lq.clone(),
        ],
    )?;
    let l_a = r(&[l], &[a])?;
    let fin = bd.fin(
        "rhs coefficient",
        &[
            &l_a * b,
            r(&[&q], &[a])?,
            r(&[&aq], &[l, c])?,
            r(&[&aq], &[l, d])?,
        ],
        &[b.clone(), r(&[&q], &[l])?, r(&[&q], &[c])?, r(&[&q], &[d])?],
        n,
    )?;
    let q1n = bd.pow(1 - n64);
    let pairs = vec![
        (l * &bd.pow(-n64), bd.pow(1 + n64)),
        (&(&l_a * b) * &bd.pow(n64), r(&[a, &q1n], &[b])?),
        (&l_a * c, aq_over(a, &q, c)?),
        (&l_a * d, aq_over(a, &q, d)?),
        (e.clone(), r(&[&lq], &[e])?),
        (f.clone(), r(&[&lq], &[f])?),
    ];
    let series = bd.semi("rhs sum", l, pairs, &z2, n)?;
    Ok(Sides {
        lhs,
        rhs: &(&pre * &fin) * &series,
    })
}

fn six_psi6_trans(p: &ParamSet, bd: &mut Builder) -> Result<Sides> {
    let q = bd.q.clone();
    let [a, b, c, d, e, f] =
        [Param::A, Param::B, Param::C, Param::D, Param::E, Param::F].map(|x| p.get(x));
    let (a, b, c, d, e, f) = (a?, b?, c?, d?, e?, f?);
    let l = p.get(Param::Lambda)?;
    let aq = a * &q;
    let lq = l * &q;
    let z = r(&[&q, a, a], &[c, d, e, f])?;
    let lhs = bd.psi(
        "lhs 6psi6",
        a,
        &[c.clone(), d.clone(), e.clone(), f.clone()],
        &z,
    )?;
    let pre = bd.inf(
        "rhs products",
        &[
            aq.clone(),
            r(&[&q], &[a])?,
            r(&[&aq], &[e, f])?,
            r(&[&aq], &[c, d])?,
            r(&[&lq], &[e])?,
            r(&[&lq], &[f])?,
            r(&[&aq], &[l, c])?,
            r(&[&aq], &[l, d])?,
        ],
        &[
            aq_over(a, &q, e)?,
            aq_over(a, &q, f)?,
            r(&[&q], &[c])?,
            r(&[&q], &[d])?,
            lq.clone(),
            r(&[&q], &[l])?,
            r(&[&lq], &[e, f])?,
            b.clone(),
        ],
    )?;
    let l_a = r(&[l], &[a])?;
    let series = bd.psi(
        "rhs 6psi6",
        l,
        &[&l_a * c, &l_a * d, e.clone(), f.clone()],
        &z,
    )?;
    Ok(Sides {
        lhs,
        rhs: &pre * &series,
    })
}

/// Parameters shared by the `10phi9` family: `a, b, c, d, e, f, g, h, lambda`.
pub(super) struct Ten<'p> {
    pub a: &'p BV,
    pub b: &'p BV,
    pub c: &'p BV,
    pub d: &'p BV,
    pub e: &'p BV,
    pub f: &'p BV,
    pub g: &'p BV,
    pub h: &'p BV,
    pub l: &'p BV,
}

impl<'p> Ten<'p> {
    pub fn of(p: &'p ParamSet) -> Result<Ten<'p>> {
        Ok(Ten {
            a: p.get(Param::A)?,
            b: p.get(Param::B)?,
            c: p.get(Param::C)?,
            d: p.get(Param::D)?,
            e: p.get(Param::E)?,
            f: p.get(Param::F)?,
            g: p.get(Param::G)?,
            h: p.get(Param::H)?,
            l: p.get(Param::Lambda)?,
        })
    }

    pub fn fgh(&self) -> [&'p BV; 3] {
        [self.f, self.g, self.h]
    }

    pub fn cde(&self) -> [&'p BV; 3] {
        [self.c, self.d, self.e]
    }

    pub fn defgh(&self) -> [&'p BV; 5] {
        [self.d, self.e, self.f, self.g, self.h]
    }
}

/// `[x * y for y in ys]`.
pub(super) fn scaled(x: &BV, ys: &[&BV]) -> Vec<BV> {
    ys.iter().map(|y| x * *y).collect()
}

/// `[x / y for y in ys]`.
pub(super) fn over(x: &BV, ys: &[&BV]) -> Result<Vec<BV>> {
    ys.iter().map(|y| x.checked_div(y)).collect()
}

fn ten_phi9_four_term(p: &ParamSet, bd: &mut Builder) -> Result<Sides> {
    let q = bd.q.clone();
    let t = Ten::of(p)?;
    let (a, b, l) = (t.a, t.b, t.l);
    let aq = a * &q;
    let lq = l * &q;
    let bq = b * &q;
    let b_a = r(&[b], &[a])?;
    let b_l = r(&[b], &[l])?;
    let l_a = r(&[l], &[a])?;
    let all7 = [t.b, t.c, t.d, t.e, t.f, t.g, t.h];
    let c_to_h = [t.c, t.d, t.e, t.f, t.g, t.h];

    let lhs1 = bd.phi("lhs first 10phi9", a, &all7.map(Clone::clone), &q)?;

    let mut num = vec![aq.clone(), b_a.clone()];
    num.extend(c_to_h.iter().map(|x| (*x).clone()));
    num.extend(over(&bq, &c_to_h)?);
    let mut den = vec![r(&[b, &bq], &[a])?, r(&[a], &[b])?];
    den.extend(over(&aq, &c_to_h)?);
    den.extend(scaled(&b_a, &c_to_h));
    let pre2 = bd.inf("lhs second products", &num, &den)?;
    let mut us = vec![b.clone()];
    us.extend(scaled(&b_a, &c_to_h));
    let lhs2 = bd.phi("lhs second 10phi9", &r(&[b, b], &[a])?, &us, &q)?;

    let fgh = t.fgh();
    let mut num = vec![aq.clone(), b_a.clone()];
    num.extend(over(&lq, &fgh)?);
    num.extend(scaled(&b_l, &fgh));
    let mut den = vec![lq.clone(), b_l.clone()];
    den.extend(over(&aq, &fgh)?);
    den.extend(scaled(&b_a, &fgh));
    let pre3 = bd.inf("rhs first products", &num, &den)?;
    let mut us = vec![b.clone()];
    us.extend(scaled(&l_a, &t.cde()));
    us.extend(fgh.iter().map(|x| (*x).clone()));
    let rhs1 = bd.phi("rhs first 10phi9", l, &us, &q)?;

    let abq_l = r(&[a, &bq], &[l])?;
    let mut num = vec![aq.clone(), b_a.clone()];
    num.extend(fgh.iter().map(|x| (*x).clone()));
    num.extend(over(&bq, &fgh)?);
    num.extend(scaled(&l_a, &t.cde()));
    num.extend(over(&abq_l, &t.cde())?);
    let mut den = vec![r(&[b, &bq], &[l])?, r(&[l], &[b])?];
    den.extend(over(&aq, &c_to_h)?);
    den.extend(scaled(&b_a, &c_to_h));
    let pre4 = bd.inf("rhs second products", &num, &den)?;
    let mut us = vec![b.clone()];
    us.extend(scaled(&b_a, &t.cde()));
    us.extend(scaled(&b_l, &fgh));
    let rhs2 = bd.phi("rhs second 10phi9", &r(&[b, b], &[l])?, &us, &q)?;

    Ok(Sides {
        lhs: &lhs1 + &(&pre2 * &lhs2),
        rhs: &(&pre3 * &rhs1) + &(&pre4 * &rhs2),
    })
}

/// Pairs of the semi-finite `10phi9` on the left of the four-term identity.
pub(super) fn semi_ten_pairs(bd: &Builder, t: &Ten, n: u32) -> Result<Vec<(BV, BV)>> {
    let q = &bd.q;
    let n64 = n as i64;
    let a = t.a;
    let mut pairs = vec![
        (a * &bd.pow(-n64), bd.pow(1 + n64)),
        (t.b.clone(), aq_over(a, q, t.b)?),
        (t.c * &bd.pow(n64), r(&[a, &bd.pow(1 - n64)], &[t.c])?),
    ];
    for x in t.defgh() {
        pairs.push((x.clone(), aq_over(a, q, x)?));
    }
    Ok(pairs)
}

fn semi_ten_phi9(p: &ParamSet, bd: &mut Builder, n: u32) -> Result<Sides> {
    let q = bd.q.clone();
    let t = Ten::of(p)?;
    let (a, b, c, l) = (t.a, t.b, t.c, t.l);
    let n64 = n as i64;
    let qn = bd.pow(n64);
    let q1n = bd.pow(1 - n64);
    let lq = l * &q;
    let b_a = r(&[b], &[a])?;
    let b_l = r(&[b], &[l])?;
    let l_a = r(&[l], &[a])?;
    let fgh = t.fgh();

    let lhs1 = bd.semi("lhs sum", a, semi_ten_pairs(bd, &t, n)?, &q, n)?;

    let bq_n = b * &bd.pow(-n64);
    let bcqn_a = &(&b_a * c) * &qn;
    let mut us = vec![bq_n.clone(), bcqn_a.clone()];
    us.extend(scaled(&b_a, &t.defgh()));
    let alpha = coeffs::alpha(bd, &t, n)?;
    let lhs2 = bd.phi("lhs alpha-term 10phi9", &r(&[b, b], &[a])?, &us, &q)?;

    let mut pairs = vec![
        (l * &bd.pow(-n64), bd.pow(1 + n64)),
        (b.clone(), r(&[&lq], &[b])?),
        (&(&l_a * c) * &qn, r(&[a, &q1n], &[c])?),
        (&l_a * t.d, aq_over(a, &q, t.d)?),
        (&l_a * t.e, aq_over(a, &q, t.e)?),
    ];
    for x in fgh {
        pairs.push((x.clone(), r(&[&lq], &[x])?));
    }
    let beta = coeffs::beta(bd, &t, n)?;
    let rhs1 = bd.semi("rhs beta-term sum", l, pairs, &q, n)?;

    let mut us = vec![bq_n, bcqn_a, &b_a * t.d, &b_a * t.e];
    us.extend(scaled(&b_l, &fgh));
    let gamma = coeffs::gamma(bd, &t, n)?;
    let rhs2 = bd.phi("rhs gamma-term 10phi9", &r(&[b, b], &[l])?, &us, &q)?;

    Ok(Sides {
        lhs: &lhs1 + &(&alpha * &lhs2),
        rhs: &(&beta * &rhs1) + &(&gamma * &rhs2),
    })
}

fn eight_psi8_trans(p: &ParamSet, bd: &mut Builder) -> Result<Sides> {
    let q = bd.q.clone();
    let t = Ten::of(p)?;
    let (a, b, c, l) = (t.a, t.b, t.c, t.l);
    let aq = a * &q;
    let lq = l * &q;
    let bq = b * &q;
    let b_a = r(&[b], &[a])?;
    let b_l = r(&[b], &[l])?;
    let l_a = r(&[l], &[a])?;
    let lc_a = &l_a * c;
    let fgh = t.fgh();
    let de = [t.d, t.e];
    let defgh = t.defgh();

    let mut us = vec![b.clone()];
    us.extend(defgh.iter().map(|x| (*x).clone()));
    let lhs = bd.psi("lhs 8psi8", a, &us, c)?;

    let mut num = vec![aq.clone(), r(&[&q], &[a])?, lc_a.clone()];
    num.push(r(&[&aq], &[l, t.d])?);
    num.push(r(&[&aq], &[l, t.e])?);
    num.push(b_a.clone());
    num.extend(scaled(&b_l, &fgh));
    num.extend(over(&lq, &fgh)?);
    let mut den = vec![lq.clone(), r(&[&q], &[l])?, c.clone()];
    den.extend(over(&q, &de)?);
    den.push(b_l.clone());
    den.extend(scaled(&b_a, &fgh));
    den.extend(over(&aq, &fgh)?);
    let pre1 = bd.inf("rhs first products", &num, &den)?;
    let mut us = vec![b.clone()];
    us.extend(scaled(&l_a, &de));
    us.extend(fgh.iter().map(|x| (*x).clone()));
    let rhs1 = bd.psi("rhs 8psi8", l, &us, &lc_a)?;

    let mut num = vec![
        q.clone(),
        r(&[&q], &[a])?,
        r(&[c], &[b])?,
        aq.clone(),
        r(&[&bq], &[c])?,
    ];
    num.extend(over(&bq, &defgh)?);
    num.extend(defgh.iter().map(|x| (*x).clone()));
    let mut den = vec![
        r(&[&q], &[b])?,
        r(&[c], &[a])?,
        r(&[b, &bq], &[a])?,
        aq_over(a, &q, b)?,
        aq_over(a, &q, c)?,
    ];
    den.extend(scaled(&b_a, &defgh));
    den.extend(over(&aq, &defgh)?);
    let pre2 = &b_a * &bd.inf("rhs second products", &num, &den)?;
    let rhs2 = bd.phi(
        "rhs first 8phi7",
        &r(&[b, b], &[a])?,
        &scaled(&b_a, &defgh),
        c,
    )?;

    let pre3 = coeffs::gamma_limit(bd, &t)?;
    let mut us = scaled(&b_a, &de);
    us.extend(scaled(&b_l, &fgh));
    let rhs3 = bd.phi("rhs second 8phi7", &r(&[b, b], &[l])?, &us, &lc_a)?;

    Ok(Sides {
        lhs,
        rhs: &(&(&pre1 * &rhs1) + &(&pre2 * &rhs2)) + &(&pre3 * &rhs3),
    })
}

/// Upper bound on the magnitude of `x`, for guard messages.
pub(super) fn modulus(x: &BV) -> f64 {
    x.mid_upper().to_f64()
}

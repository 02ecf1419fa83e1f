//! Coefficients of the semi-finite four-term `10phi9` identity.

use crate::error::Result;
use crate::mpnum::BoundedValue;

use super::checks::{over, r, scaled, Builder, Ten};

type BV = BoundedValue;

/// Coefficient of the `b^2/a` series on the left:
/// `-(b/a) (q, q/a, c/b)_n / (q/b, c/a)_n` times infinite products.
pub(super) fn alpha(bd: &Builder, t: &Ten, n: u32) -> Result<BV> {
    let q = &bd.q;
    let (a, b, c) = (t.a, t.b, t.c);
    let qn = bd.pow(n as i64);
    let aq = a * q;
    let bq = b * q;
    let b_a = r(&[b], &[a])?;
    let defgh = t.defgh();
    let fin = bd.fin(
        "alpha finite products",
        &[q.clone(), r(&[q], &[a])?, r(&[c], &[b])?],
        &[r(&[q], &[b])?, r(&[c], &[a])?],
        n,
    )?;
    let mut num = vec![r(&[&bq, &qn], &[a])?, c * &qn, aq.clone(), r(&[&bq], &[c])?];
    num.extend(over(&bq, &defgh)?);
    num.extend(defgh.iter().map(|x| (*x).clone()));
    let mut den = vec![
        &(&b_a * c) * &qn,
        r(&[b, &bq], &[a])?,
        r(&[&aq], &[b])?,
        r(&[&aq], &[c])?,
    ];
    den.extend(scaled(&b_a, &defgh));
    den.extend(over(&aq, &defgh)?);
    let inf = bd.inf("alpha infinite products", &num, &den)?;
    Ok(-&(&(&b_a * &fin) * &inf))
}

/// Coefficient of the semi-finite `lambda` sum on the right.
pub(super) fn beta(bd: &Builder, t: &Ten, n: u32) -> Result<BV> {
    let q = &bd.q;
    let (a, b, c, l) = (t.a, t.b, t.c, t.l);
    let qn = bd.pow(n as i64);
    let aq = a * q;
    let lq = l * q;
    let b_a = r(&[b], &[a])?;
    let b_l = r(&[b], &[l])?;
    let fgh = t.fgh();
    let fin = bd.fin(
        "beta finite products",
        &[
            r(&[q], &[a])?,
            r(&[l, c], &[a])?,
            r(&[&aq], &[l, t.d])?,
            r(&[&aq], &[l, t.e])?,
            b_a.clone(),
        ],
        &[
            r(&[q], &[l])?,
            c.clone(),
            r(&[q], &[t.d])?,
            r(&[q], &[t.e])?,
            b_l.clone(),
        ],
        n,
    )?;
    let mut num = vec![aq.clone()];
    num.extend(scaled(&b_l, &fgh));
    num.extend(over(&lq, &fgh)?);
    num.push(&b_a * &qn);
    let mut den = vec![lq.clone()];
    den.extend(scaled(&b_a, &fgh));
    den.extend(over(&aq, &fgh)?);
    den.push(&b_l * &qn);
    let inf = bd.inf("beta infinite products", &num, &den)?;
    Ok(&fin * &inf)
}

/// Finite and infinite product lists shared by the `b^2/lambda` coefficient
/// and its `n -> infinity` form.
fn gamma_lists(bd: &Builder, t: &Ten) -> Result<(Vec<BV>, Vec<BV>, Vec<BV>, Vec<BV>)> {
    let q = &bd.q;
    let (a, b, c, l) = (t.a, t.b, t.c, t.l);
    let aq = a * q;
    let bq = b * q;
    let b_a = r(&[b], &[a])?;
    let l_a = r(&[l], &[a])?;
    let fgh = t.fgh();
    let cde = t.cde();
    let fin_num = vec![
        q.clone(),
        r(&[q], &[a])?,
        b_a.clone(),
        r(&[&aq], &[l, t.d])?,
        r(&[&aq], &[l, t.e])?,
        r(&[l, c], &[a, b])?,
    ];
    let fin_den = vec![
        c.clone(),
        r(&[c], &[a])?,
        r(&[q], &[b])?,
        r(&[q], &[t.d])?,
        r(&[q], &[t.e])?,
        r(&[q, b], &[l])?,
    ];
    let mut inf_num = vec![aq.clone()];
    inf_num.extend(fgh.iter().map(|x| (*x).clone()));
    inf_num.extend(scaled(&l_a, &cde));
    inf_num.extend(over(&bq, &fgh)?);
    inf_num.extend(over(&r(&[a, &bq], &[l])?, &cde)?);
    let mut inf_den = vec![r(&[b, &bq], &[l])?];
    inf_den.extend(over(&aq, &fgh)?);
    inf_den.extend(scaled(&b_a, &t.defgh()));
    inf_den.push(r(&[l], &[b])?);
    inf_den.extend(over(&aq, &cde)?);
    Ok((fin_num, fin_den, inf_num, inf_den))
}

/// Coefficient of the `b^2/lambda` series on the right.
pub(super) fn gamma(bd: &Builder, t: &Ten, n: u32) -> Result<BV> {
    let (fin_num, fin_den, mut inf_num, mut inf_den) = gamma_lists(bd, t)?;
    let qn = bd.pow(n as i64);
    let b_a = r(&[t.b], &[t.a])?;
    inf_num.push(&b_a * &qn);
    inf_den.push(&(&b_a * t.c) * &qn);
    let fin = bd.fin("gamma finite products", &fin_num, &fin_den, n)?;
    let inf = bd.inf("gamma infinite products", &inf_num, &inf_den)?;
    Ok(&fin * &inf)
}

/// The `n -> infinity` form of [`gamma`], where every `(.)_n` becomes
/// `(.)_inf` and the `q^n`-dependent products tend to one.
pub(super) fn gamma_limit(bd: &Builder, t: &Ten) -> Result<BV> {
    let (fin_num, fin_den, mut inf_num, mut inf_den) = gamma_lists(bd, t)?;
    inf_num.extend(fin_num);
    inf_den.extend(fin_den);
    bd.inf("rhs third products", &inf_num, &inf_den)
}

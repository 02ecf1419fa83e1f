use rug::ops::Pow;
use rug::{Complex, Float};

use super::*;
use crate::mpnum::{EvalContext, Mag};
use crate::qpoch::{poch_inf, poch_int, relative_residual};

fn ctx() -> EvalContext {
    EvalContext::new(40).unwrap()
}

fn c(re: f64, im: f64, ctx: &EvalContext) -> BoundedValue {
    BoundedValue::from_parts(re, im, ctx.bits())
}

fn inf(xs: &[&BoundedValue], base: &QBase, ctx: &EvalContext) -> BoundedValue {
    xs.iter().fold(BoundedValue::one(ctx.bits()), |acc, x| {
        &acc * &poch_inf(x, base, ctx).value
    })
}

/// Relative agreement within `tol`, and absolute agreement within the
/// certified error bounds of both sides.
fn assert_close(l: &BoundedValue, r: &BoundedValue, tol: f64) {
    let res = relative_residual(l, r);
    assert!(res.to_f64() < tol, "residual {res}: {l} vs {r}");
    let diff = (l - r).mid_upper();
    assert!(
        diff <= l.abs_err.add(r.abs_err),
        "difference {diff} exceeds bounds: {l} vs {r}"
    );
}

/// Sums stop once terms fall below `10^(10 - digits)` of the total.
const SUM_TOL: f64 = 1e-29;

#[test]
fn q_binomial_theorem() {
    // sum (a)_k z^k / (q)_k = (az)_inf / (z)_inf
    let ctx = ctx();
    let base = QBase::from_f64(0.45, &ctx).unwrap();
    let a = c(0.7, 0.2, &ctx);
    let z = c(-0.3, 0.5, &ctx);
    let spec = SeriesSpec::new(
        vec![ParamExpr::Plain(a.clone())],
        vec![],
        z.clone(),
        Lower::Zero,
        base.clone(),
    )
    .unwrap();
    let got = eval_series(&spec, &ctx).unwrap();
    let want = inf(&[&(&a * &z)], &base, &ctx)
        .checked_div(&inf(&[&z], &base, &ctx))
        .unwrap();
    assert_close(&got.value, &want, SUM_TOL);
    assert!(got.value.abs_err.to_f64() < 1e-28);
    assert_eq!(got.terms_down, 0);
}

#[test]
fn ramanujan_bilateral_sum() {
    // sum_k (a)_k / (b)_k z^k = (q, b/a, az, q/az)_inf / (b, q/a, z, b/az)_inf
    let ctx = ctx();
    let base = QBase::from_f64(0.3, &ctx).unwrap();
    let q = base.q().clone();
    let a = c(2.5, 0.4, &ctx);
    let b = c(0.35, -0.1, &ctx);
    let z = c(0.5, 0.1, &ctx);
    let spec = SeriesSpec::new(
        vec![ParamExpr::Plain(a.clone())],
        vec![ParamExpr::Plain(b.clone())],
        z.clone(),
        Lower::Bilateral,
        base.clone(),
    )
    .unwrap();
    let got = eval_series(&spec, &ctx).unwrap();
    let az = &a * &z;
    let b_a = b.checked_div(&a).unwrap();
    let q_az = q.checked_div(&az).unwrap();
    let q_a = q.checked_div(&a).unwrap();
    let b_az = b.checked_div(&az).unwrap();
    let want = inf(&[&q, &b_a, &az, &q_az], &base, &ctx)
        .checked_div(&inf(&[&b, &q_a, &z, &b_az], &base, &ctx))
        .unwrap();
    assert_close(&got.value, &want, SUM_TOL);
    assert!(got.terms_down > 0);
}

#[test]
fn terminating_chu_vandermonde() {
    // 2phi1(q^-n, b; c; q, q) = (c/b)_n b^n / (c)_n
    let ctx = ctx();
    let base = QBase::from_f64(0.6, &ctx).unwrap();
    let n = 6;
    let b = c(0.3, 0.2, &ctx);
    let cc = c(0.55, 0.0, &ctx);
    let spec = SeriesSpec::new(
        vec![ParamExpr::Plain(base.pow(-n)), ParamExpr::Plain(b.clone())],
        vec![ParamExpr::Plain(cc.clone())],
        base.q().clone(),
        Lower::Zero,
        base.clone(),
    )
    .unwrap();
    let got = eval_series(&spec, &ctx).unwrap();
    assert_eq!(got.terms_up, n as usize + 1);
    assert!(got.tail_bound.is_zero());
    let c_b = cc.checked_div(&b).unwrap();
    let want = (&poch_int(&c_b, n, &base, &ctx).unwrap().value * &b.powi(n).unwrap())
        .checked_div(&poch_int(&cc, n, &base, &ctx).unwrap().value)
        .unwrap();
    assert_close(&got.value, &want, SUM_TOL);
}

#[test]
fn very_well_poised_six_phi_five_sum() {
    let ctx = ctx();
    let base = QBase::from_f64(0.35, &ctx).unwrap();
    let q = base.q().clone();
    let a = c(0.4, 0.1, &ctx);
    let (b, cc, d) = (c(0.5, 0.0, &ctx), c(0.6, -0.2, &ctx), c(-0.7, 0.1, &ctx));
    let aq = &a * &q;
    let z = aq.checked_div(&(&(&b * &cc) * &d)).unwrap();
    let spec = SeriesSpec::vwp_from_numerators(
        &a,
        &[b.clone(), cc.clone(), d.clone()],
        z.clone(),
        Lower::Zero,
        &base,
    )
    .unwrap();
    let got = eval_series(&spec, &ctx).unwrap();
    let div = |x: &BoundedValue, y: &BoundedValue| x.checked_div(y).unwrap();
    let want = div(
        &inf(
            &[
                &aq,
                &div(&aq, &(&b * &cc)),
                &div(&aq, &(&b * &d)),
                &div(&aq, &(&cc * &d)),
            ],
            &base,
            &ctx,
        ),
        &inf(
            &[&div(&aq, &b), &div(&aq, &cc), &div(&aq, &d), &z],
            &base,
            &ctx,
        ),
    );
    assert_close(&got.value, &want, SUM_TOL);
}

/// `t_k` from plain MPC arithmetic: the recurrence run from `0` in the
/// appropriate direction, with pair tokens expanded into their two square
/// roots.
fn naive_term(numer: &[(f64, bool)], denom: &[(f64, bool)], z: f64, q: f64, k: i64) -> Complex {
    let prec = 400;
    let q = Float::with_val(prec, q);
    let expand = |list: &[(f64, bool)], upstairs: bool| -> Vec<Complex> {
        let mut out = Vec::new();
        for &(x, pair) in list {
            if pair {
                let r = Complex::with_val(prec, x).sqrt();
                let r = if upstairs { r * &q } else { r };
                out.push(Complex::with_val(prec, -&r));
                out.push(r);
            } else {
                out.push(Complex::with_val(prec, x));
            }
        }
        out
    };
    let (nu, de) = (expand(numer, true), expand(denom, false));
    let f = |x: &Complex, j: i64| -> Complex {
        let qj = Complex::with_val(prec, Float::with_val(prec, (&q).pow(j as i32)));
        Complex::with_val(prec, 1 - Complex::with_val(prec, x * &qj))
    };
    let mut t = Complex::with_val(prec, 1);
    if k >= 0 {
        for j in 0..k {
            for x in &nu {
                t *= f(x, j);
            }
            for x in &de {
                t /= f(x, j);
            }
            t *= z;
        }
    } else {
        for j in 1..=(-k) {
            for x in &de {
                t *= f(x, -j);
            }
            for x in &nu {
                t /= f(x, -j);
            }
            t /= z;
        }
    }
    t
}

#[test]
fn direct_terms_match_expanded_pairs() {
    let ctx = ctx();
    let qf = 0.4;
    let base = QBase::from_f64(qf, &ctx).unwrap();
    let numer = [(0.3, true), (0.8, false), (1.7, false)];
    let denom = [(0.3, true), (0.6, false), (0.9, false)];
    let to_expr = |l: &[(f64, bool)]| -> Vec<ParamExpr> {
        l.iter()
            .map(|&(x, pair)| {
                let v = BoundedValue::from_f64(x, ctx.bits());
                if pair {
                    ParamExpr::VwpPair(v)
                } else {
                    ParamExpr::Plain(v)
                }
            })
            .collect()
    };
    let spec = SeriesSpec::new(
        to_expr(&numer),
        to_expr(&denom),
        BoundedValue::from_f64(0.5, ctx.bits()),
        Lower::Bilateral,
        base,
    )
    .unwrap();
    for k in -6..=6 {
        let got = direct_term(&spec, k, &ctx).unwrap();
        let want = BoundedValue::exact(naive_term(&numer, &denom, 0.5, qf, k));
        assert_close(&got, &want, 1e-38);
    }
}

#[test]
fn term_ratio_matches_direct_terms() {
    let ctx = ctx();
    let base = QBase::from_f64(0.25, &ctx).unwrap();
    let a = c(0.3, 0.3, &ctx);
    let spec = SeriesSpec::vwp_from_numerators(
        &a,
        &[c(0.5, 0.0, &ctx), c(0.2, -0.4, &ctx), c(0.6, 0.1, &ctx)],
        c(0.2, 0.0, &ctx),
        Lower::Bilateral,
        &base,
    )
    .unwrap();
    for k in -4..4 {
        let ratio = term_ratio(&spec, k, &ctx).unwrap();
        let direct = direct_term(&spec, k + 1, &ctx)
            .unwrap()
            .checked_div(&direct_term(&spec, k, &ctx).unwrap())
            .unwrap();
        assert_close(&ratio, &direct, 1e-37);
    }
}

#[test]
fn shift_invariance_of_unilateral_sums() {
    let ctx = ctx();
    let base = QBase::from_f64(0.5, &ctx).unwrap();
    let a = c(0.45, 0.05, &ctx);
    let spec = SeriesSpec::vwp_from_numerators(
        &a,
        &[
            c(0.5, 0.0, &ctx),
            c(0.7, 0.1, &ctx),
            c(0.3, 0.0, &ctx),
            c(0.8, -0.1, &ctx),
        ],
        base.q().clone(),
        Lower::Zero,
        &base,
    )
    .unwrap();
    assert!(verify_shift_invariance(&spec, 0, &ctx).unwrap().is_zero());
    for n in [1, 3, 10] {
        let r = verify_shift_invariance(&spec, n, &ctx).unwrap();
        assert!(r.to_f64() < 1e-36, "n = {n}: {r}");
    }
}

#[test]
fn semi_finite_equals_partial_bilateral() {
    // sum_{k>=-n} differs from the bilateral sum by the explicit finite piece
    let ctx = ctx();
    let base = QBase::from_f64(0.35, &ctx).unwrap();
    let numer = vec![
        ParamExpr::Plain(c(0.4, 0.0, &ctx)),
        ParamExpr::Plain(c(0.9, 0.2, &ctx)),
    ];
    let denom = vec![
        ParamExpr::Plain(c(0.2, 0.0, &ctx)),
        ParamExpr::Plain(c(0.3, 0.0, &ctx)),
    ];
    let z = c(0.6, 0.0, &ctx);
    let mk = |lower| {
        SeriesSpec::new(numer.clone(), denom.clone(), z.clone(), lower, base.clone()).unwrap()
    };
    let full = eval_series(&mk(Lower::Bilateral), &ctx).unwrap().value;
    let n = 4;
    let semi = eval_series(&mk(Lower::MinusN(n)), &ctx).unwrap().value;
    let bilateral = mk(Lower::Bilateral);
    let mut below = BoundedValue::zero(ctx.bits());
    for k in (-120..-(n as i64)).rev() {
        below = &below + &direct_term(&bilateral, k, &ctx).unwrap();
    }
    assert_close(&full, &(&semi + &below), SUM_TOL);
}

#[test]
fn pole_in_denominator_is_reported() {
    let ctx = ctx();
    let base = QBase::from_f64(0.5, &ctx).unwrap();
    // 1 - b q^2 = 0
    let spec = SeriesSpec::new(
        vec![
            ParamExpr::Plain(c(0.3, 0.0, &ctx)),
            ParamExpr::Plain(c(0.2, 0.0, &ctx)),
        ],
        vec![ParamExpr::Plain(c(4.0, 0.0, &ctx))],
        c(0.5, 0.0, &ctx),
        Lower::Zero,
        base,
    )
    .unwrap();
    let err = eval_series(&spec, &ctx).unwrap_err();
    assert!(matches!(err, crate::Error::Pole { index: 2, .. }), "{err}");
}

#[test]
fn divergent_bilateral_reports_no_convergence() {
    let ctx = ctx().with_max_terms(500).unwrap();
    let base = QBase::from_f64(0.5, &ctx).unwrap();
    // |b/a| > |z|: the downward terms grow geometrically
    let spec = SeriesSpec::new(
        vec![ParamExpr::Plain(c(0.55, 0.0, &ctx))],
        vec![ParamExpr::Plain(c(0.45, 0.0, &ctx))],
        c(0.6, 0.0, &ctx),
        Lower::Bilateral,
        base,
    )
    .unwrap();
    let err = eval_series(&spec, &ctx).unwrap_err();
    assert!(err.is_no_convergence(), "{err}");
}

#[test]
fn arity_is_checked() {
    let ctx = ctx();
    let base = QBase::from_f64(0.5, &ctx).unwrap();
    let p = ParamExpr::Plain(c(0.3, 0.0, &ctx));
    assert!(SeriesSpec::new(
        vec![p.clone()],
        vec![p.clone()],
        c(0.1, 0.0, &ctx),
        Lower::Zero,
        base.clone()
    )
    .is_err());
    assert!(SeriesSpec::new(
        vec![p.clone()],
        vec![],
        c(0.1, 0.0, &ctx),
        Lower::Bilateral,
        base
    )
    .is_err());
}

#[test]
fn tail_bound_is_below_term_threshold() {
    let ctx = ctx();
    let base = QBase::from_f64(0.9, &ctx).unwrap();
    let spec = SeriesSpec::new(
        vec![ParamExpr::Plain(c(0.2, 0.0, &ctx))],
        vec![],
        c(0.8, 0.0, &ctx),
        Lower::Zero,
        base,
    )
    .unwrap();
    let r = eval_series(&spec, &ctx).unwrap();
    assert!(r.tail_bound > Mag::ZERO);
    assert!(r.tail_bound <= ctx.eps_term().mul(r.value.mid_upper()));
}

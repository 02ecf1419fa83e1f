use crate::error::{Error, Result};
use crate::mpnum::{BoundedValue, EvalContext, Mag};
use crate::qpoch::{poch_int, relative_residual, QBase};

use super::{Lower, ParamExpr, SeriesSpec};

/// Consecutive negligible terms required before a direction may stop.
const SMALL_WINDOW: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    /// The sum; `abs_err` includes `tail_bound`.
    pub value: BoundedValue,
    pub terms_up: usize,
    pub terms_down: usize,
    pub tail_bound: Mag,
    pub converged: bool,
}

/// `q^k`, `q^2k` and the fixed `q^2`, `q^-2` at the current index.
struct Powers {
    qk: BoundedValue,
    q2k: BoundedValue,
    q2: BoundedValue,
    q2_inv: BoundedValue,
}

impl Powers {
    fn at(base: &QBase, k: i64) -> Powers {
        let qk = base.pow(k);
        let q2k = &qk * &qk;
        let q2 = base.q() * base.q();
        let q2_inv = base.q_inv() * base.q_inv();
        Powers {
            qk,
            q2k,
            q2,
            q2_inv,
        }
    }

    fn step_up(&mut self, base: &QBase) {
        self.qk = &self.qk * base.q();
        self.q2k = &self.q2k * &self.q2;
    }

    fn step_down(&mut self, base: &QBase) {
        self.qk = &self.qk * base.q_inv();
        self.q2k = &self.q2k * &self.q2_inv;
    }

    /// The factor contributed at index `k` to `t_{k+1}/t_k`.
    fn factor(&self, p: &ParamExpr, upstairs: bool) -> BoundedValue {
        match p {
            ParamExpr::Plain(x) => (x * &self.qk).one_minus(),
            ParamExpr::VwpPair(a) if upstairs => (&(a * &self.q2k) * &self.q2).one_minus(),
            ParamExpr::VwpPair(a) => (a * &self.q2k).one_minus(),
        }
    }
}

enum Step {
    Ratio(BoundedValue),
    /// A factor that multiplies the next term vanishes identically, so every
    /// further term in this direction is zero.
    Terminates,
}

fn pole(side: &str, i: usize, k: i64, f: &BoundedValue) -> Error {
    Error::Pole {
        param: format!("{side} parameter #{i}"),
        index: k,
        modulus: f.abs_f64(),
    }
}

/// Product of the factors that multiply the next term (`mult`) divided by
/// `z^{±1}` and the factors that divide it (`div`).
fn step(
    mult: &[ParamExpr],
    mult_upstairs: bool,
    div: &[ParamExpr],
    pw: &Powers,
    k: i64,
    delta: Mag,
    prec: u32,
) -> Result<(Option<BoundedValue>, BoundedValue)> {
    let mut top = BoundedValue::one(prec);
    let mut vanishes = false;
    for p in mult {
        let f = pw.factor(p, mult_upstairs);
        if f.contains_zero() {
            vanishes = true;
        }
        top = &top * &f;
    }
    let mut bottom = BoundedValue::one(prec);
    for (i, p) in div.iter().enumerate() {
        let f = pw.factor(p, !mult_upstairs);
        if f.abs_lower() < delta {
            let side = if mult_upstairs {
                "denominator"
            } else {
                "numerator"
            };
            return Err(pole(side, i, k, &f));
        }
        bottom = &bottom * &f;
    }
    Ok((if vanishes { None } else { Some(top) }, bottom))
}

fn ratio_up(
    spec: &SeriesSpec,
    den: &[ParamExpr],
    pw: &Powers,
    k: i64,
    ctx: &EvalContext,
) -> Result<Step> {
    let delta = Mag::from_f64(ctx.pole_distance_min());
    let (top, bottom) = step(&spec.numer, true, den, pw, k, delta, ctx.bits())?;
    match top {
        None => Ok(Step::Terminates),
        Some(top) => Ok(Step::Ratio((&spec.z * &top).checked_div(&bottom)?)),
    }
}

fn ratio_down(
    spec: &SeriesSpec,
    den: &[ParamExpr],
    pw: &Powers,
    m: i64,
    ctx: &EvalContext,
) -> Result<Step> {
    let delta = Mag::from_f64(ctx.pole_distance_min());
    let (top, bottom) = step(den, false, &spec.numer, pw, m, delta, ctx.bits())?;
    match top {
        None => Ok(Step::Terminates),
        Some(top) => Ok(Step::Ratio(top.checked_div(&(&spec.z * &bottom))?)),
    }
}

/// `t_{k+1} / t_k = z prod(1 - a_i q^k) / prod(1 - b_j q^k)`, with a
/// numerator pair contributing `1 - A q^(2k+2)` and a denominator pair
/// `1 - A q^2k`. Unilateral series include the implicit `(q;q)_k`.
pub fn term_ratio(spec: &SeriesSpec, k: i64, ctx: &EvalContext) -> Result<BoundedValue> {
    let den = spec.effective_denominators();
    let pw = Powers::at(&spec.base, k);
    match ratio_up(spec, &den, &pw, k, ctx)? {
        Step::Ratio(r) => Ok(r),
        Step::Terminates => Ok(BoundedValue::zero(ctx.bits())),
    }
}

/// Upper bounds on `|x|` and lower bounds on `|x|` for each entry.
struct ParamBounds {
    upper: Vec<Mag>,
    lower: Vec<Mag>,
    exact_zero: Vec<bool>,
    pair: Vec<bool>,
}

impl ParamBounds {
    fn of(list: &[ParamExpr]) -> ParamBounds {
        ParamBounds {
            upper: list.iter().map(|p| p.value().abs_upper()).collect(),
            lower: list.iter().map(|p| p.value().abs_lower()).collect(),
            exact_zero: list.iter().map(|p| p.value().is_exact_zero()).collect(),
            pair: list
                .iter()
                .map(|p| matches!(p, ParamExpr::VwpPair(_)))
                .collect(),
        }
    }
}

/// `sup_{k >= K} |t_{k+1}/t_k|` given `qk = |q^K|` (upper bound).
fn upward_ratio_bound(z: Mag, num: &ParamBounds, den: &ParamBounds, qk: Mag, q_abs: Mag) -> Mag {
    let q2k = qk.mul(qk);
    let mut r = z;
    for i in 0..num.upper.len() {
        let w = if num.pair[i] {
            q2k.mul(q_abs).mul(q_abs)
        } else {
            qk
        };
        r = r.mul(Mag::ONE.add(num.upper[i].mul(w)));
    }
    for j in 0..den.upper.len() {
        let w = if den.pair[j] { q2k } else { qk };
        let low = Mag::ONE.sub_down(den.upper[j].mul(w));
        if low.is_zero() {
            return Mag::INFINITY;
        }
        r = r.div(low);
    }
    r
}

/// `sup_{m <= M} |t_{m-1}/t_m|`... expressed through `u = |q|^{-M}`, an upper
/// bound for `|q^{-m}|` over the remaining indices `m <= M < 0`.
fn downward_ratio_bound(
    z_low: Mag,
    num: &ParamBounds,
    den: &ParamBounds,
    u: Mag,
    q_inv_abs: Mag,
) -> Mag {
    if z_low.is_zero() {
        return Mag::INFINITY;
    }
    let count = |b: &ParamBounds| -> i64 {
        (0..b.upper.len())
            .filter(|&i| !b.exact_zero[i])
            .map(|i| if b.pair[i] { 2 } else { 1 })
            .sum()
    };
    let d = count(den) - count(num);
    if d > 0 {
        // |q^m|^d grows without bound as m -> -inf
        return Mag::INFINITY;
    }
    let u2 = u.mul(u);
    let mut r = Mag::ONE.div(z_low).mul(u.powi((-d) as u32));
    for j in 0..den.upper.len() {
        if den.exact_zero[j] {
            continue;
        }
        let w = if den.pair[j] { u2 } else { u };
        if den.lower[j].is_zero() {
            return Mag::INFINITY;
        }
        r = r.mul(den.upper[j]).mul(Mag::ONE.add(w.div(den.lower[j])));
    }
    for i in 0..num.upper.len() {
        if num.exact_zero[i] {
            continue;
        }
        if num.lower[i].is_zero() {
            return Mag::INFINITY;
        }
        let w = if num.pair[i] {
            r = r.mul(q_inv_abs).mul(q_inv_abs);
            u2.mul(q_inv_abs).mul(q_inv_abs)
        } else {
            u
        };
        let low = Mag::ONE.sub_down(w.div(num.lower[i]));
        if low.is_zero() {
            return Mag::INFINITY;
        }
        r = r.div(num.lower[i]).div(low);
    }
    r
}

struct Sweep {
    sum: BoundedValue,
    terms: usize,
    tail: Mag,
}

fn geometric_tail(t: Mag, r: Mag) -> Option<Mag> {
    if r >= Mag::ONE {
        return None;
    }
    Some(t.mul(r).div(Mag::ONE.sub_down(r)))
}

fn sweep_up(
    spec: &SeriesSpec,
    den: &[ParamExpr],
    k0: i64,
    t0: BoundedValue,
    ctx: &EvalContext,
) -> Result<Sweep> {
    let base = &spec.base;
    let eps = ctx.eps_term();
    let num_b = ParamBounds::of(&spec.numer);
    let den_b = ParamBounds::of(den);
    let z_up = spec.z.abs_upper();
    let mut pw = Powers::at(base, k0);
    let mut k = k0;
    let mut t = t0;
    let mut sum = t.clone();
    let mut terms = 1;
    let mut small = 0;
    loop {
        let s_ref = eps.mul(sum.mid_upper());
        let t_up = t.abs_upper();
        small = if t_up <= s_ref { small + 1 } else { 0 };
        if small >= SMALL_WINDOW {
            let r = upward_ratio_bound(z_up, &num_b, &den_b, pw.qk.abs_upper(), base.abs_upper());
            if let Some(tail) = geometric_tail(t_up, r) {
                if tail <= s_ref {
                    return Ok(Sweep { sum, terms, tail });
                }
            }
        }
        if terms >= ctx.max_terms() {
            return Err(Error::NoConvergence(format!(
                "upward sum not certified after {terms} terms (last |t_k| = {t_up})"
            )));
        }
        match ratio_up(spec, den, &pw, k, ctx)? {
            Step::Terminates => {
                return Ok(Sweep {
                    sum,
                    terms,
                    tail: Mag::ZERO,
                })
            }
            Step::Ratio(r) => t = &t * &r,
        }
        pw.step_up(base);
        k += 1;
        sum = &sum + &t;
        terms += 1;
    }
}

fn sweep_down(
    spec: &SeriesSpec,
    den: &[ParamExpr],
    t0: BoundedValue,
    up_sum: &BoundedValue,
    ctx: &EvalContext,
) -> Result<Sweep> {
    let base = &spec.base;
    let eps = ctx.eps_term();
    let num_b = ParamBounds::of(&spec.numer);
    let den_b = ParamBounds::of(den);
    let z_low = spec.z.abs_lower();
    if z_low.is_zero() {
        return Err(Error::NoConvergence("bilateral series with z = 0".into()));
    }
    let q_inv_abs = base.q_inv().abs_upper();
    let mut pw = Powers::at(base, 0);
    let mut m = 0i64;
    let mut t = t0;
    let mut sum = BoundedValue::zero(ctx.bits());
    let mut terms = 0;
    let mut small = 0;
    loop {
        if terms >= ctx.max_terms() {
            return Err(Error::NoConvergence(format!(
                "downward sum not certified after {terms} terms"
            )));
        }
        m -= 1;
        pw.step_down(base);
        match ratio_down(spec, den, &pw, m, ctx)? {
            Step::Terminates => {
                return Ok(Sweep {
                    sum,
                    terms,
                    tail: Mag::ZERO,
                })
            }
            Step::Ratio(r) => t = &t * &r,
        }
        sum = &sum + &t;
        terms += 1;
        let s_ref = eps.mul((up_sum + &sum).mid_upper());
        let t_up = t.abs_upper();
        small = if t_up <= s_ref { small + 1 } else { 0 };
        if small >= SMALL_WINDOW {
            // remaining indices are m' <= m - 1, where |q^{-m'}| <= |q|^{1-m}
            let u = Mag::ONE.div(pw.qk.abs_lower()).mul(base.abs_upper());
            let r = downward_ratio_bound(z_low, &num_b, &den_b, u, q_inv_abs);
            if let Some(tail) = geometric_tail(t_up, r) {
                if tail <= s_ref {
                    return Ok(Sweep { sum, terms, tail });
                }
            }
        }
    }
}

/// Sums the series by the ratio recurrence: upward from `k = 0` (or from the
/// directly computed `t_{-n}` for semi-finite sums) and, for bilateral
/// series, downward from `k = -1`. Each direction stops after
/// `SMALL_WINDOW` negligible terms once a geometric tail bound is certified;
/// the tails are added to the error bound.
pub fn eval_series(spec: &SeriesSpec, ctx: &EvalContext) -> Result<EvalResult> {
    spec.validate()?;
    let den = spec.effective_denominators();
    let (k0, t0) = match spec.lower {
        Lower::Zero | Lower::Bilateral => (0, BoundedValue::one(ctx.bits())),
        Lower::MinusN(n) => (-(n as i64), direct_term(spec, -(n as i64), ctx)?),
    };
    let up = sweep_up(spec, &den, k0, t0.clone(), ctx)?;
    let (mut sum, mut tail, terms_down) = (up.sum, up.tail, 0);
    let terms_up = up.terms;
    let terms_down = if spec.lower == Lower::Bilateral {
        let down = sweep_down(spec, &den, t0, &sum, ctx)?;
        sum = &sum + &down.sum;
        tail = tail.add(down.tail);
        down.terms
    } else {
        terms_down
    };
    sum.abs_err = sum.abs_err.add(tail);
    Ok(EvalResult {
        value: sum,
        terms_up,
        terms_down,
        tail_bound: tail,
        converged: true,
    })
}

/// `(x;q)_k` for the entry `p` evaluated as a Pochhammer symbol, with pairs
/// mapped to base `q^2`.
fn entry_poch(
    p: &ParamExpr,
    upstairs: bool,
    k: i64,
    base: &QBase,
    base2: &QBase,
    ctx: &EvalContext,
) -> Result<crate::qpoch::PochValue> {
    match p {
        ParamExpr::Plain(x) => poch_int(x, k, base, ctx),
        ParamExpr::VwpPair(a) if upstairs => poch_int(&(a * base2.q()), k, base2, ctx),
        ParamExpr::VwpPair(a) => poch_int(a, k, base2, ctx),
    }
}

/// `prod_{j=1}^{m} (1 - x b^-j)`, the reciprocal of `(x;b)_{-m}`.
fn reflected(
    x: &BoundedValue,
    m: i64,
    b: &QBase,
    ctx: &EvalContext,
) -> Result<crate::qpoch::PochValue> {
    poch_int(&(x * &b.pow(-m)), m, b, ctx)
}

/// The term `t_k` computed from its closed form as a Pochhammer quotient.
pub fn direct_term(spec: &SeriesSpec, k: i64, ctx: &EvalContext) -> Result<BoundedValue> {
    let base = &spec.base;
    let base2 = base.squared();
    let den = spec.effective_denominators();
    let delta = Mag::from_f64(ctx.pole_distance_min());
    let prec = ctx.bits();
    let mut top = BoundedValue::one(prec);
    let mut bottom = BoundedValue::one(prec);
    if k >= 0 {
        for p in &spec.numer {
            top = &top * &entry_poch(p, true, k, base, &base2, ctx)?.value;
        }
        for (j, p) in den.iter().enumerate() {
            let v = entry_poch(p, false, k, base, &base2, ctx)?;
            if v.min_factor < delta {
                return Err(Error::Pole {
                    param: format!("denominator parameter #{j}"),
                    index: k,
                    modulus: v.min_factor.to_f64(),
                });
            }
            bottom = &bottom * &v.value;
        }
        return (&top * &spec.z.powi(k)?).checked_div(&bottom);
    }
    let m = -k;
    let shifted = |p: &ParamExpr, upstairs: bool| -> Result<crate::qpoch::PochValue> {
        match p {
            ParamExpr::Plain(x) => reflected(x, m, base, ctx),
            ParamExpr::VwpPair(a) if upstairs => reflected(&(a * base2.q()), m, &base2, ctx),
            ParamExpr::VwpPair(a) => reflected(a, m, &base2, ctx),
        }
    };
    // t_k = z^k prod (a)_k / prod (b)_k with (x)_k = 1 / reflected(x)
    for p in &den {
        top = &top * &shifted(p, false)?.value;
    }
    for (i, p) in spec.numer.iter().enumerate() {
        let v = shifted(p, true)?;
        if v.min_factor < delta {
            return Err(Error::Pole {
                param: format!("numerator parameter #{i}"),
                index: k,
                modulus: v.min_factor.to_f64(),
            });
        }
        bottom = &bottom * &v.value;
    }
    top.checked_div(&(&bottom * &spec.z.powi(m)?))
}

/// Evaluates `sum_{k>=0} a(k)` and `sum_{k>=-n} a(k+n)` as two independent
/// summations and returns their relative difference.
pub fn verify_shift_invariance(spec: &SeriesSpec, n: u32, ctx: &EvalContext) -> Result<Mag> {
    if spec.lower != Lower::Zero {
        return Err(Error::Config(
            "shift invariance needs a unilateral series".into(),
        ));
    }
    if n == 0 {
        return Ok(Mag::ZERO);
    }
    let direct = eval_series(spec, ctx)?;
    let shifted = shift_by(spec, n)?;
    let t_n = direct_term(spec, n as i64, ctx)?;
    let via_shift = &t_n * &eval_series(&shifted, ctx)?.value;
    Ok(relative_residual(&direct.value, &via_shift))
}

/// The semi-finite series whose `k`-th term is `t_{k+n} / t_n`.
fn shift_by(spec: &SeriesSpec, n: u32) -> Result<SeriesSpec> {
    let base = &spec.base;
    let qn = base.pow(n as i64);
    let q2n = &qn * &qn;
    let shift = |p: &ParamExpr| match p {
        ParamExpr::Plain(x) => ParamExpr::Plain(x * &qn),
        ParamExpr::VwpPair(a) => ParamExpr::VwpPair(a * &q2n),
    };
    let numer = spec.numer.iter().map(shift).collect();
    let mut denom: Vec<ParamExpr> = spec.denom.iter().map(shift).collect();
    denom.push(ParamExpr::Plain(base.pow(n as i64 + 1)));
    SeriesSpec::new(numer, denom, spec.z.clone(), Lower::MinusN(n), base.clone())
}

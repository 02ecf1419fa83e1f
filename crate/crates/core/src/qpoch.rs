//! q-shifted factorials `(a;q)_k` for integer `k`, infinite products
//! `(a;q)_inf`, multi-parameter products and the elementary reflection
//! identities used to normalize shifted factorials with negative offsets.

use rug::Complex;

use crate::error::{Error, Result};
use crate::mpnum::{complex_abs_bounds, BoundedValue, EvalContext, Mag};

/// The base `q` of all products and series, with `0 < |q| < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QBase {
    q: BoundedValue,
    q_inv: BoundedValue,
    abs_upper: Mag,
}

impl QBase {
    pub fn new(q: BoundedValue) -> Result<QBase> {
        let abs_upper = q.abs_upper();
        if abs_upper >= Mag::ONE || q.contains_zero() {
            return Err(Error::ConstraintViolation(format!(
                "base must satisfy 0 < |q| < 1, got |q| = {}",
                q.mid_upper()
            )));
        }
        let q_inv = q.recip()?;
        Ok(QBase {
            q,
            q_inv,
            abs_upper,
        })
    }

    pub fn from_f64(q: f64, ctx: &EvalContext) -> Result<QBase> {
        QBase::new(BoundedValue::from_f64(q, ctx.bits()))
    }

    pub fn q(&self) -> &BoundedValue {
        &self.q
    }

    pub fn q_inv(&self) -> &BoundedValue {
        &self.q_inv
    }

    /// Upper bound on `|q|`.
    pub fn abs_upper(&self) -> Mag {
        self.abs_upper
    }

    /// `q^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> BoundedValue {
        if k >= 0 {
            self.q.powi(k).expect("nonnegative powers never divide")
        } else {
            self.q_inv
                .powi(-k)
                .expect("nonnegative powers never divide")
        }
    }

    /// The base `q^2`, used for the square-root pairs of very-well-poised series.
    pub fn squared(&self) -> QBase {
        QBase::new(&self.q * &self.q).expect("|q^2| < |q| < 1")
    }
}

/// Order of a shifted factorial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochOrder {
    Finite(i64),
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochIndex {
    FiniteNonNeg,
    FiniteNeg,
    Infinite,
}

/// A shifted factorial value. `min_factor` is a lower bound on the modulus
/// of every factor `1 - a q^j` in the product, used to detect denominators
/// that sit near a zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PochValue {
    pub value: BoundedValue,
    pub index: PochIndex,
    pub min_factor: Mag,
}

impl PochValue {
    fn unit(prec: u32, index: PochIndex) -> PochValue {
        PochValue {
            value: BoundedValue::one(prec),
            index,
            min_factor: Mag::INFINITY,
        }
    }
}

fn short(x: &BoundedValue) -> String {
    x.to_decimal(8)
}

/// `(a;q)_inf`, truncated once `|a| |q|^J / (1 - |q|)` drops below the
/// context's product threshold; the multiplicative tail is bounded and
/// folded into `abs_err`.
pub fn poch_inf(a: &BoundedValue, base: &QBase, ctx: &EvalContext) -> PochValue {
    let prec = ctx.bits();
    let mut out = PochValue::unit(prec, PochIndex::Infinite);
    if a.is_exact_zero() {
        return out;
    }
    let eps = ctx.product_eps();
    let one_minus_q = Mag::ONE.sub_down(base.abs_upper());
    let mut x = a.clone();
    let (s, mut prod) = loop {
        let s = x.abs_upper().div(one_minus_q);
        if s < eps {
            break (s, out.value);
        }
        let f = x.one_minus();
        out.min_factor = out.min_factor.min_with(f.abs_lower());
        out.value = &out.value * &f;
        x = &x * base.q();
    };
    // |prod_{j>=J}(1 - a q^j) - 1| <= exp(s) - 1 <= s / (1 - s)
    let tau = s.div(Mag::ONE.sub_down(s));
    prod.abs_err = prod.abs_err.add(prod.abs_upper().mul(tau));
    out.value = prod;
    out.min_factor = out.min_factor.min_with(Mag::ONE.sub_down(s));
    out
}

/// `(a;q)_k` for any integer `k`: the direct product for `k >= 0`, and
/// `1 / prod_{j=1}^{-k} (1 - a q^-j)` for `k < 0`.
pub fn poch_int(a: &BoundedValue, k: i64, base: &QBase, ctx: &EvalContext) -> Result<PochValue> {
    let prec = ctx.bits();
    if k >= 0 {
        let mut out = PochValue::unit(prec, PochIndex::FiniteNonNeg);
        let mut x = a.clone();
        for j in 0..k {
            let f = x.one_minus();
            out.min_factor = out.min_factor.min_with(f.abs_lower());
            out.value = &out.value * &f;
            if j + 1 < k {
                x = &x * base.q();
            }
        }
        return Ok(out);
    }
    let delta = Mag::from_f64(ctx.pole_distance_min());
    let mut denom = BoundedValue::one(prec);
    let mut min_factor = Mag::INFINITY;
    let mut x = a * base.q_inv();
    for j in 1..=(-k) {
        let f = x.one_minus();
        let low = f.abs_lower();
        if low < delta {
            return Err(Error::Pole {
                param: format!("({};q)_{k}", short(a)),
                index: -j,
                modulus: f.abs_f64(),
            });
        }
        min_factor = min_factor.min_with(low);
        denom = &denom * &f;
        if j < -k {
            x = &x * base.q_inv();
        }
    }
    Ok(PochValue {
        value: denom.recip()?,
        index: PochIndex::FiniteNeg,
        min_factor,
    })
}

/// `(a_1, ..., a_m; q)_k`. Errors carry the offending parameter index.
pub fn poch_multi(
    params: &[BoundedValue],
    order: PochOrder,
    base: &QBase,
    ctx: &EvalContext,
) -> Result<PochValue> {
    let index = match order {
        PochOrder::Infinite => PochIndex::Infinite,
        PochOrder::Finite(k) if k < 0 => PochIndex::FiniteNeg,
        PochOrder::Finite(_) => PochIndex::FiniteNonNeg,
    };
    let mut out = PochValue::unit(ctx.bits(), index);
    for (i, a) in params.iter().enumerate() {
        let p = match order {
            PochOrder::Infinite => poch_inf(a, base, ctx),
            PochOrder::Finite(k) => poch_int(a, k, base, ctx).map_err(|e| match e {
                Error::Pole {
                    param,
                    index,
                    modulus,
                } => Error::Pole {
                    param: format!("parameter #{i} {param}"),
                    index,
                    modulus,
                },
                other => other,
            })?,
        };
        out.min_factor = out.min_factor.min_with(p.min_factor);
        out.value = &out.value * &p.value;
    }
    Ok(out)
}

/// `(numer)_k / (denom)_k`. Every factor of a nonnegative-order or infinite
/// denominator must stay `pole_distance_min` away from zero.
pub fn poch_ratio(
    numer: &[BoundedValue],
    denom: &[BoundedValue],
    order: PochOrder,
    base: &QBase,
    ctx: &EvalContext,
) -> Result<BoundedValue> {
    let top = poch_multi(numer, order, base, ctx)?;
    let mut bottom = BoundedValue::one(ctx.bits());
    let delta = Mag::from_f64(ctx.pole_distance_min());
    for a in denom {
        let p = match order {
            PochOrder::Infinite => poch_inf(a, base, ctx),
            PochOrder::Finite(k) => poch_int(a, k, base, ctx)?,
        };
        if p.index != PochIndex::FiniteNeg && p.min_factor < delta {
            return Err(Error::Pole {
                param: format!("denominator ({};q)", short(a)),
                index: 0,
                modulus: p.min_factor.to_f64(),
            });
        }
        bottom = &bottom * &p.value;
    }
    top.value.checked_div(&bottom)
}

/// Which elementary identity to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elementary {
    /// `(xq^-2n)_inf / (xq^-2n)_n = (-1)^n x^n q^-(n^2+n)/2 (q/x)_n (x)_inf`
    InfiniteOverFinite,
    /// `(xq^-2n)_n = (-1)^n x^n q^-(3n^2+n)/2 (q^(n+1)/x)_n`
    DoubleShiftedFinite,
    /// `(xq^-n)_n = (-1)^n x^n q^-(n^2+n)/2 (q/x)_n`
    ShiftedFinite,
}

/// `|l - r| / max(|l|, |r|)` on the centers, or zero when they coincide.
pub fn relative_residual(l: &BoundedValue, r: &BoundedValue) -> Mag {
    let num = (l - r).mid_upper();
    if num.is_zero() {
        return Mag::ZERO;
    }
    let scale = complex_abs_bounds(&l.value)
        .0
        .max(complex_abs_bounds(&r.value).0);
    num.div(scale)
}

/// Evaluates both sides of one elementary identity independently and
/// returns their relative residual.
pub fn elementary_id_check(
    which: Elementary,
    x: &BoundedValue,
    n: u32,
    base: &QBase,
    ctx: &EvalContext,
) -> Result<Mag> {
    let n = n as i64;
    let sign_pow = {
        // (-1)^n x^n
        let xn = x.powi(n)?;
        if n % 2 == 0 {
            xn
        } else {
            -&xn
        }
    };
    let (lhs, rhs) = match which {
        Elementary::InfiniteOverFinite => {
            let shifted = x * &base.pow(-2 * n);
            let lhs = poch_inf(&shifted, base, ctx)
                .value
                .checked_div(&finite_checked(&shifted, n, base, ctx)?)?;
            let q_over_x = base.q().checked_div(x)?;
            let rhs = &(&sign_pow * &base.pow(-(n * n + n) / 2))
                * &(&poch_int(&q_over_x, n, base, ctx)?.value * &poch_inf(x, base, ctx).value);
            (lhs, rhs)
        }
        Elementary::DoubleShiftedFinite => {
            let shifted = x * &base.pow(-2 * n);
            let lhs = poch_int(&shifted, n, base, ctx)?.value;
            let arg = base.pow(n + 1).checked_div(x)?;
            let rhs = &(&sign_pow * &base.pow(-(3 * n * n + n) / 2))
                * &poch_int(&arg, n, base, ctx)?.value;
            (lhs, rhs)
        }
        Elementary::ShiftedFinite => {
            let shifted = x * &base.pow(-n);
            let lhs = poch_int(&shifted, n, base, ctx)?.value;
            let q_over_x = base.q().checked_div(x)?;
            let rhs = &(&sign_pow * &base.pow(-(n * n + n) / 2))
                * &poch_int(&q_over_x, n, base, ctx)?.value;
            (lhs, rhs)
        }
    };
    Ok(relative_residual(&lhs, &rhs))
}

/// `(a)_n` for `n >= 0`, rejecting factors within the pole distance.
fn finite_checked(
    a: &BoundedValue,
    n: i64,
    base: &QBase,
    ctx: &EvalContext,
) -> Result<BoundedValue> {
    let p = poch_int(a, n, base, ctx)?;
    if p.min_factor < Mag::from_f64(ctx.pole_distance_min()) {
        return Err(Error::Pole {
            param: format!("({};q)_{n}", short(a)),
            index: n,
            modulus: p.min_factor.to_f64(),
        });
    }
    Ok(p.value)
}

/// Convenience constructor for a real parameter at context precision.
pub fn real(x: f64, ctx: &EvalContext) -> BoundedValue {
    BoundedValue::exact(Complex::with_val(ctx.bits(), x))
}

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Round;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::mpnum::Mag;

/// A complex value `value` together with a bound `abs_err >= |true - value|`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedValue {
    pub value: Complex,
    pub abs_err: Mag,
}

/// Lower and upper bounds on `|z|`.
pub fn complex_abs_bounds(z: &Complex) -> (Mag, Mag) {
    let (re, im) = (z.real(), z.imag());
    match (re.is_zero(), im.is_zero()) {
        (true, true) => return (Mag::ZERO, Mag::ZERO),
        (false, true) => return (Mag::from_float_down(re), Mag::from_float_up(re)),
        (true, false) => return (Mag::from_float_down(im), Mag::from_float_up(im)),
        _ => {}
    }
    let (mr, er) = re.to_f64_exp();
    let (mi, ei) = im.to_f64_exp();
    let e = er.max(ei);
    let r = mr.abs() * 2f64.powi((er - e).max(-1070));
    let i = mi.abs() * 2f64.powi((ei - e).max(-1070));
    let h = r.hypot(i);
    let scale = Mag::pow2(e as i64);
    // hypot is accurate to ~1 ulp; the scaled-away component is below 2^-1070
    let up = Mag::from_f64(h * (1.0 + 8.0 * f64::EPSILON) + 2f64.powi(-1060)).mul(scale);
    let down = Mag::from_f64(h * (1.0 - 8.0 * f64::EPSILON)).mul_down(scale);
    (down, up)
}

const NEAREST: (Round, Round) = (Round::Nearest, Round::Nearest);

/// Bound on the rounding error of one MPC operation producing `z` at `prec` bits.
fn rounding_err(z: &Complex, prec: u32) -> Mag {
    complex_abs_bounds(z).1.mul(Mag::pow2(2 - prec as i64))
}

/// Rounding error given MPC's ternary result; zero when both parts were exact.
fn rounding_err_dir(z: &Complex, dir: (Ordering, Ordering), prec: u32) -> Mag {
    if dir == (Ordering::Equal, Ordering::Equal) {
        Mag::ZERO
    } else {
        rounding_err(z, prec)
    }
}

impl BoundedValue {
    /// An exact value.
    pub fn exact(value: Complex) -> BoundedValue {
        BoundedValue {
            value,
            abs_err: Mag::ZERO,
        }
    }

    pub fn new(value: Complex, abs_err: Mag) -> BoundedValue {
        BoundedValue { value, abs_err }
    }

    pub fn zero(prec: u32) -> BoundedValue {
        BoundedValue::exact(Complex::new(prec))
    }

    pub fn one(prec: u32) -> BoundedValue {
        BoundedValue::exact(Complex::with_val(prec, 1))
    }

    /// The binary value nearest to `re` taken as exact.
    pub fn from_f64(re: f64, prec: u32) -> BoundedValue {
        BoundedValue::exact(Complex::with_val(prec, re))
    }

    pub fn from_parts(re: f64, im: f64, prec: u32) -> BoundedValue {
        BoundedValue::exact(Complex::with_val(prec, (re, im)))
    }

    /// Parses a decimal string, either `re` or `(re im)`. The parsed value is
    /// rounded to `prec` bits and the rounding is recorded in `abs_err`.
    pub fn parse(s: &str, prec: u32) -> Result<BoundedValue> {
        let parsed = Complex::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let (value, dir) = Complex::with_val_round(prec, parsed, NEAREST);
        let abs_err = rounding_err_dir(&value, dir, prec);
        Ok(BoundedValue { value, abs_err })
    }

    pub fn prec(&self) -> u32 {
        self.value.prec().0.max(self.value.prec().1)
    }

    /// Upper bound on `|value|` (the center only).
    pub fn mid_upper(&self) -> Mag {
        complex_abs_bounds(&self.value).1
    }

    /// Upper bound on `|true value|`.
    pub fn abs_upper(&self) -> Mag {
        self.mid_upper().add(self.abs_err)
    }

    /// Lower bound on `|true value|`, zero if the error ball contains zero.
    pub fn abs_lower(&self) -> Mag {
        complex_abs_bounds(&self.value).0.sub_down(self.abs_err)
    }

    /// Whether zero lies in the error ball.
    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.value.real().is_zero() && self.value.imag().is_zero() && self.abs_err.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.value.imag().is_zero()
    }

    /// Approximate modulus as f64, saturating.
    pub fn abs_f64(&self) -> f64 {
        self.mid_upper().to_f64()
    }

    pub fn checked_div(&self, rhs: &BoundedValue) -> Result<BoundedValue> {
        let denom_low = rhs.abs_lower();
        if denom_low.is_zero() {
            return Err(Error::DivisionNearZero);
        }
        let prec = self.prec().max(rhs.prec());
        let (value, dir) = Complex::with_val_round(prec, &self.value / &rhs.value, NEAREST);
        let prop = if self.abs_err.is_zero() && rhs.abs_err.is_zero() {
            Mag::ZERO
        } else {
            let q_mag = complex_abs_bounds(&value).1;
            self.abs_err.add(q_mag.mul(rhs.abs_err)).div(denom_low)
        };
        let abs_err = prop.add(rounding_err_dir(&value, dir, prec));
        Ok(BoundedValue { value, abs_err })
    }

    pub fn recip(&self) -> Result<BoundedValue> {
        BoundedValue::one(self.prec()).checked_div(self)
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> BoundedValue {
        let prec = self.prec();
        let (value, dir) = Complex::with_val_round(prec, 1 - &self.value, NEAREST);
        let abs_err = self.abs_err.add(rounding_err_dir(&value, dir, prec));
        BoundedValue { value, abs_err }
    }

    /// `self^k` for any integer `k` by binary powering.
    pub fn powi(&self, k: i64) -> Result<BoundedValue> {
        let mut acc = BoundedValue::one(self.prec());
        let mut base = self.clone();
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if k < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    /// Multiplication by an exact small integer.
    pub fn mul_i64(&self, k: i64) -> BoundedValue {
        let prec = self.prec();
        let (value, dir) = Complex::with_val_round(prec, &self.value * k, NEAREST);
        let abs_err = self
            .abs_err
            .mul(Mag::from_f64(k.unsigned_abs() as f64))
            .add(rounding_err_dir(&value, dir, prec));
        BoundedValue { value, abs_err }
    }

    /// Decimal rendering of the center with `digits` significant digits:
    /// `re` when the imaginary part is zero, otherwise `(re im)`.
    pub fn to_decimal(&self, digits: usize) -> String {
        complex_to_decimal(&self.value, digits)
    }
}

pub(crate) fn float_to_decimal(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}

pub(crate) fn complex_to_decimal(z: &Complex, digits: usize) -> String {
    if z.imag().is_zero() {
        float_to_decimal(z.real(), digits)
    } else {
        format!(
            "({} {})",
            float_to_decimal(z.real(), digits),
            float_to_decimal(z.imag(), digits)
        )
    }
}

impl Add for &BoundedValue {
    type Output = BoundedValue;

    fn add(self, rhs: &BoundedValue) -> BoundedValue {
        let prec = self.prec().max(rhs.prec());
        let (value, dir) = Complex::with_val_round(prec, &self.value + &rhs.value, NEAREST);
        let abs_err = self
            .abs_err
            .add(rhs.abs_err)
            .add(rounding_err_dir(&value, dir, prec));
        BoundedValue { value, abs_err }
    }
}

impl Sub for &BoundedValue {
    type Output = BoundedValue;

    fn sub(self, rhs: &BoundedValue) -> BoundedValue {
        let prec = self.prec().max(rhs.prec());
        let (value, dir) = Complex::with_val_round(prec, &self.value - &rhs.value, NEAREST);
        let abs_err = self
            .abs_err
            .add(rhs.abs_err)
            .add(rounding_err_dir(&value, dir, prec));
        BoundedValue { value, abs_err }
    }
}

impl Mul for &BoundedValue {
    type Output = BoundedValue;

    fn mul(self, rhs: &BoundedValue) -> BoundedValue {
        let prec = self.prec().max(rhs.prec());
        let (value, dir) = Complex::with_val_round(prec, &self.value * &rhs.value, NEAREST);
        let abs_err = if self.abs_err.is_zero() && rhs.abs_err.is_zero() {
            Mag::ZERO
        } else {
            self.mid_upper()
                .mul(rhs.abs_err)
                .add(rhs.mid_upper().mul(self.abs_err))
                .add(self.abs_err.mul(rhs.abs_err))
        };
        let abs_err = abs_err.add(rounding_err_dir(&value, dir, prec));
        BoundedValue { value, abs_err }
    }
}

impl Neg for &BoundedValue {
    type Output = BoundedValue;

    fn neg(self) -> BoundedValue {
        BoundedValue {
            value: Complex::with_val(self.prec(), -&self.value),
            abs_err: self.abs_err,
        }
    }
}

impl Add for BoundedValue {
    type Output = BoundedValue;
    fn add(self, rhs: BoundedValue) -> BoundedValue {
        &self + &rhs
    }
}

impl Sub for BoundedValue {
    type Output = BoundedValue;
    fn sub(self, rhs: BoundedValue) -> BoundedValue {
        &self - &rhs
    }
}

impl Mul for BoundedValue {
    type Output = BoundedValue;
    fn mul(self, rhs: BoundedValue) -> BoundedValue {
        &self * &rhs
    }
}

impl fmt::Display for BoundedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.to_decimal(25), self.abs_err)
    }
}

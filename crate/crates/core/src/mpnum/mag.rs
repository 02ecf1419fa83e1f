//! Nonnegative magnitudes with an unbounded exponent, used for error bounds.
//!
//! A [`Mag`] stores `m * 2^e` with `m` in `[0.5, 1)` (or exactly zero). Every
//! operation rounds in the direction that keeps the result a valid upper
//! bound, except the explicitly named `*_down` helpers which produce lower
//! bounds. The exponent is an `i64`, so values such as `10^-5000` or
//! `10^800` that show up in shifted factorials stay representable.

use std::cmp::Ordering;
use std::fmt;

use rug::Float;

/// Relative widening applied after each rounded-to-nearest f64 step.
const UP: f64 = 1.0 + 4.0 * f64::EPSILON;
const DOWN: f64 = 1.0 - 4.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mag {
    m: f64,
    e: i64,
}

/// Splits a positive finite f64 into `(m, e)` with `m` in `[0.5, 1)`.
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal: rescale into the normal range first
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = raw_exp - 1022;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, e)
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0.0, e: 0 };
    pub const ONE: Mag = Mag { m: 0.5, e: 1 };

    fn normalized(m: f64, e: i64) -> Mag {
        if m == 0.0 {
            return Mag::ZERO;
        }
        assert!(
            m.is_finite() && m > 0.0,
            "magnitude must be finite and nonnegative"
        );
        let (mm, me) = frexp(m);
        Mag { m: mm, e: e + me }
    }

    /// Upper bound for a nonnegative f64.
    pub fn from_f64(x: f64) -> Mag {
        assert!(x >= 0.0 && !x.is_nan(), "Mag::from_f64 of {x}");
        if x.is_infinite() {
            return Mag::INFINITY;
        }
        Mag::normalized(x, 0)
    }

    /// Sentinel "no finite bound" value.
    pub const INFINITY: Mag = Mag {
        m: f64::INFINITY,
        e: 0,
    };

    pub fn is_infinite(self) -> bool {
        self.m.is_infinite()
    }

    pub fn is_zero(self) -> bool {
        self.m == 0.0
    }

    /// `2^e` exactly.
    pub fn pow2(e: i64) -> Mag {
        Mag { m: 0.5, e: e + 1 }
    }

    /// Upper bound on `|x|` for an MPFR float.
    pub fn from_float_up(x: &Float) -> Mag {
        if x.is_zero() {
            return Mag::ZERO;
        }
        if x.is_infinite() || x.is_nan() {
            return Mag::INFINITY;
        }
        let (m, e) = x.to_f64_exp();
        Mag::normalized(m.abs() * UP, e as i64)
    }

    /// Lower bound on `|x|` for an MPFR float.
    pub fn from_float_down(x: &Float) -> Mag {
        if x.is_zero() || x.is_nan() {
            return Mag::ZERO;
        }
        if x.is_infinite() {
            return Mag::INFINITY;
        }
        let (m, e) = x.to_f64_exp();
        Mag::normalized(m.abs() * DOWN, e as i64)
    }

    /// Exact conversion to an MPFR float of the given precision (rounded up).
    pub fn to_float(self, prec: u32) -> Float {
        if self.is_infinite() {
            return Float::with_val(prec, rug::float::Special::Infinity);
        }
        let mut f = Float::with_val(prec.max(64), self.m);
        f <<= self.e as i32;
        f
    }

    /// Saturating conversion; may return 0 or +inf outside the f64 range.
    pub fn to_f64(self) -> f64 {
        if self.is_infinite() {
            return f64::INFINITY;
        }
        if self.e > 1100 {
            return f64::INFINITY;
        }
        if self.e < -1100 {
            return 0.0;
        }
        self.m * 2f64.powi(self.e as i32)
    }

    /// Base-10 logarithm, approximate (for reporting and sizing only).
    pub fn log10(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        if self.is_infinite() {
            return f64::INFINITY;
        }
        self.m.log10() + self.e as f64 * std::f64::consts::LOG10_2
    }

    pub fn add(self, o: Mag) -> Mag {
        if self.is_infinite() || o.is_infinite() {
            return Mag::INFINITY;
        }
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let shift = hi.e - lo.e;
        if shift > 60 {
            // lo < 2^-60 hi; absorb it into the rounding slack
            return Mag::normalized(hi.m * (1.0 + 2f64.powi(-58)) * UP, hi.e);
        }
        let m = hi.m + lo.m * 2f64.powi(-(shift as i32));
        Mag::normalized(m * UP, hi.e)
    }

    pub fn mul(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        if self.is_infinite() || o.is_infinite() {
            return Mag::INFINITY;
        }
        Mag::normalized(self.m * o.m * UP, self.e + o.e)
    }

    /// Upper bound on `self / o`, where `o` must be a lower bound of the divisor.
    pub fn div(self, o: Mag) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        if o.is_zero() || self.is_infinite() {
            return Mag::INFINITY;
        }
        if o.is_infinite() {
            return Mag::ZERO;
        }
        Mag::normalized(self.m / o.m * UP, self.e - o.e)
    }

    pub fn mul_f64(self, x: f64) -> Mag {
        self.mul(Mag::from_f64(x))
    }

    /// Upper bound on `self^k`.
    pub fn powi(self, k: u32) -> Mag {
        let mut acc = Mag::ONE;
        let mut base = self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    /// Lower bound on `self - o`, clamped at zero. `self` must be a lower
    /// bound and `o` an upper bound of the respective quantities.
    pub fn sub_down(self, o: Mag) -> Mag {
        if o.is_zero() {
            return self;
        }
        if self.is_infinite() {
            return if o.is_infinite() { Mag::ZERO } else { self };
        }
        if o.is_infinite() || o >= self {
            return Mag::ZERO;
        }
        let shift = self.e - o.e;
        if shift > 60 {
            return Mag::normalized(self.m * (1.0 - 2f64.powi(-58)) * DOWN, self.e);
        }
        let m = self.m - o.m * 2f64.powi(-(shift as i32));
        if m <= 0.0 {
            return Mag::ZERO;
        }
        Mag::normalized(m * DOWN, self.e)
    }

    /// Lower bound on a product of lower bounds.
    pub fn mul_down(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        if self.is_infinite() || o.is_infinite() {
            return Mag::INFINITY;
        }
        Mag::normalized(self.m * o.m * DOWN, self.e + o.e)
    }

    pub fn min_with(self, o: Mag) -> Mag {
        if self <= o {
            self
        } else {
            o
        }
    }

    pub fn max(self, o: Mag) -> Mag {
        if self >= o {
            self
        } else {
            o
        }
    }
}

impl Default for Mag {
    fn default() -> Mag {
        Mag::ZERO
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, o: &Mag) -> Option<Ordering> {
        Some(match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => match (self.is_infinite(), o.is_infinite()) {
                (true, true) => Ordering::Equal,
                (true, false) => Ordering::Greater,
                (false, true) => Ordering::Less,
                _ => self.e.cmp(&o.e).then(self.m.partial_cmp(&o.m)?),
            },
        })
    }
}

impl fmt::Display for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.is_infinite() {
            return write!(f, "inf");
        }
        let l = self.log10();
        let exp = l.floor();
        let mant = 10f64.powf(l - exp);
        write!(f, "{:.6}e{}", mant, exp as i64)
    }
}

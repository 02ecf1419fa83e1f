use crate::error::{Error, Result};
use crate::mpnum::Mag;

/// Extra binary digits carried beyond the requested decimal precision.
pub const GUARD_BITS: u32 = 32;

pub const DEFAULT_DIGITS: u32 = 50;
pub const MIN_DIGITS: u32 = 20;

/// Immutable evaluation environment shared by every numeric routine.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalContext {
    precision_digits: u32,
    eps_term: Mag,
    max_terms: usize,
    pole_distance_min: f64,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext::new(DEFAULT_DIGITS).expect("default precision is valid")
    }
}

impl EvalContext {
    /// Context with `digits` decimal digits and the derived defaults:
    /// `eps_term = 10^(10 - digits)`, `max_terms = 10000`, pole distance `1e-3`.
    pub fn new(digits: u32) -> Result<EvalContext> {
        if digits < MIN_DIGITS {
            return Err(Error::Config(format!(
                "precision_digits must be >= {MIN_DIGITS}, got {digits}"
            )));
        }
        Ok(EvalContext {
            precision_digits: digits,
            eps_term: pow10(10 - digits as i64),
            max_terms: 10_000,
            pole_distance_min: 1e-3,
        })
    }

    pub fn with_eps_term(mut self, eps: Mag) -> Result<EvalContext> {
        if eps.is_zero() || eps >= Mag::ONE {
            return Err(Error::Config(format!(
                "eps_term must lie in (0, 1), got {eps}"
            )));
        }
        self.eps_term = eps;
        Ok(self)
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Result<EvalContext> {
        if max_terms == 0 {
            return Err(Error::Config("max_terms must be positive".into()));
        }
        self.max_terms = max_terms;
        Ok(self)
    }

    pub fn with_pole_distance(mut self, delta: f64) -> Result<EvalContext> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Config(format!(
                "pole_distance_min must lie in (0, 1), got {delta}"
            )));
        }
        self.pole_distance_min = delta;
        Ok(self)
    }

    pub fn precision_digits(&self) -> u32 {
        self.precision_digits
    }

    /// Working precision in bits, including guard bits.
    pub fn bits(&self) -> u32 {
        (self.precision_digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    pub fn eps_term(&self) -> Mag {
        self.eps_term
    }

    /// Truncation threshold for infinite products: the unit roundoff of the
    /// requested decimal precision.
    pub fn product_eps(&self) -> Mag {
        pow10(-(self.precision_digits as i64))
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn pole_distance_min(&self) -> f64 {
        self.pole_distance_min
    }

    /// The absolute floor `10^-digits` used in relative residuals.
    pub fn residual_floor(&self) -> Mag {
        pow10(-(self.precision_digits as i64))
    }
}

/// Upper bound on `10^k`.
pub fn pow10(k: i64) -> Mag {
    let ten = Mag::from_f64(10.0);
    if k >= 0 {
        ten.powi(k as u32)
    } else {
        // 1/10^|k| rounded up: divide by a lower bound of 10^|k|
        let mut lo = Mag::ONE;
        for _ in 0..(-k) {
            lo = lo.mul_down(ten);
        }
        Mag::ONE.div(lo)
    }
}

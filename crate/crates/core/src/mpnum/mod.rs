//! Multiprecision complex values carrying rigorous absolute error bounds.
//!
//! Values are MPC complex numbers; the bound is a [`Mag`]. Arithmetic adds
//! the propagated input error and the rounding error of the operation itself.

mod bounded;
mod context;
mod mag;

pub use bounded::{complex_abs_bounds, BoundedValue};
pub use context::{pow10, EvalContext, DEFAULT_DIGITS, GUARD_BITS, MIN_DIGITS};
pub use mag::Mag;

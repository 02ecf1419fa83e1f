//! High-precision evaluation of basic hypergeometric series and numerical
//! certification of summation and transformation identities between
//! unilateral, bilateral and semi-finite very-well-poised series.

pub mod error;
pub mod harness;
pub mod identities;
pub mod mpnum;
pub mod qpoch;
pub mod qseries;

pub use error::{Error, Result, ResultExt};
pub use harness::{
    emit_report, run_limit_study, run_sweep, LimitStudyResult, ReportFormat, SweepConfig,
    SweepReport,
};
pub use identities::{
    check_identity, solve_constraints, IdentityId, IdentityReport, Param, ParamSet,
};
pub use mpnum::{BoundedValue, EvalContext, Mag};
pub use qpoch::{poch_inf, poch_int, poch_multi, poch_ratio, PochOrder, PochValue, QBase};
pub use qseries::{eval_series, EvalResult, Lower, ParamExpr, SeriesSpec};

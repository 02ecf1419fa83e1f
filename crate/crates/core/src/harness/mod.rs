//! Seeded verification sweeps, `n -> infinity` limit studies of the
//! semi-finite identities and report serialization.

mod limit;
mod report;
mod series_file;
mod sweep;

pub use limit::{
    default_limit_params, limit_depths, params_from_json, run_limit_study, tannery_probe,
    DominanceDoc, DominanceFit, LimitRow, LimitRowDoc, LimitStudyDoc, LimitStudyResult,
};
pub use report::{
    emit_report, mag_from_str, mag_to_string, parse_report, DiagnosticDoc, ReportDoc, ReportFormat,
    SampleDoc, SummaryDoc,
};
pub use series_file::{eval_series_file, EvalDoc, SeriesFile};
pub use sweep::{
    run_sweep, Outcome, SampleRecord, SweepConfig, SweepReport, SweepSummary, MAX_REJECTIONS,
    PARAM_MODULUS,
};

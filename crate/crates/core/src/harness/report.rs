use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::ComponentDiagnostic;
use crate::mpnum::Mag;

use super::sweep::{Outcome, SweepReport, SweepSummary};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ReportFormat> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" | "txt" => Ok(ReportFormat::Text),
            other => Err(Error::Parse(format!("unknown report format {other:?}"))),
        }
    }
}

/// Shortest decimal string that parses back to the same f64.
pub fn mag_to_string(m: Mag) -> String {
    format!("{:e}", m.to_f64())
}

pub fn mag_from_str(s: &str) -> Result<Mag> {
    let x: f64 = s
        .parse()
        .map_err(|e| Error::Parse(format!("magnitude {s:?}: {e}")))?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::Parse(format!("magnitude {s:?} must be nonnegative")));
    }
    Ok(Mag::from_f64(x))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticDoc {
    pub label: String,
    pub value: String,
    pub terms_up: usize,
    pub terms_down: usize,
    pub tail_bound: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDoc {
    pub index: usize,
    pub n: u32,
    pub params: BTreeMap<String, String>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub residual: Option<String>,
    pub explained: Option<String>,
    pub pass: bool,
    pub skipped: bool,
    pub skip_reason: Option<String>,
    pub rejected: usize,
    pub diagnostics: Vec<DiagnosticDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub rejected: usize,
    pub max_residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub identity: String,
    pub seed: u64,
    pub precision: u32,
    pub tolerance: String,
    pub q_range: [String; 2],
    pub complex_params: bool,
    pub samples: Vec<SampleDoc>,
    pub summary: SummaryDoc,
}

fn diagnostic_doc(d: &ComponentDiagnostic, digits: usize) -> DiagnosticDoc {
    DiagnosticDoc {
        label: d.label.clone(),
        value: d.value.to_decimal(digits),
        terms_up: d.terms_up,
        terms_down: d.terms_down,
        tail_bound: mag_to_string(d.tail_bound),
    }
}

fn summary_doc(s: &SweepSummary) -> SummaryDoc {
    SummaryDoc {
        samples: s.samples,
        passed: s.passed,
        failed: s.failed,
        skipped: s.skipped,
        rejected: s.rejected,
        max_residual: mag_to_string(s.max_residual),
    }
}

impl ReportDoc {
    pub fn of(report: &SweepReport) -> ReportDoc {
        let cfg = &report.config;
        let digits = cfg.precision_digits as usize;
        let samples = report
            .records
            .iter()
            .map(|r| {
                let mut doc = SampleDoc {
                    index: r.index,
                    n: r.params.n,
                    params: r.params.to_strings(digits),
                    lhs: None,
                    rhs: None,
                    residual: None,
                    explained: None,
                    pass: false,
                    skipped: false,
                    skip_reason: None,
                    rejected: r.rejected,
                    diagnostics: Vec::new(),
                };
                match &r.outcome {
                    Outcome::Checked(rep) => {
                        doc.lhs = Some(rep.lhs.to_decimal(digits));
                        doc.rhs = Some(rep.rhs.to_decimal(digits));
                        doc.residual = Some(mag_to_string(rep.residual));
                        doc.explained = Some(mag_to_string(rep.explained));
                        doc.pass = rep.pass;
                        doc.diagnostics = rep
                            .diagnostics
                            .iter()
                            .map(|d| diagnostic_doc(d, digits))
                            .collect();
                    }
                    Outcome::Skipped(reason) => {
                        doc.skipped = true;
                        doc.skip_reason = Some(reason.clone());
                    }
                }
                doc
            })
            .collect();
        ReportDoc {
            identity: cfg.identity.name().to_string(),
            seed: cfg.seed,
            precision: cfg.precision_digits,
            tolerance: format!("{:e}", cfg.tolerance),
            q_range: [
                format!("{:e}", cfg.q_range.0),
                format!("{:e}", cfg.q_range.1),
            ],
            complex_params: cfg.complex_params,
            samples,
            summary: summary_doc(&report.summary),
        }
    }

    /// Residuals of the checked samples, in sample order.
    pub fn residuals(&self) -> Result<Vec<Option<Mag>>> {
        self.samples
            .iter()
            .map(|s| s.residual.as_deref().map(mag_from_str).transpose())
            .collect()
    }
}

pub fn parse_report(bytes: &[u8]) -> Result<ReportDoc> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("report: {e}")))
}

fn json(doc: &ReportDoc) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(doc).expect("report documents always serialize");
    out.push(b'\n');
    out
}

fn csv(doc: &ReportDoc) -> Result<Vec<u8>> {
    let param_names: Vec<String> = {
        let mut names: Vec<String> = Vec::new();
        for s in &doc.samples {
            for k in s.params.keys() {
                if k != "n" && !names.contains(k) {
                    names.push(k.clone());
                }
            }
        }
        names
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "index",
        "n",
        "pass",
        "skipped",
        "residual",
        "explained",
        "rejected",
    ];
    header.extend(param_names.iter().map(String::as_str));
    let io = |e: csv::Error| Error::Config(format!("csv output: {e}"));
    w.write_record(&header).map_err(io)?;
    for s in &doc.samples {
        let mut row = vec![
            s.index.to_string(),
            s.n.to_string(),
            s.pass.to_string(),
            s.skipped.to_string(),
            s.residual.clone().unwrap_or_default(),
            s.explained.clone().unwrap_or_default(),
            s.rejected.to_string(),
        ];
        row.extend(
            param_names
                .iter()
                .map(|k| s.params.get(k).cloned().unwrap_or_default()),
        );
        w.write_record(&row).map_err(io)?;
    }
    w.into_inner()
        .map_err(|e| Error::Config(format!("csv output: {e}")))
}

fn text(doc: &ReportDoc) -> Vec<u8> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}  seed {}  precision {} digits  tolerance {}",
        doc.identity, doc.seed, doc.precision, doc.tolerance
    );
    let _ = writeln!(
        out,
        "{:>6} {:>4} {:>14} {:>14}  status",
        "sample", "n", "residual", "explained"
    );
    for s in &doc.samples {
        let status = if s.skipped {
            "skip"
        } else if s.pass {
            "pass"
        } else {
            "FAIL"
        };
        let _ = writeln!(
            out,
            "{:>6} {:>4} {:>14} {:>14}  {status}",
            s.index,
            s.n,
            s.residual.as_deref().unwrap_or("-"),
            s.explained.as_deref().unwrap_or("-"),
        );
    }
    let m = &doc.summary;
    let _ = writeln!(
        out,
        "samples {}  passed {}  failed {}  skipped {}  rejected draws {}  max residual {}",
        m.samples, m.passed, m.failed, m.skipped, m.rejected, m.max_residual
    );
    out.into_bytes()
}

/// Serializes a sweep. JSON carries every value as a decimal string at the
/// sweep's precision; CSV has one row per sample; text is a table.
pub fn emit_report(report: &SweepReport, format: ReportFormat) -> Result<Vec<u8>> {
    let doc = ReportDoc::of(report);
    match format {
        ReportFormat::Json => Ok(json(&doc)),
        ReportFormat::Csv => csv(&doc),
        ReportFormat::Text => Ok(text(&doc)),
    }
}

//! Verification report serialization.
//!
//! JSON: the [`ReportDocument`] below, one object per run. CSV: one row per
//! sample with the columns in [`CSV_COLUMNS`]; empty cells mean "not
//! applicable to this sample kind".

use std::collections::BTreeMap;
use std::io::Write;

use atiyah_core::sampler::{Check, Extremes, Failure, RunReport, SampleSpec, Tolerances, TrendRow};
use serde::Serialize;

use crate::number::fmt_f64;

pub const CSV_COLUMNS: [&str; 11] = [
    "sample_index",
    "kind",
    "D_re",
    "D_im",
    "at_ang",
    "s1",
    "s2",
    "e_sum",
    "margin_c2",
    "margin_c3",
    "worst_check",
];

pub const TOOL_NAME: &str = "atiyah-lab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub samples: u64,
    pub all_passed: bool,
    pub failure_count: usize,
}

/// Run-dependent fields, kept apart from the reproducible content.
#[derive(Debug, Clone, Serialize)]
pub struct RunInfo {
    pub threads: usize,
    pub elapsed_secs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub tool: ToolInfo,
    pub spec: SampleSpec,
    pub tolerances: Tolerances,
    pub summary: Summary,
    /// Every check appears; `null` marks checks that do not apply to the kind.
    pub pass_counts: BTreeMap<String, Option<u64>>,
    pub extremes: Extremes,
    pub trend: Vec<TrendRow>,
    pub trend_monotone: Option<bool>,
    pub failures: Vec<Failure>,
    pub run: RunInfo,
}

impl ReportDocument {
    pub fn new(report: &RunReport, threads: usize) -> Self {
        Self {
            tool: ToolInfo {
                name: TOOL_NAME,
                version: TOOL_VERSION,
            },
            spec: report.spec,
            tolerances: report.tolerances,
            summary: Summary {
                samples: report.spec.count,
                all_passed: report.all_passed(),
                failure_count: report.failures.len(),
            },
            pass_counts: Check::ALL
                .iter()
                .map(|c| {
                    let count = c
                        .applies_to(report.spec.kind)
                        .then(|| report.pass_counts.get(c).copied().unwrap_or(0));
                    (c.name().to_string(), count)
                })
                .collect(),
            extremes: report.extremes,
            trend: report.trend.clone(),
            trend_monotone: report.trend_monotone,
            failures: report.failures.clone(),
            run: RunInfo {
                threads,
                elapsed_secs: report.elapsed_secs,
            },
        }
    }
}

pub fn write_json<W: Write>(doc: &ReportDocument, out: W) -> serde_json::Result<()> {
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, doc)?;
    writeln!(out).map_err(serde_json::Error::io)
}

pub fn write_csv<W: Write>(report: &RunReport, out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_COLUMNS)?;
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for s in &report.samples {
        let q = s.quad.as_ref();
        writer.write_record([
            s.index.to_string(),
            s.kind.name().to_string(),
            fmt_f64(s.d_re),
            fmt_f64(s.d_im),
            opt(q.map(|q| q.at_ang)),
            opt(q.map(|q| q.s1)),
            opt(q.map(|q| q.s2)),
            opt(q.map(|q| q.e_sum)),
            fmt_f64(s.margin_c2),
            fmt_f64(s.margin_c3),
            s.worst_check().map_or("none", |c| c.name()).to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

//! Versioned analysis reports, one builder per CLI subcommand.
//!
//! Reports carry no timestamps and serialize with a fixed key order, so the
//! same input always produces the same bytes.

use serde::Serialize;

use crate::code::{
    derive_params, incidence_matrix, validate, DerivedParams, FrCode, NodeId, ValidationReport,
};
use crate::error::Result;
use crate::frc::write_frc;
use crate::reconstruction::{self, degree_report, DegreeReport};
use crate::repair::{node_repair, repair_report, RepairReport};
use crate::subsets::DEFAULT_SUBSET_CAP;
use crate::Mode;

pub const REPORT_FORMAT: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub cap: u64,
    pub seed: Option<u64>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            cap: DEFAULT_SUBSET_CAP,
            seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub cap: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RatePoint {
    pub k: usize,
    pub value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub format: u32,
    pub tool: ToolInfo,
    pub command: &'static str,
    pub validation: ValidationReport,
    pub params: DerivedParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<DegreeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repair: Option<RepairReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<RatePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_profile: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<u8>>>,
    /// Canonical `FRC1` text of the code.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
}

impl AnalysisReport {
    fn base(command: &'static str, code: &FrCode, opts: &Options) -> Self {
        AnalysisReport {
            format: REPORT_FORMAT,
            tool: ToolInfo {
                name: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                seed: opts.seed,
                cap: opts.cap,
            },
            command,
            validation: validate(code),
            params: derive_params(code),
            degrees: None,
            repair: None,
            rate: None,
            rate_profile: None,
            matrix: None,
            code: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report is serializable");
        out.push('\n');
        out
    }
}

pub fn analyze(code: &FrCode, opts: &Options) -> AnalysisReport {
    AnalysisReport::base("analyze", code, opts)
}

pub fn reconstruct(code: &FrCode, mode: Mode, opts: &Options) -> Result<AnalysisReport> {
    let mut report = AnalysisReport::base("reconstruct", code, opts);
    report.degrees = Some(degree_report(code, mode, opts.cap)?);
    Ok(report)
}

/// All nodes, or only `node` when given.
pub fn repair(
    code: &FrCode,
    node: Option<NodeId>,
    mode: Mode,
    opts: &Options,
) -> Result<AnalysisReport> {
    let mut report = AnalysisReport::base("repair", code, opts);
    report.repair = Some(match node {
        Some(i) => RepairReport {
            per_node: vec![node_repair(code, i, mode, opts.cap)?],
        },
        None => repair_report(code, mode, opts.cap)?,
    });
    Ok(report)
}

pub fn rate(code: &FrCode, k: usize, opts: &Options) -> Result<AnalysisReport> {
    let mut report = AnalysisReport::base("rate", code, opts);
    report.rate = Some(RatePoint {
        k,
        value: reconstruction::rate(code, k, opts.cap)?,
    });
    Ok(report)
}

pub fn rate_profile(code: &FrCode, opts: &Options) -> Result<AnalysisReport> {
    let mut report = AnalysisReport::base("rate", code, opts);
    report.rate_profile = Some(reconstruction::rate_profile(code, opts.cap)?);
    Ok(report)
}

pub fn matrix(code: &FrCode, opts: &Options) -> AnalysisReport {
    let mut report = AnalysisReport::base("matrix", code, opts);
    report.matrix = Some(incidence_matrix(code).to_rows());
    report
}

/// Report wrapping a code produced by `generate` or `corpus`.
pub fn emitted(command: &'static str, code: &FrCode, opts: &Options) -> AnalysisReport {
    let mut report = AnalysisReport::base(command, code, opts);
    report.code = Some(write_frc(code));
    report
}

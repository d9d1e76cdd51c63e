//! The machine-readable report: one JSON document per invocation.
//!
//! Identical argv and seed produce byte-identical documents; nothing
//! wall-clock-dependent is recorded. The shape is pinned by
//! `schema/report.v1.json` in this crate.

use had_core::binomial::BinomialScan;
use had_core::counts::ParamCountReport;
use had_core::hadamard::TwistSummary;
use had_core::oracle::OracleReport;
use had_core::runner::HedgedDimension;
use had_core::ProjectivePoint;
use serde::Serialize;

pub const SCHEMA_ID: &str = "had-report/v1";

/// How an input argument was resolved.
#[derive(Debug, Clone, Serialize)]
pub struct InputRef {
    /// The argument as given, e.g. `catalogue:conic` or a path.
    pub given: String,
    pub source: InputSource,
    /// The variety's own name from its description.
    pub name: String,
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputSource {
    Catalogue,
    File,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub prime_bits: u32,
    pub trials: usize,
    pub threads: usize,
    /// Working prime, when the command uses one.
    pub prime: Option<u64>,
    /// Oracle prime, when the command counts points.
    pub q: Option<u64>,
    pub inputs: Vec<InputRef>,
    pub result: ResultBody,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultBody {
    Dimension {
        run: HedgedDimension,
    },
    Twist {
        summary: TwistSummary,
    },
    Binomial {
        scan: BinomialScan,
    },
    Counts {
        reports: Vec<ParamCountReport>,
    },
    Sample {
        point: ProjectivePoint,
    },
    Oracle {
        report: OracleReport,
    },
    Catalogue {
        entries: Vec<CatalogueEntry>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogueEntry {
    pub name: String,
    pub kind: &'static str,
    pub n: usize,
    pub polys: usize,
}

impl Report {
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("reports always serialize");
        bytes.push(b'\n');
        bytes
    }
}

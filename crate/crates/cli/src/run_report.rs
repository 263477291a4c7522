use serde::Serialize;
use serde_json::Value;

use coslab::report::IdentityReport;
use coslab::starbody::ClassVerdict;

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ReportItem {
    Identity(IdentityReport),
    Verdict(ClassVerdict),
}

impl ReportItem {
    fn passed(&self) -> bool {
        match self {
            ReportItem::Identity(r) => r.pass,
            ReportItem::Verdict(_) => true,
        }
    }
}

/// Machine-readable record of one CLI invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub config: Value,
    pub results: Vec<ReportItem>,
    /// Seconds.
    pub wall_time: f64,
    pub pass_count: usize,
    pub fail_count: usize,
}

impl RunReport {
    pub fn new(config: Value, results: Vec<ReportItem>, wall_time: f64) -> Self {
        let pass_count = results.iter().filter(|r| r.passed()).count();
        RunReport {
            command: std::env::args().collect(),
            config,
            fail_count: results.len() - pass_count,
            pass_count,
            results,
            wall_time,
        }
    }
}

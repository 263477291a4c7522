//! Structured results of numerical identity checks.

use serde::{Deserialize, Serialize};

/// Which error measure decides `pass`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Absolute,
    Relative,
    /// Relative where |expected| > 1, absolute otherwise.
    Mixed,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Params {
    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }
    pub fn i(mut self, i: usize) -> Self {
        self.i = Some(i);
        self
    }
    pub fn alpha(mut self, a: f64) -> Self {
        self.alpha = Some(a);
        self
    }
    pub fn beta(mut self, b: f64) -> Self {
        self.beta = Some(b);
        self
    }
    pub fn j_max(mut self, j: usize) -> Self {
        self.j_max = Some(j);
        self
    }
    pub fn band(mut self, l: usize) -> Self {
        self.band = Some(l);
        self
    }
    pub fn seed(mut self, s: u64) -> Self {
        self.seed = Some(s);
        self
    }
    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.note = Some(s.into());
        self
    }

    /// Sort key used to order reports deterministically.
    pub fn sort_key(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params: Params,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub metric: Metric,
    pub tolerance: f64,
    pub pass: bool,
    /// Parameter points left out because they hit an excluded lattice.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub skipped: usize,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

impl IdentityReport {
    pub fn failed_to_evaluate(identity: &str, params: Params, tolerance: f64, why: &str) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            params: params.note(why.to_string()),
            max_abs_err: f64::INFINITY,
            max_rel_err: f64::INFINITY,
            metric: Metric::Mixed,
            tolerance,
            pass: false,
            skipped: 0,
        }
    }
}

/// Running maxima of absolute, relative and mixed errors.
#[derive(Debug, Clone, Copy, Default)]
pub struct ErrorTally {
    pub max_abs: f64,
    pub max_rel: f64,
    pub max_mixed: f64,
    pub count: usize,
    pub skipped: usize,
}

impl ErrorTally {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, got: f64, expected: f64) {
        let abs = (got - expected).abs();
        let rel = if expected != 0.0 {
            abs / expected.abs()
        } else if abs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let mixed = if expected.abs() > 1.0 { rel } else { abs };
        bump(&mut self.max_abs, abs);
        bump(&mut self.max_rel, rel);
        bump(&mut self.max_mixed, mixed);
        self.count += 1;
    }

    pub fn push_slices(&mut self, got: &[f64], expected: &[f64]) {
        for (g, e) in got.iter().zip(expected) {
            self.push(*g, *e);
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn merge(&mut self, other: &ErrorTally) {
        bump(&mut self.max_abs, other.max_abs);
        bump(&mut self.max_rel, other.max_rel);
        bump(&mut self.max_mixed, other.max_mixed);
        self.count += other.count;
        self.skipped += other.skipped;
    }

    pub fn error(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Absolute => self.max_abs,
            Metric::Relative => self.max_rel,
            Metric::Mixed => self.max_mixed,
        }
    }

    pub fn report(
        &self,
        identity: &str,
        params: Params,
        metric: Metric,
        tolerance: f64,
    ) -> IdentityReport {
        let err = self.error(metric);
        IdentityReport {
            identity: identity.to_string(),
            params,
            max_abs_err: self.max_abs,
            max_rel_err: self.max_rel,
            metric,
            tolerance,
            pass: self.count > 0 && err <= tolerance,
            skipped: self.skipped,
        }
    }
}

/// NaN is sticky so that a single bad value fails the whole tally.
fn bump(max: &mut f64, x: f64) {
    if max.is_nan() {
        return;
    }
    if x.is_nan() || x > *max {
        *max = x;
    }
}

/// Sorts reports by (identity, params) so output is independent of evaluation order.
pub fn sort_reports(reports: &mut [IdentityReport]) {
    reports.sort_by(|a, b| {
        a.identity
            .cmp(&b.identity)
            .then_with(|| a.params.sort_key().cmp(&b.params.sort_key()))
    });
}

//! Flat `key = value` configuration with built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    /// Band limit of the S² identity suite.
    pub lmax: usize,
    /// Band limit used by the classifier.
    pub classify_lmax: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub zonal_band: usize,
    pub seed: u64,
    pub jmax: usize,
    pub smooth: f64,
    pub margin: f64,
    pub threads: Option<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            lmax: 12,
            classify_lmax: 24,
            n_theta: 48,
            n_phi: 96,
            zonal_band: 24,
            seed: 7,
            jmax: 200,
            smooth: 0.98,
            margin: 1e-7,
            threads: None,
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_flat(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "config line {}: expected key = value",
                lineno + 1
            )));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parsed<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.parse()
        .map_err(|_| CliError::usage(format!("config key {key}: cannot parse {v:?}")))
}

impl Settings {
    pub fn apply(&mut self, map: &BTreeMap<String, String>) -> CliResult<()> {
        for (k, v) in map {
            match k.as_str() {
                "lmax" => self.lmax = parsed(k, v)?,
                "classify_lmax" => self.classify_lmax = parsed(k, v)?,
                "n_theta" => self.n_theta = parsed(k, v)?,
                "n_phi" => self.n_phi = parsed(k, v)?,
                "zonal_band" => self.zonal_band = parsed(k, v)?,
                "seed" => self.seed = parsed(k, v)?,
                "jmax" => self.jmax = parsed(k, v)?,
                "smooth" => self.smooth = parsed(k, v)?,
                "margin" => self.margin = parsed(k, v)?,
                "threads" => self.threads = Some(parsed(k, v)?),
                other => return Err(CliError::usage(format!("unknown config key {other:?}"))),
            }
        }
        Ok(())
    }

    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let mut s = Settings::default();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", p.display())))?;
            s.apply(&parse_flat(&text)?)?;
        }
        Ok(s)
    }
}

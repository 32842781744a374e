//! Tabular experiment output, serializable as CSV and JSON.
//!
//! Every report row carries the same core columns (grid point, observed
//! value, main term, signed error, error normalized by the envelope,
//! envelope, verdict) plus experiment-specific extras. Floats are
//! rendered with 12 significant digits in both formats so repeated runs
//! diff cleanly.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::fmt;

pub const SCHEMA: &str = "analysis-report v1";

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub x: u64,
    pub observed: f64,
    pub main_term: f64,
    pub error: f64,
    pub normalized_error: f64,
    pub envelope: f64,
    pub within: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl ReportRow {
    /// Build a row from observed value, main term and envelope; the
    /// error columns and verdict are derived.
    pub fn new(x: u64, observed: f64, main_term: f64, envelope: f64) -> Self {
        let error = observed - main_term;
        let normalized_error = if envelope > 0.0 {
            error / envelope
        } else if error == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        ReportRow {
            x,
            observed,
            main_term,
            error,
            normalized_error,
            envelope,
            within: error.abs() <= envelope,
            extra: BTreeMap::new(),
        }
    }

    pub fn with_extra(mut self, key: &str, value: f64) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    pub fn with_verdict(mut self, within: bool) -> Self {
        self.within = within;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub experiment: String,
    pub parameters: BTreeMap<String, String>,
    pub rows: Vec<ReportRow>,
    /// True when every row verdict holds.
    pub all_within: bool,
}

impl AnalysisReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        AnalysisReport {
            schema: SCHEMA,
            experiment: experiment.into(),
            parameters: BTreeMap::new(),
            rows: Vec::new(),
            all_within: true,
        }
    }

    pub fn set_parameter(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn push(&mut self, row: ReportRow) {
        self.all_within &= row.within;
        self.rows.push(row);
    }

    fn extra_columns(&self) -> Vec<String> {
        let mut keys: Vec<String> = self
            .rows
            .iter()
            .flat_map(|r| r.extra.keys().cloned())
            .collect();
        keys.sort();
        keys.dedup();
        keys
    }

    /// One row per grid point; parameters are echoed as `# key: value`
    /// comment headers.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# schema: {}\n", self.schema));
        out.push_str(&format!("# experiment: {}\n", self.experiment));
        for (k, v) in &self.parameters {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let extras = self.extra_columns();
        out.push_str("x,observed,main_term,error,normalized_error,envelope,within");
        for k in &extras {
            out.push(',');
            out.push_str(k);
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}",
                r.x,
                fmt::sig(r.observed),
                fmt::sig(r.main_term),
                fmt::sig(r.error),
                fmt::sig(r.normalized_error),
                fmt::sig(r.envelope),
                r.within
            ));
            for k in &extras {
                out.push(',');
                if let Some(v) = r.extra.get(k) {
                    out.push_str(&fmt::sig(*v));
                }
            }
            out.push('\n');
        }
        out
    }

    /// JSON rendering with floats rounded to the same 12 significant
    /// digits as the CSV.
    pub fn to_json(&self) -> String {
        let mut rounded = self.clone();
        for r in &mut rounded.rows {
            r.observed = fmt::round_sig(r.observed);
            r.main_term = fmt::round_sig(r.main_term);
            r.error = fmt::round_sig(r.error);
            r.normalized_error = fmt::round_sig(r.normalized_error);
            r.envelope = fmt::round_sig(r.envelope);
            for v in r.extra.values_mut() {
                *v = fmt::round_sig(*v);
            }
        }
        let mut s = serde_json::to_string_pretty(&rounded).expect("report serialization");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_derivations() {
        let r = ReportRow::new(100, 12.0, 10.0, 4.0);
        assert_eq!(r.error, 2.0);
        assert_eq!(r.normalized_error, 0.5);
        assert!(r.within);
        let r = ReportRow::new(100, 20.0, 10.0, 4.0);
        assert!(!r.within);
    }

    #[test]
    fn csv_shape() {
        let mut rep = AnalysisReport::new("demo");
        rep.set_parameter("group", "SU2");
        rep.push(ReportRow::new(10, 1.0, 1.0, 1.0).with_extra("count", 3.0));
        let csv = rep.to_csv();
        assert!(csv.contains("# experiment: demo"));
        assert!(csv.contains("x,observed,main_term,error,normalized_error,envelope,within,count"));
        assert!(csv.lines().last().unwrap().starts_with("10,1,1,0,0,1,true,3"));
    }

    #[test]
    fn json_is_stable() {
        let mut rep = AnalysisReport::new("demo");
        rep.push(ReportRow::new(10, 0.123456789012345, 0.0, 1.0));
        assert_eq!(rep.to_json(), rep.to_json());
        assert!(rep.to_json().contains("0.123456789012"));
    }
}

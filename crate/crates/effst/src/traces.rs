//! Ordered Frobenius-trace data and the `ap-traces v1` file format.
//!
//! A sequence holds one record per good prime norm up to a bound. For
//! elliptic curves over Q the records are computed in-process; higher
//! genus or number-field data enters through files carrying a norm
//! column and optional normalized local-factor coefficients.
//!
//! File layout (CSV, UTF-8): comment headers first, then data rows.
//!
//! ```text
//! # format: ap-traces v1
//! # label: 11a1
//! # g: 1
//! # bad_norms: 11
//! # max_norm: 100
//! 2,-2
//! 3,-1
//! ...
//! ```
//!
//! Data rows are `norm,a` or `norm,a,c1,...,c_2g`; the first two columns
//! are exact integers (decimals rejected). The `max_norm` header keeps
//! the completeness bound across round trips; when absent it is the
//! largest norm present.

use std::collections::BTreeSet;
use std::path::Path;

use rayon::prelude::*;

use crate::ap::{ap_with_strategy, Strategy};
use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::primes::sieve_primes;

const TAU: f64 = std::f64::consts::TAU;
/// Tolerance for the unit-circle validation of local-factor roots.
const CIRCLE_TOL: f64 = 1e-8;

/// One good prime: its norm, the integer trace, and optionally the
/// normalized local L-factor coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub norm: u64,
    pub a: i64,
    pub lpoly: Option<Box<[f64]>>,
}

impl TraceRecord {
    pub fn new(norm: u64, a: i64) -> Self {
        TraceRecord { norm, a, lpoly: None }
    }

    /// Normalized trace `a / sqrt(norm)`.
    pub fn normalized(&self) -> f64 {
        self.a as f64 / (self.norm as f64).sqrt()
    }

    fn validate(&self, g: usize) -> Result<()> {
        if self.norm < 2 {
            return Err(Error::DataInvalid(format!("norm {} below 2", self.norm)));
        }
        // Hasse-Weil: |a| <= 2 g sqrt(norm), checked in exact integers
        let a2 = self.a as i128 * self.a as i128;
        let bound = 4 * (g * g) as i128 * self.norm as i128;
        if a2 > bound {
            return Err(Error::DataInvalid(format!(
                "trace {} violates the Weil bound at norm {}",
                self.a, self.norm
            )));
        }
        if let Some(c) = &self.lpoly {
            if c.len() != 2 * g {
                return Err(Error::DataInvalid(format!(
                    "local factor at norm {} has {} coefficients, expected {}",
                    self.norm,
                    c.len(),
                    2 * g
                )));
            }
            angles_from_lpoly(c, g)?;
        }
        Ok(())
    }
}

/// Trace records sorted by norm, together with curve metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSequence {
    label: String,
    g: usize,
    bad_norms: BTreeSet<u64>,
    max_norm: u64,
    records: Vec<TraceRecord>,
}

impl TraceSequence {
    pub fn new(
        label: impl Into<String>,
        g: usize,
        bad_norms: BTreeSet<u64>,
        max_norm: u64,
        records: Vec<TraceRecord>,
    ) -> Result<Self> {
        if g == 0 || g > 8 {
            return Err(Error::DataInvalid(format!("dimension g = {g} out of range 1..=8")));
        }
        let mut prev = 0u64;
        for r in &records {
            if r.norm <= prev {
                return Err(Error::DataInvalid(format!(
                    "norms not strictly increasing at {}",
                    r.norm
                )));
            }
            if bad_norms.contains(&r.norm) {
                return Err(Error::DataInvalid(format!("bad norm {} present in data", r.norm)));
            }
            r.validate(g)?;
            prev = r.norm;
        }
        if max_norm < prev {
            return Err(Error::DataInvalid(format!(
                "max_norm {max_norm} below the largest record norm {prev}"
            )));
        }
        Ok(TraceSequence { label: label.into(), g, bad_norms, max_norm, records })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn bad_norms(&self) -> &BTreeSet<u64> {
        &self.bad_norms
    }

    /// Bound up to which the record list is complete.
    pub fn max_norm(&self) -> u64 {
        self.max_norm
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records with norm at most `x`.
    pub fn records_up_to(&self, x: u64) -> &[TraceRecord] {
        let idx = self.records.partition_point(|r| r.norm <= x);
        &self.records[..idx]
    }

    pub fn get(&self, norm: u64) -> Option<&TraceRecord> {
        self.records
            .binary_search_by_key(&norm, |r| r.norm)
            .ok()
            .map(|i| &self.records[i])
    }
}

/// Compute the trace sequence of an elliptic curve over Q for all good
/// primes up to `x`. Primes are evaluated in parallel; the output is
/// assembled in norm order and is byte-identical across runs and thread
/// counts.
pub fn trace_sequence(curve: &CurveSpec, x: u64, strategy: Strategy, seed: u64) -> Result<TraceSequence> {
    if x < 2 {
        return Err(Error::invalid(format!("bound x = {x} below 2")));
    }
    let primes = sieve_primes(x)?;
    let good: Vec<u64> = primes.into_iter().filter(|&p| curve.is_good(p)).collect();
    let records: Vec<TraceRecord> = good
        .into_par_iter()
        .map(|p| {
            let a = ap_with_strategy(curve, p, strategy, seed)?;
            Ok(TraceRecord::new(p, a))
        })
        .collect::<Result<_>>()?;
    TraceSequence::new(curve.label(), 1, curve.bad_norms().clone(), x, records)
}

/// Eigenvalue angles of the semisimplified Frobenius class, sorted, in
/// `[0, 1/2]`. For g = 1 the single angle is `arccos(abar/2)/(2 pi)`;
/// otherwise the supplied local factor is used, after validating that
/// its reciprocal roots sit on the unit circle.
pub fn eigen_angles(record: &TraceRecord, g: usize) -> Result<Vec<f64>> {
    if let Some(c) = &record.lpoly {
        return angles_from_lpoly(c, g);
    }
    if g == 1 {
        let half = record.normalized() / 2.0;
        return Ok(vec![half.clamp(-1.0, 1.0).acos() / TAU]);
    }
    Err(Error::invalid(format!(
        "angles for g = {g} need local-factor coefficients at norm {}",
        record.norm
    )))
}

/// Angles from a normalized local factor `1 + c1 T + ... + c_2g T^2g`.
/// Supported for g = 1 and 2 via the substitution `u = T + 1/T`.
fn angles_from_lpoly(c: &[f64], g: usize) -> Result<Vec<f64>> {
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::DataInvalid("non-finite local-factor coefficient".into()));
    }
    let off_circle = |what: &str| {
        Err(Error::DataInvalid(format!(
            "local-factor roots leave the unit circle ({what})"
        )))
    };
    match (g, c.len()) {
        (1, 2) => {
            if (c[1] - 1.0).abs() > CIRCLE_TOL {
                return off_circle("constant term");
            }
            let u = -c[0];
            if u.abs() > 2.0 + CIRCLE_TOL {
                return off_circle("trace bound");
            }
            Ok(vec![(u / 2.0).clamp(-1.0, 1.0).acos() / TAU])
        }
        (2, 4) => {
            if (c[3] - 1.0).abs() > CIRCLE_TOL || (c[2] - c[0]).abs() > CIRCLE_TOL {
                return off_circle("palindrome defect");
            }
            // u1 + u2 = -c1, u1 u2 = c2 - 2 with u_j = 2 cos(2 pi theta_j)
            let s = -c[0];
            let prod = c[1] - 2.0;
            let disc = s * s - 4.0 * prod;
            if disc < -CIRCLE_TOL {
                return off_circle("complex pair");
            }
            let root = disc.max(0.0).sqrt();
            let mut out = Vec::with_capacity(2);
            for u in [(s - root) / 2.0, (s + root) / 2.0] {
                if u.abs() > 2.0 + CIRCLE_TOL {
                    return off_circle("trace bound");
                }
                out.push((u / 2.0).clamp(-1.0, 1.0).acos() / TAU);
            }
            out.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Ok(out)
        }
        _ => Err(Error::Unsupported(format!(
            "local factors of degree {} for g = {g}",
            c.len()
        ))),
    }
}

/// Render a sequence in the `ap-traces v1` format.
pub fn traces_to_string(seq: &TraceSequence) -> String {
    let mut out = String::new();
    out.push_str("# format: ap-traces v1\n");
    out.push_str(&format!("# label: {}\n", seq.label()));
    out.push_str(&format!("# g: {}\n", seq.g()));
    let bad: Vec<String> = seq.bad_norms().iter().map(u64::to_string).collect();
    out.push_str(&format!("# bad_norms: {}\n", bad.join(",")));
    out.push_str(&format!("# max_norm: {}\n", seq.max_norm()));
    for r in seq.records() {
        out.push_str(&format!("{},{}", r.norm, r.a));
        if let Some(c) = &r.lpoly {
            for v in c.iter() {
                out.push_str(&format!(",{v}"));
            }
        }
        out.push('\n');
    }
    out
}

/// Parse the `ap-traces v1` format from raw bytes. All validation
/// failures carry the offending line number.
pub fn parse_traces(bytes: &[u8]) -> Result<TraceSequence> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| Error::parse(0, "file is not valid UTF-8"))?;
    let mut label = String::new();
    let mut g: usize = 1;
    let mut bad: BTreeSet<u64> = BTreeSet::new();
    let mut max_norm: Option<u64> = None;
    let mut records: Vec<TraceRecord> = Vec::new();
    let mut saw_format = false;
    let mut saw_data = false;
    let mut prev_norm = 0u64;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if saw_data {
                return Err(Error::parse(lineno, "comment header after data rows"));
            }
            let comment = comment.trim();
            if !saw_format {
                if comment == "format: ap-traces v1" {
                    saw_format = true;
                    continue;
                }
                return Err(Error::parse(lineno, "first header must be `# format: ap-traces v1`"));
            }
            let Some((key, value)) = comment.split_once(':') else {
                continue; // free-form comment
            };
            let value = value.trim();
            match key.trim() {
                "label" => label = value.to_string(),
                "g" => {
                    g = value
                        .parse::<usize>()
                        .ok()
                        .filter(|g| (1..=8).contains(g))
                        .ok_or_else(|| Error::parse(lineno, format!("bad g value {value:?}")))?;
                }
                "bad_norms" => {
                    for part in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let n: u64 = part.parse().map_err(|_| {
                            Error::parse(lineno, format!("bad norm {part:?} in bad_norms"))
                        })?;
                        bad.insert(n);
                    }
                }
                "max_norm" => {
                    max_norm = Some(value.parse().map_err(|_| {
                        Error::parse(lineno, format!("bad max_norm value {value:?}"))
                    })?);
                }
                _ => {} // unknown headers are ignored for forward compatibility
            }
            continue;
        }
        if !saw_format {
            return Err(Error::parse(lineno, "missing `# format: ap-traces v1` header"));
        }
        saw_data = true;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 2 {
            return Err(Error::parse(lineno, "expected at least `norm,a`"));
        }
        let norm: u64 = fields[0]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("norm {:?} is not a positive integer", fields[0])))?;
        let a: i64 = fields[1]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("trace {:?} is not an integer", fields[1])))?;
        let lpoly = if fields.len() > 2 {
            let mut c = Vec::with_capacity(fields.len() - 2);
            for f in &fields[2..] {
                let v: f64 = f
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad coefficient {f:?}")))?;
                c.push(v);
            }
            Some(c.into_boxed_slice())
        } else {
            None
        };
        if norm <= prev_norm {
            return Err(Error::parse(lineno, format!("norm {norm} not strictly increasing")));
        }
        if bad.contains(&norm) {
            return Err(Error::parse(lineno, format!("bad norm {norm} present in data")));
        }
        let record = TraceRecord { norm, a, lpoly };
        record
            .validate(g)
            .map_err(|e| Error::parse(lineno, e.to_string()))?;
        prev_norm = norm;
        records.push(record);
    }
    if !saw_format {
        return Err(Error::parse(1, "empty file; expected `# format: ap-traces v1`"));
    }
    let max_norm = match max_norm {
        Some(m) => {
            if m < prev_norm {
                return Err(Error::DataInvalid(format!(
                    "max_norm {m} below the largest record norm {prev_norm}"
                )));
            }
            m
        }
        None => prev_norm.max(2),
    };
    TraceSequence::new(label, g, bad, max_norm, records)
}

pub fn save_traces(path: impl AsRef<Path>, seq: &TraceSequence) -> Result<()> {
    std::fs::write(path, traces_to_string(seq))?;
    Ok(())
}

pub fn load_traces(path: impl AsRef<Path>) -> Result<TraceSequence> {
    let bytes = std::fs::read(path)?;
    parse_traces(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve_11a1() -> CurveSpec {
        CurveSpec::new([0, -1, 1, -10, -20], "11a1").unwrap()
    }

    #[test]
    fn sequence_11a1_to_100() {
        let seq = trace_sequence(&curve_11a1(), 100, Strategy::Naive, 0).unwrap();
        // 25 primes up to 100 minus the bad prime 11
        assert_eq!(seq.len(), 24);
        assert_eq!(seq.get(2).unwrap().a, -2);
        assert_eq!(seq.get(97).map(|r| r.norm), Some(97));
        assert!(seq.get(11).is_none());
        assert_eq!(seq.max_norm(), 100);
    }

    #[test]
    fn empty_sequence_when_everything_is_bad() {
        let c = CurveSpec::new([0, 0, 0, -1, 0], "cm").unwrap(); // bad at 2
        let seq = trace_sequence(&c, 2, Strategy::Naive, 0).unwrap();
        assert!(seq.is_empty());
    }

    #[test]
    fn round_trip_file() {
        let seq = trace_sequence(&curve_11a1(), 200, Strategy::Naive, 0).unwrap();
        let text = traces_to_string(&seq);
        let back = parse_traces(text.as_bytes()).unwrap();
        assert_eq!(back, seq);
    }

    #[test]
    fn rejects_weil_violation() {
        let text = "# format: ap-traces v1\n# g: 1\n5,100\n";
        let err = parse_traces(text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn rejects_decimals_in_integer_columns() {
        let text = "# format: ap-traces v1\n5,1.5\n";
        assert!(parse_traces(text.as_bytes()).is_err());
        let text = "# format: ap-traces v1\n5.0,1\n";
        assert!(parse_traces(text.as_bytes()).is_err());
    }

    #[test]
    fn rejects_unsorted_and_bad_norms() {
        let text = "# format: ap-traces v1\n7,1\n5,1\n";
        assert!(parse_traces(text.as_bytes()).is_err());
        let text = "# format: ap-traces v1\n# bad_norms: 5\n5,1\n";
        assert!(parse_traces(text.as_bytes()).is_err());
    }

    #[test]
    fn genus2_lpoly_accepted() {
        // angles 0.1 and 0.3: u1 = 2 cos(0.2 pi), u2 = 2 cos(0.6 pi)
        let u1 = 2.0 * (0.2 * std::f64::consts::PI).cos();
        let u2 = 2.0 * (0.6 * std::f64::consts::PI).cos();
        let c1 = -(u1 + u2);
        let c2 = 2.0 + u1 * u2;
        let text = format!("# format: ap-traces v1\n# g: 2\n5,2,{c1},{c2},{c1},1\n");
        let seq = parse_traces(text.as_bytes()).unwrap();
        let angles = eigen_angles(&seq.records()[0], 2).unwrap();
        assert!((angles[0] - 0.1).abs() < 1e-12);
        assert!((angles[1] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn off_circle_lpoly_rejected() {
        // u = 3 gives a real reciprocal pair off the unit circle
        let text = "# format: ap-traces v1\n# g: 1\n5,3,-3.0,1\n";
        assert!(parse_traces(text.as_bytes()).is_err());
    }

    #[test]
    fn angles_for_genus_one() {
        let r = TraceRecord::new(5, 0);
        let th = eigen_angles(&r, 1).unwrap();
        assert!((th[0] - 0.25).abs() < 1e-15);
        let r = TraceRecord::new(4, 4); // abar = 2 -> theta = 0
        assert!(eigen_angles(&r, 1).unwrap()[0].abs() < 1e-15);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let c = curve_11a1();
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let s1 = pool1.install(|| trace_sequence(&c, 3000, Strategy::Auto, 99)).unwrap();
        let s4 = pool4.install(|| trace_sequence(&c, 3000, Strategy::Auto, 99)).unwrap();
        assert_eq!(s1, s4);
        assert_eq!(traces_to_string(&s1), traces_to_string(&s4));
    }
}

use std::collections::BTreeMap;
use std::path::Path;

use preinvex_core::{BoundId, Verdict};
use serde::Serialize;

use crate::config::OutputFormat;
use crate::{HarnessError, Result};

pub const CSV_HEADER: [&str; 12] =
    ["function", "eta", "a", "b", "bound_id", "x", "q", "lhs", "rhs", "slack", "holds", "skip_reason"];

/// One evaluated (or skipped) bound. A skip that applies to a whole
/// (case, bound, q) is a single row with `x` empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub function: String,
    pub eta: String,
    pub a: f64,
    pub b: f64,
    pub bound_id: BoundId,
    pub x: Option<f64>,
    pub q: Option<f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub holds: Option<bool>,
    pub skip_reason: Option<String>,
}

impl Row {
    pub fn is_violation(&self) -> bool {
        self.holds == Some(false)
    }

    pub fn is_skipped(&self) -> bool {
        self.skip_reason.is_some()
    }
}

/// Certification outcomes for one (function, η, segment).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseCertification {
    pub function: String,
    pub eta: String,
    pub a: f64,
    pub b: f64,
    pub condition_c: Option<Verdict>,
    /// Preinvexity of |f'|^q, per q requested (q = 1 for |f'|).
    pub derivative_preinvex: Vec<(f64, Verdict)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub holds: usize,
    pub violations: usize,
    pub skipped: usize,
    /// Largest lhs/rhs per bound over evaluated rows with rhs above the floor.
    pub max_ratio: BTreeMap<String, f64>,
    pub invalid_cases: usize,
}

impl Summary {
    pub fn from_rows(rows: &[Row], invalid_cases: usize) -> Self {
        let mut s = Summary { rows: rows.len(), invalid_cases, ..Summary::default() };
        for r in rows {
            match r.holds {
                Some(true) => s.holds += 1,
                Some(false) => s.violations += 1,
                None => s.skipped += 1,
            }
            if let (Some(lhs), Some(rhs)) = (r.lhs, r.rhs) {
                if rhs >= preinvex_core::tolerances::RHS_FLOOR {
                    let e = s.max_ratio.entry(r.bound_id.to_string()).or_insert(0.0);
                    *e = e.max(lhs / rhs);
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config_sha256: String,
    pub tool_version: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub rows: Vec<Row>,
    pub summary: Summary,
    pub certifications: Vec<CaseCertification>,
    /// Cases that could not be set up, such as a segment leaving the domain.
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

impl RunReport {
    pub fn has_violations(&self) -> bool {
        self.summary.violations > 0
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Sorts rows by (function, eta, bound_id, x, q), keeping the input order
/// among equal keys.
pub fn sort_rows(rows: &mut [Row]) {
    fn key_f(v: Option<f64>) -> (bool, f64) {
        (v.is_some(), v.unwrap_or(0.0))
    }
    rows.sort_by(|l, r| {
        l.function
            .cmp(&r.function)
            .then_with(|| l.eta.cmp(&r.eta))
            .then_with(|| l.bound_id.as_str().cmp(r.bound_id.as_str()))
            .then_with(|| {
                let (a, b) = (key_f(l.x), key_f(r.x));
                a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))
            })
            .then_with(|| {
                let (a, b) = (key_f(l.q), key_f(r.q));
                a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))
            })
    });
}

/// CSV text of the rows. Floats use Rust's shortest round-trip formatting.
pub fn to_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let err = |e: csv::Error| HarnessError::Report(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            r.function.clone(),
            r.eta.clone(),
            r.a.to_string(),
            r.b.to_string(),
            r.bound_id.to_string(),
            opt(r.x),
            opt(r.q),
            opt(r.lhs),
            opt(r.rhs),
            opt(r.slack),
            opt(r.holds),
            r.skip_reason.clone().unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::Report(e.to_string()))
}

/// Parses CSV produced by [`to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let bad = |m: String| HarnessError::Report(m);
    let header = rd.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let num = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|e| bad(format!("bad number `{s}`: {e}")))
        }
    };
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        rows.push(Row {
            function: f(0).to_string(),
            eta: f(1).to_string(),
            a: num(f(2))?.ok_or_else(|| bad("missing a".into()))?,
            b: num(f(3))?.ok_or_else(|| bad("missing b".into()))?,
            bound_id: f(4).parse().map_err(|e: preinvex_core::Error| bad(e.to_string()))?,
            x: num(f(5))?,
            q: num(f(6))?,
            lhs: num(f(7))?,
            rhs: num(f(8))?,
            slack: num(f(9))?,
            holds: match f(10) {
                "" => None,
                "true" => Some(true),
                "false" => Some(false),
                other => return Err(bad(format!("bad holds flag `{other}`"))),
            },
            skip_reason: Some(f(11).to_string()).filter(|s| !s.is_empty()),
        });
    }
    Ok(rows)
}

pub fn to_json(report: &RunReport) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| HarnessError::Report(e.to_string()))
}

/// Writes the report to `path` in `format`.
pub fn emit_report(report: &RunReport, path: &Path, format: OutputFormat) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => to_csv(&report.rows)?,
        OutputFormat::Json => to_json(report)?,
    };
    std::fs::write(path, text).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(function: &str, id: BoundId, x: Option<f64>, q: Option<f64>) -> Row {
        Row {
            function: function.into(),
            eta: "trivial".into(),
            a: 0.0,
            b: 1.0,
            bound_id: id,
            x,
            q,
            lhs: Some(0.1),
            rhs: Some(0.3),
            slack: Some(0.3 - 0.1),
            holds: Some(true),
            skip_reason: None,
        }
    }

    #[test]
    fn header_and_lowercase_flags() {
        let mut r = row("square", BoundId::Preinvex, Some(0.5), None);
        let text = to_csv(&[r.clone()]).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "function,eta,a,b,bound_id,x,q,lhs,rhs,slack,holds,skip_reason");
        assert_eq!(lines.next().unwrap(), "square,trivial,0,1,THM22_21,0.5,,0.1,0.3,0.19999999999999998,true,");
        r.holds = Some(false);
        assert!(to_csv(&[r]).unwrap().contains(",false,"));
    }

    #[test]
    fn round_trip_is_exact() {
        let mut rows = vec![
            row("cube", BoundId::PowerMean, Some(1.0 / 3.0), Some(2.5)),
            row("exp", BoundId::Holder, None, Some(2.0)),
        ];
        rows[0].lhs = Some(std::f64::consts::PI * 1e-17);
        rows[0].slack = Some(-1e-12);
        rows[1].lhs = None;
        rows[1].rhs = None;
        rows[1].slack = None;
        rows[1].holds = None;
        rows[1].skip_reason = Some("`|exp'|^2` is not preinvex, witness (1, 2)".into());
        let back = parse_csv(&to_csv(&rows).unwrap()).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn sorting_is_stable_by_key() {
        let mut rows = vec![
            row("square", BoundId::Preinvex, Some(1.0), None),
            row("identity", BoundId::Preinvex, Some(0.5), None),
            row("square", BoundId::Holder, Some(0.0), Some(3.0)),
            row("square", BoundId::Holder, Some(0.0), Some(2.0)),
            row("square", BoundId::Preinvex, Some(0.0), None),
        ];
        sort_rows(&mut rows);
        let keys: Vec<_> = rows.iter().map(|r| (r.function.as_str(), r.bound_id.as_str(), r.x, r.q)).collect();
        assert_eq!(
            keys,
            vec![
                ("identity", "THM22_21", Some(0.5), None),
                ("square", "THM22_21", Some(0.0), None),
                ("square", "THM22_21", Some(1.0), None),
                ("square", "THM23_22", Some(0.0), Some(2.0)),
                ("square", "THM23_22", Some(0.0), Some(3.0)),
            ]
        );
    }

    #[test]
    fn summary_reconciles() {
        let mut rows = vec![row("a", BoundId::Preinvex, Some(0.0), None); 3];
        rows[1].holds = Some(false);
        rows[2].holds = None;
        rows[2].skip_reason = Some("x".into());
        let s = Summary::from_rows(&rows, 1);
        assert_eq!((s.rows, s.holds, s.violations, s.skipped, s.invalid_cases), (3, 1, 1, 1, 1));
        assert_eq!(s.holds + s.violations + s.skipped, s.rows);
        assert!((s.max_ratio["THM22_21"] - 1.0 / 3.0).abs() < 1e-15);
    }
}

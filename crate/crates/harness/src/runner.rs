use preinvex_core::certify::{check_condition_c, max_abs_derivative};
use preinvex_core::{BoundCase, BoundId, BoundParams, CertReport, EtaMap, InvexSegment, SamplingPlan, ScalarFn, Verdict};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::report::{sort_rows, CaseCertification, Provenance, Row, RunReport, Summary};
use crate::{HarnessError, Result};

/// Exponent whose |f'|^q preinvexity the bound assumes, if any.
fn certified_power(id: BoundId, q: Option<f64>) -> Option<f64> {
    match id {
        BoundId::Ostrowski | BoundId::LipschitzMidpoint => None,
        BoundId::Preinvex | BoundId::PreinvexConditionC | BoundId::KirmaciMidpoint => Some(1.0),
        _ => q,
    }
}

fn exponent_problem(id: BoundId, q: f64) -> Option<String> {
    match id.min_exponent() {
        Some((min, true)) if q <= min => Some(format!("{id} needs q > {min}, got {q}")),
        Some((min, false)) if q < min => Some(format!("{id} needs q >= {min}, got {q}")),
        _ => None,
    }
}

fn describe(report: &CertReport, what: &str) -> String {
    match (report.verdict, report.witness) {
        (Verdict::Refuted, Some(w)) => format!(
            "{what} refuted (violation {} at x = {}, y = {}, t = {})",
            report.worst_violation, w.x, w.y, w.t
        ),
        (Verdict::Refuted, None) => format!("{what} refuted"),
        _ => format!("{what} inconclusive ({} of {} samples skipped)", report.skipped, report.skipped + report.samples_used),
    }
}

pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let bytes = serde_json::to_vec(cfg).expect("config serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

struct CaseRun<'a> {
    cfg: &'a ExperimentConfig,
    f: &'a ScalarFn,
    map: &'a EtaMap,
    a: f64,
    b: f64,
}

impl CaseRun<'_> {
    fn row(&self, id: BoundId, x: Option<f64>, q: Option<f64>) -> Row {
        Row {
            function: self.f.label().to_string(),
            eta: self.map.label().to_string(),
            a: self.a,
            b: self.b,
            bound_id: id,
            x,
            q,
            lhs: None,
            rhs: None,
            slack: None,
            holds: None,
            skip_reason: None,
        }
    }

    fn skip(&self, id: BoundId, q: Option<f64>, reason: String) -> Row {
        Row { skip_reason: Some(reason), ..self.row(id, None, q) }
    }

    fn bound_rows(&self, case: &BoundCase, id: BoundId, q: Option<f64>, rows: &mut Vec<Row>) -> Result<()> {
        if id.is_classical() && !self.map.is_trivial() {
            rows.push(self.skip(id, q, format!("{id} is stated for eta(b, a) = b - a only")));
            return Ok(());
        }
        if let Some(reason) = q.and_then(|q| exponent_problem(id, q)) {
            rows.push(self.skip(id, q, reason));
            return Ok(());
        }
        if let Some(power) = certified_power(id, q) {
            let report = case.derivative_certificate(power).map_err(|e| HarnessError::Report(e.to_string()))?;
            if !report.is_certified() {
                let what = if power == 1.0 { "preinvexity of |f'|".to_string() } else { format!("preinvexity of |f'|^{power}") };
                rows.push(self.skip(id, q, describe(&report, &what)));
                return Ok(());
            }
        }
        if id.requires_condition_c() {
            match case.condition_c() {
                Some(r) if r.is_certified() => {}
                Some(r) => {
                    rows.push(self.skip(id, q, describe(r, "condition C")));
                    return Ok(());
                }
                None => {
                    rows.push(self.skip(id, q, "condition C not checked".into()));
                    return Ok(());
                }
            }
        }
        let m = if id.uses_derivative_bound() {
            Some(self.cfg.m.unwrap_or_else(|| max_abs_derivative(self.f, case.segment())))
        } else {
            None
        };
        let params = BoundParams { q, m };
        let xs = if id.is_midpoint_only() { vec![case.segment().midpoint()] } else { case.segment().grid(self.cfg.x_resolution) };
        for x in xs {
            rows.push(match case.evaluate(id, x, &params) {
                Ok(r) => Row {
                    lhs: Some(r.lhs),
                    rhs: Some(r.rhs),
                    slack: Some(r.slack),
                    holds: Some(r.holds),
                    ..self.row(id, Some(x), q)
                },
                Err(e) => Row { skip_reason: Some(e.to_string()), ..self.row(id, Some(x), q) },
            });
        }
        Ok(())
    }
}

/// Runs every requested bound on every (function, η, segment) at every grid
/// x and q. Certifications are computed once per case and reused.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    run_experiment_seeded(cfg, None)
}

/// As [`run_experiment`], recording `seed` in the provenance. The pipeline
/// itself is deterministic.
pub fn run_experiment_seeded(cfg: &ExperimentConfig, seed: Option<u64>) -> Result<RunReport> {
    cfg.validate()?;
    let functions = cfg.resolve_functions()?;
    let maps = cfg.resolve_maps()?;
    let plan = SamplingPlan { tol: cfg.tolerances.cert, ..SamplingPlan::default() };
    let needs_c = cfg.bounds.iter().any(|id| id.requires_condition_c());
    let condition_c: Vec<Option<CertReport>> = maps
        .iter()
        .map(|m| needs_c.then(|| check_condition_c(m, &plan)).transpose())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| HarnessError::Report(e.to_string()))?;

    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let mut certifications = Vec::new();
    for f in &functions {
        for (map, cond) in maps.iter().zip(&condition_c) {
            for &[a, b] in &cfg.segments {
                let seg = match InvexSegment::new(map, a, b) {
                    Ok(s) => s,
                    Err(e) => {
                        notes.push(format!("{} / {} / ({a}, {b}): {e}", f.label(), map.label()));
                        continue;
                    }
                };
                let mut case = match BoundCase::with_tolerances(f, map, seg, cfg.tolerances, plan) {
                    Ok(c) => c,
                    Err(e) => {
                        notes.push(format!("{} / {} / ({a}, {b}): {e}", f.label(), map.label()));
                        continue;
                    }
                };
                if let Some(c) = cond {
                    case = case.with_condition_c(c.clone());
                }
                let run = CaseRun { cfg, f, map, a, b };
                let mut powers = Vec::new();
                for &id in &cfg.bounds {
                    let qs: Vec<Option<f64>> =
                        if id.uses_exponent() { cfg.q_values.iter().copied().map(Some).collect() } else { vec![None] };
                    for q in qs {
                        run.bound_rows(&case, id, q, &mut rows)?;
                        if let Some(p) = certified_power(id, q) {
                            if !powers.contains(&p) {
                                powers.push(p);
                            }
                        }
                    }
                }
                powers.sort_by(f64::total_cmp);
                let derivative_preinvex = powers
                    .into_iter()
                    .filter_map(|p| case.derivative_certificate(p).ok().map(|r| (p, r.verdict)))
                    .collect();
                certifications.push(CaseCertification {
                    function: f.label().to_string(),
                    eta: map.label().to_string(),
                    a,
                    b,
                    condition_c: cond.as_ref().map(|c| c.verdict),
                    derivative_preinvex,
                });
            }
        }
    }
    sort_rows(&mut rows);
    let summary = Summary::from_rows(&rows, notes.len());
    Ok(RunReport {
        rows,
        summary,
        certifications,
        notes,
        provenance: Provenance {
            config_sha256: config_hash(cfg),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml(text).unwrap()
    }

    #[test]
    fn three_rows_for_square() {
        let r = run_experiment(&cfg(
            "functions = [\"square\"]\neta_maps = [\"trivial\"]\nsegments = [[0, 1]]\nbounds = [\"THM22_21\"]\nx_resolution = 3\n",
        ))
        .unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(r.rows.iter().all(|row| row.holds == Some(true)));
        let xs: Vec<f64> = r.rows.iter().map(|row| row.x.unwrap()).collect();
        assert_eq!(xs, vec![0.0, 0.5, 1.0]);
        // |f'(a)| = 0, |f'(b)| = 2, so rhs = (1/6)·2·(second bracket): 1, 3/4, 2
        let rhs: Vec<f64> = r.rows.iter().map(|row| row.rhs.unwrap()).collect();
        let expect = [1.0 / 3.0, 0.25, 2.0 / 3.0];
        for (got, want) in rhs.iter().zip(expect) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn empty_bounds_give_empty_report() {
        let r = run_experiment(&cfg(
            "functions = [\"square\"]\neta_maps = [\"trivial\"]\nsegments = [[0, 1]]\nbounds = []\n",
        ))
        .unwrap();
        assert!(r.rows.is_empty());
        assert_eq!(r.summary, Summary::default());
    }

    #[test]
    fn identity_equality_at_right_end() {
        let r = run_experiment(&cfg(
            "functions = [\"identity\"]\neta_maps = [\"trivial\"]\nsegments = [[0, 1]]\nbounds = [\"THM22_21\"]\nx_resolution = 5\n",
        ))
        .unwrap();
        let last = r.rows.last().unwrap();
        assert_eq!(last.x, Some(1.0));
        assert_eq!(last.slack, Some(0.0));
        assert_eq!(last.holds, Some(true));
    }

    #[test]
    fn skips_and_notes() {
        let r = run_experiment(&cfg(
            r#"
functions = ["square", "tent"]
eta_maps = ["trivial", "sign_split", "nonzero_reals"]
segments = [[-1, 1], [3, -2]]
bounds = ["THM22_2B", "THM23_22", "KIRMACI_1C"]
q_values = [1, 2]
x_resolution = 3
"#,
        ))
        .unwrap();
        let reasons: Vec<&str> = r.rows.iter().filter_map(|row| row.skip_reason.as_deref()).collect();
        assert!(reasons.iter().any(|s| s.contains("needs q > 1")));
        assert!(reasons.iter().any(|s| s.contains("condition C refuted")));
        assert!(reasons.iter().any(|s| s.contains("eta(b, a) = b - a")));
        assert!(reasons.iter().any(|s| s.contains("preinvexity of |f'|") && s.contains("refuted")));
        assert!(!r.notes.is_empty());
        assert_eq!(r.summary.invalid_cases, r.notes.len());
        assert_eq!(r.summary.violations, 0);
        assert_eq!(r.summary.holds + r.summary.skipped, r.rows.len());
    }
}

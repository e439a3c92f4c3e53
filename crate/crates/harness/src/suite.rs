//! The built-in `paper` suite: a full bound grid over every registry
//! fixture plus the acceptance checks, each reported as PASS or FAIL.

use std::fmt;
use std::time::{Duration, Instant};

use preinvex_core::bounds::{check_integrated_mean_bound, check_subadditivity, verify_reduction, Reduction};
use preinvex_core::certify::{check_condition_c, check_preinvex, PreinvexTarget};
use preinvex_core::domain::linspace;
use preinvex_core::quadrature::identity_residual;
use preinvex_core::sharpness::{best_constant_estimate, SWEEP_POINTS};
use preinvex_core::tolerances::QUAD;
use preinvex_core::{registry, BoundCase, BoundId, CertReport, EtaMap, InvexSegment, SamplingPlan, ScalarFn, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, FunctionSpec};
use crate::report::to_csv;
use crate::runner::run_experiment;

pub const SUITE_NAMES: &[&str] = &["paper"];
pub const DEFAULT_SEED: u64 = 20_240_601;

pub const SEGMENTS: [[f64; 2]; 4] = [[0.0, 1.0], [1.0, 3.0], [3.0, -2.0], [-1.0, 1.0]];
pub const Q_VALUES: [f64; 4] = [1.0, 1.5, 2.0, 3.0];

/// Every registry function, η-map and bound over the standard segments.
pub fn paper_config() -> ExperimentConfig {
    ExperimentConfig {
        functions: registry::FUNCTION_LABELS.iter().map(|l| FunctionSpec::Label(l.to_string())).collect(),
        eta_maps: registry::ETA_LABELS.iter().map(|l| l.to_string()).collect(),
        segments: SEGMENTS.to_vec(),
        bounds: BoundId::ALL.to_vec(),
        q_values: Q_VALUES.to_vec(),
        x_resolution: SWEEP_POINTS,
        m: None,
        tolerances: Tolerances::default(),
        output: None,
    }
}

pub fn suite_config(name: &str) -> Option<ExperimentConfig> {
    (name == "paper").then(paper_config)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} [{}] {}: {}", self.id, self.title, self.detail)
    }
}

fn check(id: &'static str, title: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult { id, title, passed, detail }
}

fn smooth_fixtures() -> Vec<ScalarFn> {
    vec![ScalarFn::identity(), ScalarFn::square(), ScalarFn::cube(), ScalarFn::quartic_plus_linear(), ScalarFn::exp()]
}

fn all_fixtures() -> Vec<ScalarFn> {
    registry::FUNCTION_LABELS.iter().map(|l| registry::function(l).expect("registry label")).collect()
}

/// (map, segment) pairs over the standard segments that form valid segments.
fn setups(maps: &[EtaMap]) -> Vec<(EtaMap, InvexSegment)> {
    let mut out = Vec::new();
    for map in maps {
        for [a, b] in SEGMENTS {
            if let Ok(seg) = InvexSegment::new(map, a, b) {
                out.push((map.clone(), seg));
            }
        }
    }
    out
}

fn condition_c_maps() -> Vec<(EtaMap, CertReport)> {
    let plan = SamplingPlan::default();
    [EtaMap::trivial(), EtaMap::nonzero_reals()]
        .into_iter()
        .map(|m| {
            let r = check_condition_c(&m, &plan).expect("valid plan");
            (m, r)
        })
        .collect()
}

pub fn identity_check() -> CheckResult {
    let start = Instant::now();
    let setups = [
        (EtaMap::trivial(), 0.0, 1.0),
        (EtaMap::trivial(), 1.0, 3.0),
        (EtaMap::nonzero_reals(), 1.0, 3.0),
    ];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut failure = None;
    for (map, a, b) in &setups {
        let seg = InvexSegment::new(map, *a, *b).expect("valid segment");
        for f in smooth_fixtures() {
            for x in seg.grid(33) {
                match identity_residual(&f, &seg, x, QUAD) {
                    Ok(r) => worst = worst.max(r.residual),
                    Err(e) => failure = Some(format!("{} at {x}: {e}", f.label())),
                }
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let passed = failure.is_none() && worst <= 1e-8 && elapsed < Duration::from_secs(5);
    check(
        "1",
        "integral identity residual",
        passed,
        failure.unwrap_or_else(|| format!("{count} points, max residual {worst:e} (limit 1e-8), {elapsed:.2?} (limit 5 s)")),
    )
}

pub fn soundness_check() -> CheckResult {
    let mut fixtures = 0;
    let mut points = 0;
    let mut worst = f64::INFINITY;
    let mut where_ = String::new();
    let maps = [EtaMap::trivial(), EtaMap::sign_split(), EtaMap::nonzero_reals()];
    for (map, seg) in setups(&maps) {
        for f in all_fixtures() {
            let Ok(case) = BoundCase::new(&f, &map, seg) else { continue };
            if !case.derivative_certificate(1.0).is_ok_and(|r| r.is_certified()) {
                continue;
            }
            fixtures += 1;
            for x in seg.grid(129) {
                let r = case.preinvex(x).expect("evaluates");
                points += 1;
                if r.slack < worst {
                    worst = r.slack;
                    where_ = format!("{} / {} at x = {x}", f.label(), map.label());
                }
            }
        }
    }
    check(
        "2",
        "preinvex bound soundness",
        fixtures > 0 && worst >= -1e-9,
        format!("{fixtures} certified fixtures, {points} points, min slack {worst:e} ({where_})"),
    )
}

pub fn sharpness_checks() -> Vec<CheckResult> {
    let map = EtaMap::trivial();
    let case = BoundCase::from_endpoints(&ScalarFn::identity(), &map, 0.0, 1.0).expect("valid case");
    let ratio = case.preinvex(1.0).ok().and_then(|r| r.ratio()).unwrap_or(f64::NAN);
    let seg = *case.segment();
    let family = [ScalarFn::identity(), ScalarFn::square(), ScalarFn::cube()];
    let estimate = best_constant_estimate(&map, &seg, &family, SWEEP_POINTS);
    let mut out = Vec::new();
    match estimate {
        Ok(e) => {
            let passed = (ratio - 1.0).abs() <= 1e-12 && (e.constant - 1.0 / 6.0).abs() <= 1e-12;
            out.push(check(
                "3a",
                "sharpness of 1/6",
                passed,
                format!("ratio at x = b: {ratio}, estimate {} (1/6 = {})", e.constant, 1.0 / 6.0),
            ));
            let maxima: Vec<String> =
                e.member_maxima.iter().map(|(l, r)| format!("{l}: {}", r.map_or("n/a".into(), |r| r.to_string()))).collect();
            out.push(check(
                "3b",
                "equality attained only by the linear member",
                e.attaining == ["identity"],
                format!("members attaining the maximum: {:?}; per-member max ratio: {}", e.attaining, maxima.join(", ")),
            ));
        }
        Err(err) => out.push(check("3a", "sharpness of 1/6", false, err.to_string())),
    }
    out
}

pub fn reduction_check() -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for r in Reduction::ALL {
        match verify_reduction(r) {
            Ok(rep) => {
                worst = worst.max(rep.max_abs_diff);
                if !rep.passed {
                    failed.push(format!("{r} (diff {:e}, chain ok {})", rep.max_abs_diff, rep.relaxation_dominates));
                }
            }
            Err(e) => failed.push(format!("{r}: {e}")),
        }
    }
    check(
        "4",
        "reduction to classical midpoint bounds",
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} reductions, max |difference| {worst:e} (limit 1e-12)", Reduction::ALL.len())
        } else {
            failed.join("; ")
        },
    )
}

pub fn dominance_check() -> CheckResult {
    let mut compared = 0;
    let mut worst = f64::INFINITY;
    let mut uncertified = 0;
    let maps = condition_c_maps();
    for (map, cert) in &maps {
        for (_, seg) in setups(std::slice::from_ref(map)) {
            for f in all_fixtures() {
                let Ok(case) = BoundCase::new(&f, map, seg) else { continue };
                let case = case.with_condition_c(cert.clone());
                for x in seg.grid(129) {
                    let (Ok(plain), Ok(better)) = (case.preinvex(x), case.preinvex_condition_c(x)) else { continue };
                    worst = worst.min(plain.rhs - better.rhs);
                    compared += 1;
                }
                for q in Q_VALUES {
                    if !case.derivative_certificate(q).is_ok_and(|r| r.is_certified()) {
                        uncertified += 1;
                        continue;
                    }
                    for x in seg.grid(129) {
                        let (Ok(plain), Ok(better)) = (case.power_mean(x, q), case.power_mean_condition_c(x, q)) else {
                            continue;
                        };
                        worst = worst.min(plain.rhs - better.rhs);
                        compared += 1;
                    }
                }
            }
        }
    }
    check(
        "5",
        "condition C variants dominate",
        compared > 0 && worst >= -1e-9 && maps.iter().all(|(_, c)| c.is_certified()),
        format!("{compared} comparisons, min (plain - improved) {worst:e}, {uncertified} (fixture, q) pairs skipped as uncertified"),
    )
}

pub fn condition_c_check() -> CheckResult {
    let plan = SamplingPlan::default();
    let trivial = check_condition_c(&EtaMap::trivial(), &plan);
    let nonzero = check_condition_c(&EtaMap::nonzero_reals(), &plan);
    let doubled = check_condition_c(&EtaMap::scaled(2.0), &plan);
    let (Ok(t), Ok(n), Ok(d)) = (trivial, nonzero, doubled) else {
        return check("6", "condition C checker", false, "checker returned an error".into());
    };
    let witness = d.witness.map(|w| format!("x = {}, y = {}, t = {}", w.x, w.y, w.t)).unwrap_or_default();
    check(
        "6",
        "condition C checker",
        t.is_certified() && n.is_certified() && d.is_refuted() && d.witness.is_some(),
        format!(
            "trivial {:?}, nonzero_reals {:?} ({} skipped), 2(x - y) {:?} with witness {witness}",
            t.verdict, n.verdict, n.skipped, d.verdict
        ),
    )
}

pub fn preinvexity_check() -> CheckResult {
    let plan = SamplingPlan::default();
    let split = EtaMap::sign_split();
    let trivial = EtaMap::trivial();
    let neg_abs = ScalarFn::neg_abs();
    let neg_square = ScalarFn::square().scaled(-1.0);
    let a = InvexSegment::new(&split, 3.0, -2.0)
        .and_then(|seg| check_preinvex(PreinvexTarget::Value(&neg_abs), &split, &seg, &plan));
    let b = InvexSegment::new(&trivial, -1.0, 1.0)
        .and_then(|seg| check_preinvex(PreinvexTarget::Value(&neg_square), &trivial, &seg, &plan));
    let (Ok(a), Ok(b)) = (a, b) else {
        return check("7", "preinvexity checker", false, "checker returned an error".into());
    };
    let witness_ok = b.witness.is_some_and(|w| {
        let z = w.x + w.t * (w.y - w.x);
        neg_square.value(z) > (1.0 - w.t) * neg_square.value(w.x) + w.t * neg_square.value(w.y)
    });
    check(
        "7",
        "preinvexity checker",
        a.is_certified() && b.is_refuted() && witness_ok,
        format!(
            "-|x| with sign_split: {:?}; -x^2 with trivial: {:?}, witness {:?}",
            a.verdict, b.verdict, b.witness
        ),
    )
}

pub fn intermediate_checks(seed: u64) -> Vec<CheckResult> {
    let mut cases = 0;
    let mut failures = Vec::new();
    for (map, cert) in condition_c_maps() {
        for (_, seg) in setups(std::slice::from_ref(&map)) {
            for f in all_fixtures() {
                let Ok(case) = BoundCase::new(&f, &map, seg) else { continue };
                let case = case.with_condition_c(cert.clone());
                for q in Q_VALUES {
                    if !case.derivative_certificate(q).is_ok_and(|r| r.is_certified()) {
                        continue;
                    }
                    cases += 1;
                    match check_integrated_mean_bound(&case, q, &seg.grid(33)) {
                        Ok(r) if r.holds => {}
                        Ok(r) => failures.push(format!("{} / {} q = {q}: {r:?}", f.label(), map.label())),
                        Err(e) => failures.push(format!("{} / {} q = {q}: {e}", f.label(), map.label())),
                    }
                }
            }
        }
    }
    let mean = check(
        "8a",
        "integrated mean bound on |f'|^q",
        cases > 0 && failures.is_empty(),
        if failures.is_empty() { format!("{cases} certified (fixture, q) cases") } else { failures.join("; ") },
    );

    let (map, cert) = condition_c_maps().swap_remove(0);
    let equality = BoundCase::from_endpoints(&ScalarFn::square(), &map, 0.0, 1.0)
        .map(|c| c.with_condition_c(cert))
        .and_then(|c| check_integrated_mean_bound(&c, 1.0, &linspace(0.0, 1.0, 33)));
    let equality = match equality {
        Ok(r) => check(
            "8b",
            "equality case x^2, q = 1",
            r.mean_slack.abs() <= 1e-9 && r.holds,
            format!("mean slack {:e}", r.mean_slack),
        ),
        Err(e) => check("8b", "equality case x^2, q = 1", false, e.to_string()),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut all_hold = true;
    for s in [0.0, 0.25, 0.5, 0.75, 0.99] {
        for _ in 0..1000 {
            let pair = [(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))];
            match check_subadditivity(&pair, s) {
                Ok(r) => {
                    all_hold &= r.holds;
                    worst = worst.min(r.slack);
                }
                Err(_) => all_hold = false,
            }
        }
    }
    let sub = check(
        "8c",
        "subadditivity of t^s",
        all_hold,
        format!("5000 random pairs (seed {seed}), min slack {worst:e}"),
    );
    vec![mean, equality, sub]
}

pub fn determinism_check() -> CheckResult {
    let cfg = paper_config();
    let timed = || {
        let start = Instant::now();
        let csv = run_experiment(&cfg).and_then(|r| to_csv(&r.rows));
        (csv, start.elapsed())
    };
    let (first, t1) = timed();
    let (second, t2) = timed();
    let limit = Duration::from_secs(60);
    match (first, second) {
        (Ok(a), Ok(b)) => check(
            "9",
            "suite determinism and runtime",
            a == b && t1 < limit && t2 < limit,
            format!("{} CSV bytes, identical: {}, runs took {t1:.2?} and {t2:.2?} (limit 60 s)", a.len(), a == b),
        ),
        (Err(e), _) | (_, Err(e)) => check("9", "suite determinism and runtime", false, e.to_string()),
    }
}

/// All acceptance checks in order.
pub fn acceptance_checks(seed: u64) -> Vec<CheckResult> {
    let mut out = vec![identity_check(), soundness_check()];
    out.extend(sharpness_checks());
    out.extend([reduction_check(), dominance_check(), condition_c_check(), preinvexity_check()]);
    out.extend(intermediate_checks(seed));
    out.push(determinism_check());
    out
}

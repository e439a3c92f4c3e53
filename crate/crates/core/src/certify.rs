//! Sampling-based certification of invex sets, condition C and preinvexity.
//!
//! A `Refuted` verdict is sound: the witness can be re-evaluated by hand.
//! `Certified` only means that no violation above the tolerance was found at
//! the sampled resolution.

use serde::Serialize;

use crate::domain::{linspace, SamplePoint};
use crate::error::{Error, Result};
use crate::eta::EtaMap;
use crate::function::ScalarFn;
use crate::segment::InvexSegment;
use crate::tolerances::CERT;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingPlan {
    /// Grid points per spatial axis.
    pub spatial_points: usize,
    /// Grid points in t over [0, 1], endpoints included.
    pub t_points: usize,
    /// Spatial samples are drawn from the domain intersected with this window.
    pub window: (f64, f64),
    pub tol: f64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self { spatial_points: 64, t_points: 32, window: (-10.0, 10.0), tol: CERT }
    }
}

impl SamplingPlan {
    pub fn with_resolution(spatial_points: usize, t_points: usize) -> Self {
        Self { spatial_points, t_points, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.spatial_points < 3 || self.t_points < 3 {
            return Err(Error::InvalidInput(format!(
                "sampling plan needs at least 3 points per axis, got {}x{}",
                self.spatial_points, self.t_points
            )));
        }
        if !(self.window.0 < self.window.1) {
            return Err(Error::InvalidInput("sampling window is empty".into()));
        }
        Ok(())
    }

    fn t_grid(&self) -> Vec<f64> {
        linspace(0.0, 1.0, self.t_points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

/// Sample coordinates at which a violation was observed. `t2` is set only
/// for the two-parameter condition C identity, where `t` holds t₁.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertReport {
    pub verdict: Verdict,
    pub samples_used: usize,
    pub worst_violation: f64,
    pub witness: Option<Witness>,
    /// Grid or derived points nudged off an excluded point or open boundary.
    pub perturbed: usize,
    /// Samples dropped because a derived point left the domain.
    pub skipped: usize,
}

impl CertReport {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}

/// Running maximum of violations. Only a strictly larger value replaces the
/// current witness, so the result depends on the sample order alone.
#[derive(Debug, Default)]
struct Tally {
    used: usize,
    skipped: usize,
    perturbed: usize,
    worst: f64,
    witness: Option<Witness>,
}

impl Tally {
    fn record(&mut self, violation: f64, witness: Witness) {
        self.used += 1;
        let v = if violation.is_nan() { f64::INFINITY } else { violation };
        if v > self.worst {
            self.worst = v;
            self.witness = Some(witness);
        }
    }

    fn finish(self, tol: f64) -> CertReport {
        let total = self.used + self.skipped;
        let verdict = if self.worst > tol {
            Verdict::Refuted
        } else if total == 0 || 2 * self.skipped > total {
            Verdict::Inconclusive
        } else {
            Verdict::Certified
        };
        CertReport {
            verdict,
            samples_used: self.used,
            worst_violation: self.worst,
            witness: self.witness,
            perturbed: self.perturbed,
            skipped: self.skipped,
        }
    }
}

fn domain_samples(map: &EtaMap, plan: &SamplingPlan) -> Result<Vec<SamplePoint>> {
    plan.validate()?;
    map.domain().sample(plan.spatial_points, plan.window)
}

/// Checks `x + t·η(y, x) ∈ A` over the sampled domain. A derived point that
/// lands exactly on an excluded point or open boundary is perturbed and
/// flagged rather than counted as a violation.
pub fn check_invex_set(map: &EtaMap, plan: &SamplingPlan) -> Result<CertReport> {
    let xs = domain_samples(map, plan)?;
    let ts = plan.t_grid();
    let domain = map.domain();
    let mut tally = Tally {
        perturbed: xs.iter().filter(|p| p.perturbed).count(),
        ..Tally::default()
    };
    for x in &xs {
        for y in &xs {
            let e = map.raw(y.value, x.value);
            for &t in &ts {
                let z = x.value + t * e;
                let violation = if domain.contains(z) {
                    0.0
                } else {
                    let d = domain.distance(z);
                    if d == 0.0 && domain.admit(z).is_some() {
                        tally.perturbed += 1;
                    }
                    d
                };
                tally.record(violation, Witness { x: x.value, y: y.value, t, t2: None });
            }
        }
    }
    Ok(tally.finish(plan.tol))
}

/// Checks both condition C identities
///
/// ```text
/// η(y, y + tη(x, y)) = −tη(x, y)
/// η(x, y + tη(x, y)) = (1 − t)η(x, y)
/// ```
///
/// and their consequence `η(y + t₂η(x,y), y + t₁η(x,y)) = (t₂ − t₁)η(x,y)`.
/// Samples whose derived points leave the domain (or land on an excluded
/// point) are skipped; more than half skipped gives `Inconclusive`.
pub fn check_condition_c(map: &EtaMap, plan: &SamplingPlan) -> Result<CertReport> {
    let xs = domain_samples(map, plan)?;
    let ts = plan.t_grid();
    let domain = map.domain();
    let mut tally = Tally {
        perturbed: xs.iter().filter(|p| p.perturbed).count(),
        ..Tally::default()
    };
    let mut along: Vec<Option<f64>> = Vec::with_capacity(ts.len());
    for x in &xs {
        for y in &xs {
            let (x, y) = (x.value, y.value);
            let e = map.raw(x, y);
            along.clear();
            along.extend(ts.iter().map(|&t| {
                let z = y + t * e;
                domain.contains(z).then_some(z)
            }));
            for (i, &t) in ts.iter().enumerate() {
                let Some(z) = along[i] else {
                    tally.skipped += 1;
                    continue;
                };
                let first = (map.raw(y, z) + t * e).abs();
                let second = (map.raw(x, z) - (1.0 - t) * e).abs();
                tally.record(first.max(second), Witness { x, y, t, t2: None });
            }
            for (i, &t1) in ts.iter().enumerate() {
                for (j, &t2) in ts.iter().enumerate() {
                    let (Some(z1), Some(z2)) = (along[i], along[j]) else {
                        tally.skipped += 1;
                        continue;
                    };
                    let v = (map.raw(z2, z1) - (t2 - t1) * e).abs();
                    tally.record(v, Witness { x, y, t: t1, t2: Some(t2) });
                }
            }
        }
    }
    Ok(tally.finish(plan.tol))
}

/// What [`check_preinvex`] tests for preinvexity.
#[derive(Debug, Clone, Copy)]
pub enum PreinvexTarget<'a> {
    Value(&'a ScalarFn),
    AbsDerivative(&'a ScalarFn),
    /// |f'|^q with q ≥ 1.
    AbsDerivativePow(&'a ScalarFn, f64),
}

impl PreinvexTarget<'_> {
    pub fn label(&self) -> String {
        match self {
            Self::Value(f) => f.label().to_string(),
            Self::AbsDerivative(f) => format!("|{}'|", f.label()),
            Self::AbsDerivativePow(f, q) => format!("|{}'|^{q}", f.label()),
        }
    }

    fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Self::Value(f) => f.value(x),
            Self::AbsDerivative(f) => f.abs_derivative(x),
            Self::AbsDerivativePow(f, q) => f.abs_derivative_pow(x, *q),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { what: self.label(), point: x, value: v })
        }
    }
}

/// Spatial samples for the preinvexity test: a grid over the hull of
/// {a, b, a + η(b, a)} with a, b and a + η(b, a) themselves included.
fn segment_samples(map: &EtaMap, seg: &InvexSegment, n: usize) -> Vec<SamplePoint> {
    let (lo, hi) = seg.hull();
    let mut raw = linspace(lo, hi, n);
    raw.extend([seg.a(), seg.b(), seg.end()]);
    raw.sort_by(f64::total_cmp);
    raw.dedup();
    raw.into_iter().filter_map(|x| map.domain().admit(x)).collect()
}

/// Checks `g(x + tη(y, x)) ≤ (1 − t)g(x) + t·g(y)` for sampled x, y around the
/// segment (see [`segment_samples`]) and t ∈ [0, 1]. Violations are measured
/// as `(lhs − rhs) / max(1, |rhs|)`.
pub fn check_preinvex(
    target: PreinvexTarget<'_>,
    map: &EtaMap,
    seg: &InvexSegment,
    plan: &SamplingPlan,
) -> Result<CertReport> {
    plan.validate()?;
    if let PreinvexTarget::AbsDerivativePow(_, q) = target {
        if !(q >= 1.0) || !q.is_finite() {
            return Err(Error::InvalidExponent { q, reason: "preinvexity of |f'|^q needs q >= 1" });
        }
    }
    let xs = segment_samples(map, seg, plan.spatial_points);
    let ts = plan.t_grid();
    let values: Vec<f64> = xs.iter().map(|p| target.eval(p.value)).collect::<Result<_>>()?;
    let mut tally = Tally {
        perturbed: xs.iter().filter(|p| p.perturbed).count(),
        ..Tally::default()
    };
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in xs.iter().enumerate() {
            let e = map.raw(y.value, x.value);
            for &t in &ts {
                let z = x.value + t * e;
                let lhs = target.eval(z)?;
                let rhs = (1.0 - t) * values[i] + t * values[j];
                // relative above 1 so that large values do not fail on roundoff
                tally.record((lhs - rhs) / rhs.abs().max(1.0), Witness { x: x.value, y: y.value, t, t2: None });
            }
        }
    }
    Ok(tally.finish(plan.tol))
}

/// Grid check of |f'| ≤ M on the segment; returns the first point of the
/// largest excess.
pub fn check_derivative_bound(f: &ScalarFn, seg: &InvexSegment, m: f64) -> Result<()> {
    if !(m > 0.0) {
        return Err(Error::InvalidInput(format!("derivative bound M must be positive, got {m}")));
    }
    let mut worst: Option<(f64, f64)> = None;
    for x in seg.grid(1025) {
        let v = f.abs_derivative(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { what: format!("{}'", f.label()), point: x, value: v });
        }
        if v > m + CERT && worst.is_none_or(|(_, w)| v > w) {
            worst = Some((x, v));
        }
    }
    match worst {
        Some((point, value)) => Err(Error::DerivativeExceedsBound { point, value, bound: m }),
        None => Ok(()),
    }
}

/// Largest |f'| on a 1025-point grid of the segment.
pub fn max_abs_derivative(f: &ScalarFn, seg: &InvexSegment) -> f64 {
    seg.grid(1025).into_iter().map(|x| f.abs_derivative(x)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DomainDescriptor, Interval};

    fn unit() -> DomainDescriptor {
        DomainDescriptor::closed(0.0, 1.0).unwrap()
    }

    #[test]
    fn trivial_map_on_interval_is_invex() {
        let m = EtaMap::trivial().with_domain(unit());
        let r = check_invex_set(&m, &SamplingPlan::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Certified);
        assert_eq!(r.worst_violation, 0.0);
    }

    #[test]
    fn punctured_interval_is_invex_for_nonzero_map() {
        let d = DomainDescriptor::new(
            vec![Interval::open(-5.0, 0.0), Interval::open(0.0, 5.0)],
            vec![],
        )
        .unwrap();
        let m = EtaMap::nonzero_reals().with_domain(d);
        let r = check_invex_set(&m, &SamplingPlan::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Certified, "{r:?}");
        assert!(r.perturbed > 0);
    }

    #[test]
    fn doubled_eta_leaves_unit_interval() {
        let m = EtaMap::scaled(2.0).with_domain(DomainDescriptor::open(0.0, 1.0).unwrap());
        let r = check_invex_set(&m, &SamplingPlan::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        let w = r.witness.unwrap();
        let z = w.x + w.t * 2.0 * (w.y - w.x);
        assert!(!(0.0..1.0).contains(&z));
    }

    #[test]
    fn direct_membership_counterexample() {
        // x = 0.1, y = 0.9, t = 1: 0.1 + 2(0.8) = 1.7 is outside (0, 1).
        let m = EtaMap::scaled(2.0);
        let z = 0.1 + m.eval(0.9, 0.1).unwrap();
        assert!((z - 1.7).abs() < 1e-15);
    }

    #[test]
    fn empty_window_is_rejected() {
        let m = EtaMap::trivial().with_domain(unit());
        let plan = SamplingPlan { window: (5.0, 6.0), ..SamplingPlan::default() };
        assert_eq!(check_invex_set(&m, &plan).unwrap_err(), Error::EmptyDomain);
    }

    #[test]
    fn condition_c_trivial_and_nonzero() {
        let plan = SamplingPlan::with_resolution(24, 12);
        let r = check_condition_c(&EtaMap::trivial(), &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Certified, "{r:?}");
        let r = check_condition_c(&EtaMap::nonzero_reals(), &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Certified, "{r:?}");
        assert!(r.skipped > 0);
    }

    #[test]
    fn condition_c_refutes_doubled_eta() {
        // x = 1, y = 0, t = 1/2: eta(0, 1) = -2 but -t eta(1, 0) = -1.
        let m = EtaMap::scaled(2.0);
        let z = 0.0 + 0.5 * m.eval(1.0, 0.0).unwrap();
        assert_eq!(m.eval(0.0, z).unwrap(), -2.0);
        let r = check_condition_c(&m, &SamplingPlan::with_resolution(16, 9)).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        assert!(r.witness.is_some());
    }

    #[test]
    fn condition_c_fails_for_sign_split() {
        let r = check_condition_c(&EtaMap::sign_split(), &SamplingPlan::with_resolution(16, 9))
            .unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
    }

    #[test]
    fn preinvex_square_and_neg_abs() {
        let plan = SamplingPlan::with_resolution(32, 16);
        let triv = EtaMap::trivial();
        let seg = InvexSegment::new(&triv, 0.0, 1.0).unwrap();
        let sq = ScalarFn::square();
        let r = check_preinvex(PreinvexTarget::Value(&sq), &triv, &seg, &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Certified);

        let split = EtaMap::sign_split();
        let seg = InvexSegment::new(&split, 3.0, -2.0).unwrap();
        let na = ScalarFn::neg_abs();
        let r = check_preinvex(PreinvexTarget::Value(&na), &split, &seg, &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Certified, "{r:?}");
    }

    #[test]
    fn preinvex_refutes_concave() {
        let triv = EtaMap::trivial();
        let seg = InvexSegment::new(&triv, 0.0, 1.0).unwrap();
        let f = ScalarFn::new("neg_square", |x| -x * x, |x| -2.0 * x);
        let r = check_preinvex(PreinvexTarget::Value(&f), &triv, &seg, &SamplingPlan::default())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        // worst point of -x^2 on [0, 1] is x = 0, y = 1, t = 1/2 with gap 1/4
        assert!((r.worst_violation - 0.25).abs() < 1e-3);
        let w = r.witness.unwrap();
        let z = w.x + w.t * (w.y - w.x);
        let gap = -z * z - ((1.0 - w.t) * -w.x * w.x + w.t * -w.y * w.y);
        assert!((gap - r.worst_violation).abs() < 1e-15);
    }

    #[test]
    fn rejects_small_exponent() {
        let triv = EtaMap::trivial();
        let seg = InvexSegment::new(&triv, 0.0, 1.0).unwrap();
        let f = ScalarFn::square();
        let r = check_preinvex(
            PreinvexTarget::AbsDerivativePow(&f, 0.5),
            &triv,
            &seg,
            &SamplingPlan::default(),
        );
        assert!(matches!(r, Err(Error::InvalidExponent { .. })));
    }

    #[test]
    fn non_finite_target_is_rejected() {
        let triv = EtaMap::trivial();
        let seg = InvexSegment::new(&triv, 0.0, 1.0).unwrap();
        let f = ScalarFn::new("recip", |x| 1.0 / x, |x| -1.0 / (x * x));
        let r = check_preinvex(PreinvexTarget::Value(&f), &triv, &seg, &SamplingPlan::default());
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn derivative_bound_witness() {
        let triv = EtaMap::trivial();
        let seg = InvexSegment::new(&triv, 0.0, 1.0).unwrap();
        assert!(check_derivative_bound(&ScalarFn::square(), &seg, 2.0).is_ok());
        let err = check_derivative_bound(&ScalarFn::square(), &seg, 1.5).unwrap_err();
        assert_eq!(err, Error::DerivativeExceedsBound { point: 1.0, value: 2.0, bound: 1.5 });
    }
}

//! Closed-form Ostrowski-type bounds and their evaluation against the
//! numerically computed left-hand side `|f(x) − (1/η)∫_a^{a+η} f(u) du|`.
//!
//! Every bound is evaluated through a [`BoundCase`], which fixes the
//! function, the η-map and the segment, computes the integral mean once and
//! caches the certifications that the bounds depend on.

mod auxiliary;
mod classical;
mod reduction;

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

pub use auxiliary::{
    check_integrated_mean_bound, check_subadditivity, IntegratedMeanReport, SubadditivityReport,
};
pub use classical::classical_bound;
pub use reduction::{verify_reduction, Reduction, ReductionReport};

use crate::certify::{
    check_condition_c, check_derivative_bound, check_preinvex, CertReport, PreinvexTarget,
    SamplingPlan,
};
use crate::error::{Error, Result};
use crate::eta::EtaMap;
use crate::function::ScalarFn;
use crate::quadrature::integrate;
use crate::segment::InvexSegment;
use crate::tolerances::Tolerances;

/// Stable identifiers used on the command line, in configs and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BoundId {
    #[serde(rename = "OSTROWSKI_1A")]
    Ostrowski,
    #[serde(rename = "LIPSCHITZ_1B")]
    LipschitzMidpoint,
    #[serde(rename = "KIRMACI_1C")]
    KirmaciMidpoint,
    #[serde(rename = "KIRMACI_1D")]
    KirmaciHolderMidpoint,
    #[serde(rename = "KIRMACI_1E")]
    KirmaciHolderMidpointRelaxed,
    #[serde(rename = "KIRMACI_1EE")]
    KirmaciPowerMeanMidpoint,
    #[serde(rename = "THM22_21")]
    Preinvex,
    #[serde(rename = "THM22_2B")]
    PreinvexConditionC,
    #[serde(rename = "THM23_22")]
    Holder,
    #[serde(rename = "THM23_COR_M")]
    HolderBoundedDerivative,
    #[serde(rename = "THM23_COR_S1")]
    HolderMidpoint,
    #[serde(rename = "THM24")]
    PowerMean,
    #[serde(rename = "THM24_COR_S2")]
    PowerMeanMidpoint,
    #[serde(rename = "THM24_REMARK_B")]
    PowerMeanConditionC,
}

impl BoundId {
    pub const ALL: [BoundId; 14] = [
        BoundId::Ostrowski,
        BoundId::LipschitzMidpoint,
        BoundId::KirmaciMidpoint,
        BoundId::KirmaciHolderMidpoint,
        BoundId::KirmaciHolderMidpointRelaxed,
        BoundId::KirmaciPowerMeanMidpoint,
        BoundId::Preinvex,
        BoundId::PreinvexConditionC,
        BoundId::Holder,
        BoundId::HolderBoundedDerivative,
        BoundId::HolderMidpoint,
        BoundId::PowerMean,
        BoundId::PowerMeanMidpoint,
        BoundId::PowerMeanConditionC,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::Ostrowski => "OSTROWSKI_1A",
            BoundId::LipschitzMidpoint => "LIPSCHITZ_1B",
            BoundId::KirmaciMidpoint => "KIRMACI_1C",
            BoundId::KirmaciHolderMidpoint => "KIRMACI_1D",
            BoundId::KirmaciHolderMidpointRelaxed => "KIRMACI_1E",
            BoundId::KirmaciPowerMeanMidpoint => "KIRMACI_1EE",
            BoundId::Preinvex => "THM22_21",
            BoundId::PreinvexConditionC => "THM22_2B",
            BoundId::Holder => "THM23_22",
            BoundId::HolderBoundedDerivative => "THM23_COR_M",
            BoundId::HolderMidpoint => "THM23_COR_S1",
            BoundId::PowerMean => "THM24",
            BoundId::PowerMeanMidpoint => "THM24_COR_S2",
            BoundId::PowerMeanConditionC => "THM24_REMARK_B",
        }
    }

    /// Bounds stated on the ordinary interval [a, b].
    pub fn is_classical(self) -> bool {
        matches!(
            self,
            BoundId::Ostrowski
                | BoundId::LipschitzMidpoint
                | BoundId::KirmaciMidpoint
                | BoundId::KirmaciHolderMidpoint
                | BoundId::KirmaciHolderMidpointRelaxed
                | BoundId::KirmaciPowerMeanMidpoint
        )
    }

    /// Bounds that are only stated at the midpoint of the segment.
    pub fn is_midpoint_only(self) -> bool {
        matches!(
            self,
            BoundId::LipschitzMidpoint
                | BoundId::KirmaciMidpoint
                | BoundId::KirmaciHolderMidpoint
                | BoundId::KirmaciHolderMidpointRelaxed
                | BoundId::KirmaciPowerMeanMidpoint
                | BoundId::HolderMidpoint
                | BoundId::PowerMeanMidpoint
        )
    }

    /// Whether the bound is parameterised by an exponent q.
    pub fn uses_exponent(self) -> bool {
        matches!(
            self,
            BoundId::KirmaciHolderMidpoint
                | BoundId::KirmaciHolderMidpointRelaxed
                | BoundId::KirmaciPowerMeanMidpoint
                | BoundId::Holder
                | BoundId::HolderBoundedDerivative
                | BoundId::HolderMidpoint
                | BoundId::PowerMean
                | BoundId::PowerMeanMidpoint
                | BoundId::PowerMeanConditionC
        )
    }

    /// Smallest admissible q (exclusive when `strict`).
    pub fn min_exponent(self) -> Option<(f64, bool)> {
        match self {
            BoundId::KirmaciHolderMidpoint
            | BoundId::KirmaciHolderMidpointRelaxed
            | BoundId::Holder
            | BoundId::HolderBoundedDerivative
            | BoundId::HolderMidpoint => Some((1.0, true)),
            BoundId::KirmaciPowerMeanMidpoint
            | BoundId::PowerMean
            | BoundId::PowerMeanMidpoint
            | BoundId::PowerMeanConditionC => Some((1.0, false)),
            _ => None,
        }
    }

    pub fn uses_derivative_bound(self) -> bool {
        matches!(
            self,
            BoundId::Ostrowski | BoundId::LipschitzMidpoint | BoundId::HolderBoundedDerivative
        )
    }

    pub fn requires_condition_c(self) -> bool {
        matches!(
            self,
            BoundId::PreinvexConditionC
                | BoundId::Holder
                | BoundId::HolderBoundedDerivative
                | BoundId::HolderMidpoint
                | BoundId::PowerMeanConditionC
        )
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// Exponent and derivative bound for a single evaluation. The Hölder
/// conjugate p is always derived from q.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundParams {
    pub q: Option<f64>,
    pub m: Option<f64>,
}

impl BoundParams {
    pub fn with_q(q: f64) -> Self {
        Self { q: Some(q), m: None }
    }

    pub fn with_m(m: f64) -> Self {
        Self { q: None, m: Some(m) }
    }
}

/// q/(q − 1) for q > 1.
pub fn conjugate_exponent(q: f64) -> Result<f64> {
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::InvalidExponent { q, reason: "the Hölder conjugate needs q > 1" });
    }
    Ok(q / (q - 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    pub x: f64,
    pub q: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    /// Named intermediate quantities (bracket coefficients, power means).
    pub terms: Vec<(&'static str, f64)>,
}

impl BoundReport {
    fn new(
        bound_id: BoundId,
        x: f64,
        q: Option<f64>,
        lhs: f64,
        rhs: f64,
        tol: &Tolerances,
        terms: Vec<(&'static str, f64)>,
    ) -> Self {
        Self { bound_id, x, q, lhs, rhs, slack: rhs - lhs, holds: tol.holds(lhs, rhs), terms }
    }

    pub fn ratio(&self) -> Option<f64> {
        (self.rhs >= crate::tolerances::RHS_FLOOR).then(|| self.lhs / self.rhs)
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

/// Bracket coefficients (of |f'(a)| and |f'(b)|) of the preinvex bound at
/// relative position u = (x − a)/η.
pub fn preinvex_brackets(u: f64) -> (f64, f64) {
    let v = 1.0 - u;
    (3.0 * u * u - 2.0 * u.powi(3) + 2.0 * v.powi(3), 1.0 - 3.0 * u * u + 4.0 * u.powi(3))
}

fn power_mean(values: &[(f64, f64)], q: f64) -> f64 {
    // Σ weight·value^q, then the 1/q root
    values.iter().map(|(w, v)| w * v.powf(q)).sum::<f64>().max(0.0).powf(1.0 / q)
}

fn require_exponent(id: BoundId, params: &BoundParams) -> Result<f64> {
    let q = params.q.ok_or(Error::MissingExponent(id))?;
    match id.min_exponent() {
        Some((min, true)) if !(q > min) || !q.is_finite() => {
            Err(Error::InvalidExponent { q, reason: "this bound needs q > 1" })
        }
        Some((min, false)) if !(q >= min) || !q.is_finite() => {
            Err(Error::InvalidExponent { q, reason: "this bound needs q >= 1" })
        }
        _ => Ok(q),
    }
}

/// A function, an η-map and a segment, with the integral mean and the
/// hypothesis certifications computed once and reused across evaluations.
pub struct BoundCase {
    f: ScalarFn,
    map: EtaMap,
    seg: InvexSegment,
    mean: f64,
    mean_err: f64,
    tol: Tolerances,
    plan: SamplingPlan,
    condition_c: Option<CertReport>,
    preinvex: Mutex<Vec<(u64, CertReport)>>,
}

impl fmt::Debug for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundCase")
            .field("f", &self.f.label())
            .field("map", &self.map.label())
            .field("seg", &self.seg)
            .field("mean", &self.mean)
            .finish()
    }
}

impl BoundCase {
    pub fn new(f: &ScalarFn, map: &EtaMap, seg: InvexSegment) -> Result<Self> {
        Self::with_tolerances(f, map, seg, Tolerances::default(), SamplingPlan::default())
    }

    pub fn with_tolerances(
        f: &ScalarFn,
        map: &EtaMap,
        seg: InvexSegment,
        tol: Tolerances,
        plan: SamplingPlan,
    ) -> Result<Self> {
        let eta = seg.eta();
        if let Some(&point) = f.corners().iter().find(|&&c| seg.a() <= c && c <= seg.end()) {
            return Err(Error::NotDifferentiable { function: f.label().to_string(), point });
        }
        let integral = integrate(f, seg.a(), seg.end(), tol.quad * eta)?;
        Ok(Self {
            f: f.clone(),
            map: map.clone(),
            seg,
            mean: integral.value / eta,
            mean_err: integral.err_estimate / eta,
            tol,
            plan,
            condition_c: None,
            preinvex: Mutex::new(Vec::new()),
        })
    }

    /// Convenience constructor from the raw endpoints.
    pub fn from_endpoints(f: &ScalarFn, map: &EtaMap, a: f64, b: f64) -> Result<Self> {
        Self::new(f, map, InvexSegment::new(map, a, b)?)
    }

    /// Runs the condition C checker for this case's η-map.
    pub fn certify_condition_c(mut self) -> Result<Self> {
        self.condition_c = Some(check_condition_c(&self.map, &self.plan)?);
        Ok(self)
    }

    /// Reuses a condition C report computed elsewhere for the same map.
    pub fn with_condition_c(mut self, report: CertReport) -> Self {
        self.condition_c = Some(report);
        self
    }

    pub fn function(&self) -> &ScalarFn {
        &self.f
    }

    pub fn map(&self) -> &EtaMap {
        &self.map
    }

    pub fn segment(&self) -> &InvexSegment {
        &self.seg
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn plan(&self) -> &SamplingPlan {
        &self.plan
    }

    /// (1/η)∫_a^{a+η} f(u) du.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn mean_error(&self) -> f64 {
        self.mean_err
    }

    pub fn condition_c(&self) -> Option<&CertReport> {
        self.condition_c.as_ref()
    }

    /// |f(x) − mean|.
    pub fn lhs(&self, x: f64) -> Result<f64> {
        self.seg.require(x)?;
        let v = self.f.value(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { what: self.f.label().to_string(), point: x, value: v });
        }
        Ok((v - self.mean).abs())
    }

    /// Preinvexity of |f'| (q = 1) or |f'|^q on the segment, cached per q.
    pub fn derivative_certificate(&self, q: f64) -> Result<CertReport> {
        let key = q.to_bits();
        if let Some((_, r)) = self.preinvex.lock().unwrap().iter().find(|(k, _)| *k == key) {
            return Ok(r.clone());
        }
        let target = if q == 1.0 {
            PreinvexTarget::AbsDerivative(&self.f)
        } else {
            PreinvexTarget::AbsDerivativePow(&self.f, q)
        };
        let report = check_preinvex(target, &self.map, &self.seg, &self.plan)?;
        self.preinvex.lock().unwrap().push((key, report.clone()));
        Ok(report)
    }

    fn require_condition_c(&self) -> Result<()> {
        match &self.condition_c {
            None => Err(Error::ConditionCUnchecked(self.map.label().to_string())),
            Some(r) if r.is_refuted() => Err(Error::ConditionCRefuted {
                map: self.map.label().to_string(),
                witness: r.witness,
            }),
            Some(r) if !r.is_certified() => {
                Err(Error::ConditionCUnchecked(self.map.label().to_string()))
            }
            Some(_) => Ok(()),
        }
    }

    fn require_preinvex_power(&self, q: f64) -> Result<()> {
        let r = self.derivative_certificate(q)?;
        if r.is_refuted() {
            let target = if q == 1.0 {
                PreinvexTarget::AbsDerivative(&self.f)
            } else {
                PreinvexTarget::AbsDerivativePow(&self.f, q)
            };
            return Err(Error::NotPreinvex { target: target.label(), witness: r.witness });
        }
        Ok(())
    }

    /// |f'(a)|, |f'(b)| and |f'(a + η(b, a))|.
    fn endpoint_slopes(&self) -> Result<(f64, f64, f64)> {
        let s = (
            self.abs_slope(self.seg.a())?,
            self.abs_slope(self.seg.b())?,
            self.abs_slope(self.seg.end())?,
        );
        Ok(s)
    }

    fn abs_slope(&self, x: f64) -> Result<f64> {
        let v = self.f.abs_derivative(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { what: format!("{}'", self.f.label()), point: x, value: v })
        }
    }

    fn report(
        &self,
        id: BoundId,
        x: f64,
        q: Option<f64>,
        rhs: f64,
        terms: Vec<(&'static str, f64)>,
    ) -> Result<BoundReport> {
        let lhs = self.lhs(x)?;
        Ok(BoundReport::new(id, x, q, lhs, rhs, &self.tol, terms))
    }

    /// Dispatches on `id`. Midpoint-only bounds ignore `x` and evaluate at
    /// the midpoint of the segment.
    pub fn evaluate(&self, id: BoundId, x: f64, params: &BoundParams) -> Result<BoundReport> {
        let m = || params.m.ok_or(Error::MissingDerivativeBound(id));
        match id {
            BoundId::Preinvex => self.preinvex(x),
            BoundId::PreinvexConditionC => self.preinvex_condition_c(x),
            BoundId::Holder => self.holder(x, require_exponent(id, params)?),
            BoundId::HolderBoundedDerivative => {
                self.holder_bounded_derivative(x, require_exponent(id, params)?, m()?)
            }
            BoundId::HolderMidpoint => self.holder_midpoint(require_exponent(id, params)?),
            BoundId::PowerMean => self.power_mean(x, require_exponent(id, params)?),
            BoundId::PowerMeanMidpoint => self.power_mean_midpoint(require_exponent(id, params)?),
            BoundId::PowerMeanConditionC => {
                self.power_mean_condition_c(x, require_exponent(id, params)?)
            }
            classical => self.classical(classical, x, params),
        }
    }

    fn preinvex_with(&self, id: BoundId, x: f64, far_slope: f64, a_slope: f64) -> Result<BoundReport> {
        self.seg.require(x)?;
        let (ca, cb) = preinvex_brackets(self.seg.relative(x));
        let rhs = self.seg.eta() / 6.0 * (ca * a_slope + cb * far_slope);
        self.report(id, x, None, rhs, vec![("bracket_a", ca), ("bracket_b", cb)])
    }

    /// (η/6)·{[3u² − 2u³ + 2v³]|f'(a)| + [1 − 3u² + 4u³]|f'(b)|}, with
    /// u = (x − a)/η and v = 1 − u. Assumes |f'| is preinvex.
    pub fn preinvex(&self, x: f64) -> Result<BoundReport> {
        let (sa, sb, _) = self.endpoint_slopes()?;
        self.preinvex_with(BoundId::Preinvex, x, sb, sa)
    }

    /// As [`Self::preinvex`] with |f'(a + η(b, a))| in place of |f'(b)|;
    /// needs condition C.
    pub fn preinvex_condition_c(&self, x: f64) -> Result<BoundReport> {
        self.require_condition_c()?;
        let (sa, _, se) = self.endpoint_slopes()?;
        self.preinvex_with(BoundId::PreinvexConditionC, x, se, sa)
    }

    /// Hölder-type bound for q > 1 under condition C:
    /// (1/(p+1))^{1/p} {((x−a)²/η)·M_q(|f'(a)|, |f'(x)|) + ((a+η−x)²/η)·M_q(|f'(a+η)|, |f'(x)|)}
    /// where M_q is the q-power mean of two values.
    pub fn holder(&self, x: f64, q: f64) -> Result<BoundReport> {
        let id = BoundId::Holder;
        require_exponent(id, &BoundParams::with_q(q))?;
        self.require_condition_c()?;
        self.seg.require(x)?;
        let p = conjugate_exponent(q)?;
        let (sa, _, se) = self.endpoint_slopes()?;
        let sx = self.abs_slope(x)?;
        let eta = self.seg.eta();
        let left_len = x - self.seg.a();
        let right_len = self.seg.end() - x;
        let left_mean = power_mean(&[(0.5, sa), (0.5, sx)], q);
        let right_mean = power_mean(&[(0.5, se), (0.5, sx)], q);
        let factor = (1.0 / (p + 1.0)).powf(1.0 / p);
        let rhs = factor
            * (left_len * left_len / eta * left_mean + right_len * right_len / eta * right_mean);
        self.report(id, x, Some(q), rhs, vec![("left_mean", left_mean), ("right_mean", right_mean)])
    }

    /// (1/(p+1))^{1/p}·M·((x−a)² + (a+η−x)²)/η after checking |f'| ≤ M on a
    /// grid of the segment.
    pub fn holder_bounded_derivative(&self, x: f64, q: f64, m: f64) -> Result<BoundReport> {
        let id = BoundId::HolderBoundedDerivative;
        require_exponent(id, &BoundParams::with_q(q))?;
        self.require_condition_c()?;
        self.seg.require(x)?;
        check_derivative_bound(&self.f, &self.seg, m)?;
        let p = conjugate_exponent(q)?;
        let left = x - self.seg.a();
        let right = self.seg.end() - x;
        let rhs = (1.0 / (p + 1.0)).powf(1.0 / p) * m * (left * left + right * right) / self.seg.eta();
        self.report(id, x, Some(q), rhs, vec![("m", m)])
    }

    /// Hölder bound at the midpoint, with |f'(mid)|^q replaced by its
    /// preinvex upper bound.
    pub fn holder_midpoint(&self, q: f64) -> Result<BoundReport> {
        let id = BoundId::HolderMidpoint;
        require_exponent(id, &BoundParams::with_q(q))?;
        self.require_condition_c()?;
        let p = conjugate_exponent(q)?;
        let (sa, _, se) = self.endpoint_slopes()?;
        let first = power_mean(&[(0.75, sa), (0.25, se)], q);
        let second = power_mean(&[(0.75, se), (0.25, sa)], q);
        let rhs = (1.0 / (p + 1.0)).powf(1.0 / p) * self.seg.eta() / 4.0 * (first + second);
        self.report(id, self.seg.midpoint(), Some(q), rhs, vec![("first", first), ("second", second)])
    }

    fn power_mean_with(&self, id: BoundId, x: f64, q: f64, far_slope: f64) -> Result<BoundReport> {
        self.seg.require(x)?;
        let (a, eta) = (self.seg.a(), self.seg.eta());
        let (sa, _, _) = self.endpoint_slopes()?;
        let u = self.seg.relative(x);
        let v = (self.seg.end() - x) / eta;
        let eta3 = 6.0 * eta.powi(3);
        let d = x - a;
        let left = [
            (d * d * (3.0 * eta - 2.0 * x + 2.0 * a) / eta3, sa),
            (u.powi(3) / 3.0, far_slope),
        ];
        let right = [
            (v.powi(3) / 3.0, sa),
            (1.0 / 6.0 + d * d * (2.0 * x - 3.0 * eta - 2.0 * a) / eta3, far_slope),
        ];
        let left_term = power_mean(&left, q);
        let right_term = power_mean(&right, q);
        let e = 2.0 * (1.0 - 1.0 / q);
        let rhs = eta
            * 0.5f64.powf(1.0 - 1.0 / q)
            * (u.powf(e) * left_term + v.max(0.0).powf(e) * right_term);
        self.report(id, x, Some(q), rhs, vec![("left", left_term), ("right", right_term)])
    }

    /// Power-mean bound for q ≥ 1; requires |f'|^q to be preinvex on the
    /// segment. Coincides with [`Self::preinvex`] at q = 1.
    pub fn power_mean(&self, x: f64, q: f64) -> Result<BoundReport> {
        let id = BoundId::PowerMean;
        require_exponent(id, &BoundParams::with_q(q))?;
        self.require_preinvex_power(q)?;
        let (_, sb, _) = self.endpoint_slopes()?;
        self.power_mean_with(id, x, q, sb)
    }

    /// [`Self::power_mean`] with |f'(a + η(b, a))| in place of |f'(b)|;
    /// needs condition C.
    pub fn power_mean_condition_c(&self, x: f64, q: f64) -> Result<BoundReport> {
        let id = BoundId::PowerMeanConditionC;
        require_exponent(id, &BoundParams::with_q(q))?;
        self.require_condition_c()?;
        self.require_preinvex_power(q)?;
        let (_, _, se) = self.endpoint_slopes()?;
        self.power_mean_with(id, x, q, se)
    }

    /// (3^{1−1/q}/8)·η·(|f'(a)| + |f'(b)|) at the midpoint.
    pub fn power_mean_midpoint(&self, q: f64) -> Result<BoundReport> {
        let id = BoundId::PowerMeanMidpoint;
        require_exponent(id, &BoundParams::with_q(q))?;
        self.require_preinvex_power(q)?;
        let (sa, sb, _) = self.endpoint_slopes()?;
        let rhs = 3f64.powf(1.0 - 1.0 / q) / 8.0 * self.seg.eta() * (sa + sb);
        self.report(id, self.seg.midpoint(), Some(q), rhs, Vec::new())
    }

    /// Classical bound on [a, b]; the segment must satisfy η(b, a) = b − a.
    pub fn classical(&self, id: BoundId, x: f64, params: &BoundParams) -> Result<BoundReport> {
        if !id.is_classical() {
            return Err(Error::InvalidInput(format!("{id} is not a classical bound")));
        }
        if self.seg.end() != self.seg.b() {
            return Err(Error::RequiresTrivialEta(id));
        }
        let q = if id.uses_exponent() { Some(require_exponent(id, params)?) } else { None };
        let m = if id.uses_derivative_bound() {
            let m = params.m.ok_or(Error::MissingDerivativeBound(id))?;
            check_derivative_bound(&self.f, &self.seg, m)?;
            Some(m)
        } else {
            None
        };
        let x = if id.is_midpoint_only() { self.seg.midpoint() } else { x };
        self.seg.require(x)?;
        let (sa, sb, _) = self.endpoint_slopes()?;
        let rhs = classical::rhs(id, self.seg.a(), self.seg.b(), x, sa, sb, q, m)?;
        self.report(id, x, q, rhs, Vec::new())
    }
}

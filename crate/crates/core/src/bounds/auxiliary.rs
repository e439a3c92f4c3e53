//! Intermediate inequalities used by the Hölder-type bound: the sum
//! subadditivity of t ↦ t^s for 0 ≤ s < 1, and the integrated-mean bound on
//! |f'|^q together with its two partial-range forms.

use serde::Serialize;

use super::BoundCase;
use crate::error::{Error, Result};
use crate::quadrature::integrate_with_breaks;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubadditivityReport {
    /// Σ (a_k + b_k)^s
    pub lhs: f64,
    /// Σ a_k^s + Σ b_k^s
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Checks Σ(a_k + b_k)^s ≤ Σa_k^s + Σb_k^s for non-negative pairs and
/// 0 ≤ s < 1. `0^0` is taken as 1, as `powf` does.
pub fn check_subadditivity(pairs: &[(f64, f64)], s: f64) -> Result<SubadditivityReport> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::InvalidInput(format!("subadditivity needs 0 <= s < 1, got {s}")));
    }
    if let Some(&(a, b)) = pairs.iter().find(|(a, b)| !(*a >= 0.0 && *b >= 0.0) || !a.is_finite() || !b.is_finite()) {
        return Err(Error::InvalidInput(format!("pair ({a}, {b}) is not non-negative and finite")));
    }
    let lhs: f64 = pairs.iter().map(|(a, b)| (a + b).powf(s)).sum();
    let rhs: f64 = pairs.iter().map(|(a, b)| a.powf(s) + b.powf(s)).sum();
    let slack = rhs - lhs;
    let tol = crate::tolerances::INEQ_ABS + crate::tolerances::INEQ_REL * rhs.abs();
    Ok(SubadditivityReport { lhs, rhs, slack, holds: slack >= -tol })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegratedMeanReport {
    pub q: f64,
    /// (1/η)∫_a^{a+η} |f'(u)|^q du
    pub mean_lhs: f64,
    /// (|f'(a)|^q + |f'(a+η)|^q)/2
    pub mean_rhs: f64,
    pub mean_slack: f64,
    /// Smallest slack over both partial-range bounds and all x.
    pub worst_partial_slack: f64,
    pub worst_partial_x: f64,
    /// Largest quadrature error estimate among the integrals involved.
    pub quad_err: f64,
    pub holds: bool,
}

/// Verifies, with s = (x − a)/η,
///
/// ```text
/// (1/η)∫_a^{a+η} |f'|^q        ≤ (|f'(a)|^q + |f'(a+η)|^q)/2
/// ∫_0^s |f'(a+tη)|^q dt        ≤ s (|f'(a)|^q + |f'(x)|^q)/2
/// ∫_s^1 |f'(a+tη)|^q dt        ≤ (1−s)(|f'(a+η)|^q + |f'(x)|^q)/2
/// ```
///
/// at each x of `xs`, allowing quadrature error plus the inequality
/// tolerance. Requires condition C to be certified on the case.
pub fn check_integrated_mean_bound(case: &BoundCase, q: f64, xs: &[f64]) -> Result<IntegratedMeanReport> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::InvalidExponent { q, reason: "the integrated mean bound needs q >= 1" });
    }
    case.require_condition_c()?;
    let f = case.function();
    let seg = case.segment();
    let tol = case.tolerances();
    let (a, eta) = (seg.a(), seg.eta());
    let g = |t: f64| f.abs_derivative_pow(a + t * eta, q);
    let ga = f.abs_derivative_pow(a, q);
    let ge = f.abs_derivative_pow(seg.end(), q);
    let kinks: Vec<f64> = f.abs_derivative_kinks_in(a, seg.end()).iter().map(|k| (k - a) / eta).collect();

    let whole = integrate_with_breaks(g, 0.0, 1.0, &kinks, tol.quad_kinked)?;
    let mean_lhs = whole.value;
    let mean_rhs = 0.5 * (ga + ge);
    let mean_slack = mean_rhs - mean_lhs;
    let mut quad_err = whole.err_estimate;
    let mut holds = mean_slack >= -(whole.err_estimate + tol.ineq(mean_rhs));

    let mut worst_partial_slack = f64::INFINITY;
    let mut worst_partial_x = a;
    for &x in xs {
        seg.require(x)?;
        let s = seg.relative(x);
        let gx = f.abs_derivative_pow(x, q);
        let left = integrate_with_breaks(g, 0.0, s, &kinks, tol.quad_kinked)?;
        let right = integrate_with_breaks(g, s, 1.0, &kinks, tol.quad_kinked)?;
        let checks = [
            (s * 0.5 * (ga + gx), left),
            ((1.0 - s) * 0.5 * (ge + gx), right),
        ];
        for (bound, integral) in checks {
            let slack = bound - integral.value;
            quad_err = quad_err.max(integral.err_estimate);
            if slack < -(integral.err_estimate + tol.ineq(bound)) {
                holds = false;
            }
            if slack < worst_partial_slack {
                worst_partial_slack = slack;
                worst_partial_x = x;
            }
        }
    }
    Ok(IntegratedMeanReport {
        q,
        mean_lhs,
        mean_rhs,
        mean_slack,
        worst_partial_slack,
        worst_partial_x,
        quad_err,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eta::EtaMap;
    use crate::function::ScalarFn;

    #[test]
    fn subadditivity_examples() {
        let r = check_subadditivity(&[(1.0, 1.0)], 0.5).unwrap();
        assert!((r.lhs - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.rhs, 2.0);
        assert!(r.holds);

        let r = check_subadditivity(&[(1.0, 1.0)], 0.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 2.0));

        // a1 = 3|f'(a)|^q, b1 = |f'(b)|^q, a2 = 3|f'(b)|^q, b2 = |f'(a)|^q with unit slopes
        let r = check_subadditivity(&[(3.0, 1.0), (3.0, 1.0)], 0.5).unwrap();
        assert!((r.lhs - 4.0).abs() < 1e-15);
        assert!((r.rhs - 2.0 * (3f64.sqrt() + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn subadditivity_rejects_bad_input() {
        assert!(check_subadditivity(&[(1.0, 1.0)], 1.0).is_err());
        assert!(check_subadditivity(&[(1.0, 1.0)], -0.1).is_err());
        assert!(check_subadditivity(&[(-1.0, 1.0)], 0.5).is_err());
    }

    fn case(f: ScalarFn) -> BoundCase {
        let m = EtaMap::trivial();
        let report = crate::certify::check_condition_c(&m, &crate::certify::SamplingPlan::with_resolution(8, 5)).unwrap();
        BoundCase::from_endpoints(&f, &m, 0.0, 1.0).unwrap().with_condition_c(report)
    }

    #[test]
    fn integrated_mean_linear_derivative() {
        let c = case(ScalarFn::identity());
        let r = check_integrated_mean_bound(&c, 2.0, &c.segment().grid(5)).unwrap();
        assert!((r.mean_lhs - 1.0).abs() < 1e-14);
        assert_eq!(r.mean_rhs, 1.0);
        assert!(r.holds);
    }

    #[test]
    fn integrated_mean_square() {
        let c = case(ScalarFn::square());
        let r = check_integrated_mean_bound(&c, 2.0, &c.segment().grid(9)).unwrap();
        assert!((r.mean_lhs - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.mean_rhs, 2.0);
        assert!(r.holds);

        let r = check_integrated_mean_bound(&c, 1.0, &c.segment().grid(9)).unwrap();
        assert!(r.mean_slack.abs() <= 1e-9);
        assert!(r.holds);
    }

    #[test]
    fn integrated_mean_needs_condition_c() {
        let c = BoundCase::from_endpoints(&ScalarFn::square(), &EtaMap::trivial(), 0.0, 1.0).unwrap();
        assert!(matches!(
            check_integrated_mean_bound(&c, 2.0, &[0.5]),
            Err(Error::ConditionCUnchecked(_))
        ));
    }
}

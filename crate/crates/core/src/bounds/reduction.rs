//! Exact coincidences between the preinvex bounds specialised to
//! η(b, a) = b − a at the midpoint and the classical midpoint bounds.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{check_subadditivity, conjugate_exponent, BoundCase, BoundId, BoundParams};
use crate::certify::{check_condition_c, max_abs_derivative, SamplingPlan};
use crate::error::{Error, Result};
use crate::eta::EtaMap;
use crate::function::ScalarFn;

/// Agreement required between the specialised and the classical bound.
pub const REDUCTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Reduction {
    /// Preinvex bound at the midpoint equals Kirmaci's |f'|-convex bound.
    #[serde(rename = "THM22_MID_TO_1C")]
    PreinvexMidpoint,
    /// The same with |f'| ≤ M equals the Lipschitz midpoint bound.
    #[serde(rename = "THM22_MID_M_TO_1B")]
    PreinvexMidpointLipschitz,
    /// Power-mean bound at the midpoint with q = 1 equals Kirmaci's bound.
    #[serde(rename = "THM24_MID_Q1_TO_1C")]
    PowerMeanMidpointUnitExponent,
    /// Hölder midpoint bound equals Kirmaci's Hölder bound.
    #[serde(rename = "THM23_MID_TO_1D")]
    HolderMidpoint,
    /// Hölder midpoint bound relaxed by subadditivity equals Kirmaci's
    /// relaxed Hölder bound.
    #[serde(rename = "THM23_MID_SUBADD_TO_1E")]
    HolderMidpointSubadditive,
    /// Power-mean midpoint bound relaxed by subadditivity equals Kirmaci's
    /// power-mean bound.
    #[serde(rename = "THM24_MID_SUBADD_TO_1EE")]
    PowerMeanMidpointSubadditive,
}

impl Reduction {
    pub const ALL: [Reduction; 6] = [
        Reduction::PreinvexMidpoint,
        Reduction::PreinvexMidpointLipschitz,
        Reduction::PowerMeanMidpointUnitExponent,
        Reduction::HolderMidpoint,
        Reduction::HolderMidpointSubadditive,
        Reduction::PowerMeanMidpointSubadditive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Reduction::PreinvexMidpoint => "THM22_MID_TO_1C",
            Reduction::PreinvexMidpointLipschitz => "THM22_MID_M_TO_1B",
            Reduction::PowerMeanMidpointUnitExponent => "THM24_MID_Q1_TO_1C",
            Reduction::HolderMidpoint => "THM23_MID_TO_1D",
            Reduction::HolderMidpointSubadditive => "THM23_MID_SUBADD_TO_1E",
            Reduction::PowerMeanMidpointSubadditive => "THM24_MID_SUBADD_TO_1EE",
        }
    }

    fn exponents(self) -> &'static [f64] {
        match self {
            Reduction::PreinvexMidpoint
            | Reduction::PreinvexMidpointLipschitz
            | Reduction::PowerMeanMidpointUnitExponent => &[1.0],
            _ => &[1.5, 2.0, 3.0],
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Reduction::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionReport {
    pub reduction: Reduction,
    pub cases: usize,
    /// Largest |specialised rhs − classical rhs| over the fixtures.
    pub max_abs_diff: f64,
    /// For the subadditive reductions: every relaxation step was no
    /// smaller than the step before it.
    pub relaxation_dominates: bool,
    pub passed: bool,
}

fn fixtures() -> Vec<(ScalarFn, f64, f64)> {
    let fs = [
        ScalarFn::identity(),
        ScalarFn::square(),
        ScalarFn::cube(),
        ScalarFn::quartic_plus_linear(),
    ];
    let segs = [(0.0, 1.0), (1.0, 3.0)];
    fs.iter()
        .flat_map(|f| segs.iter().map(move |&(a, b)| (f.clone(), a, b)))
        .collect()
}

/// Checks one reduction over polynomial fixtures on [0, 1] and [1, 3].
pub fn verify_reduction(reduction: Reduction) -> Result<ReductionReport> {
    let map = EtaMap::trivial();
    let condition_c = check_condition_c(&map, &SamplingPlan::with_resolution(16, 9))?;
    let mut cases = 0;
    let mut max_abs_diff: f64 = 0.0;
    let mut relaxation_dominates = true;

    for (f, a, b) in fixtures() {
        let case = BoundCase::from_endpoints(&f, &map, a, b)?.with_condition_c(condition_c.clone());
        let tol = *case.tolerances();
        let len = b - a;
        let sa = f.abs_derivative(a);
        let sb = f.abs_derivative(b);
        for &q in reduction.exponents() {
            cases += 1;
            let (specialised, classical) = match reduction {
                Reduction::PreinvexMidpoint => (
                    case.preinvex(case.segment().midpoint())?.rhs,
                    case.classical(BoundId::KirmaciMidpoint, a, &BoundParams::default())?.rhs,
                ),
                Reduction::PreinvexMidpointLipschitz => {
                    let m = max_abs_derivative(&f, case.segment());
                    let (ca, cb) = super::preinvex_brackets(0.5);
                    (
                        len / 6.0 * (ca * m + cb * m),
                        case.classical(BoundId::LipschitzMidpoint, a, &BoundParams::with_m(m))?.rhs,
                    )
                }
                Reduction::PowerMeanMidpointUnitExponent => (
                    case.power_mean(case.segment().midpoint(), 1.0)?.rhs,
                    case.classical(BoundId::KirmaciMidpoint, a, &BoundParams::default())?.rhs,
                ),
                Reduction::HolderMidpoint => (
                    case.holder_midpoint(q)?.rhs,
                    case.classical(BoundId::KirmaciHolderMidpoint, a, &BoundParams::with_q(q))?.rhs,
                ),
                Reduction::HolderMidpointSubadditive => {
                    let tight = case.holder_midpoint(q)?.rhs;
                    let p = conjugate_exponent(q)?;
                    let scale = len / 16.0 * (4.0 / (p + 1.0)).powf(1.0 / p);
                    let pairs = [(3.0 * sa.powf(q), sb.powf(q)), (3.0 * sb.powf(q), sa.powf(q))];
                    let split = check_subadditivity(&pairs, 1.0 / q)?;
                    // Σ(a_k + b_k)^{1/q} and Σa_k^{1/q} + Σb_k^{1/q}, then 3^{1/q} ≤ 3
                    let subadditive = scale * split.rhs;
                    let relaxed = scale * 4.0 * (sa + sb);
                    relaxation_dominates &= split.holds
                        && (scale * split.lhs - tight).abs() <= tol.ineq(tight)
                        && subadditive >= tight - tol.ineq(tight)
                        && relaxed >= subadditive - tol.ineq(subadditive);
                    (
                        relaxed,
                        case.classical(BoundId::KirmaciHolderMidpointRelaxed, a, &BoundParams::with_q(q))?.rhs,
                    )
                }
                Reduction::PowerMeanMidpointSubadditive => {
                    let tight = case.power_mean(case.segment().midpoint(), q)?.rhs;
                    let scale = len / 8.0 * 3f64.powf(-1.0 / q);
                    let pairs = [(2.0 * sa.powf(q), sb.powf(q)), (sa.powf(q), 2.0 * sb.powf(q))];
                    let split = check_subadditivity(&pairs, 1.0 / q)?;
                    // then 2^{1/q} ≤ 2
                    let subadditive = scale * split.rhs;
                    let relaxed = scale * 3.0 * (sa + sb);
                    let midpoint_form = case.power_mean_midpoint(q)?.rhs;
                    relaxation_dominates &= split.holds
                        && (scale * split.lhs - tight).abs() <= tol.ineq(tight)
                        && subadditive >= tight - tol.ineq(tight)
                        && relaxed >= subadditive - tol.ineq(subadditive)
                        && (relaxed - midpoint_form).abs() <= REDUCTION_TOL;
                    (
                        relaxed,
                        case.classical(BoundId::KirmaciPowerMeanMidpoint, a, &BoundParams::with_q(q))?.rhs,
                    )
                }
            };
            max_abs_diff = max_abs_diff.max((specialised - classical).abs());
        }
    }
    Ok(ReductionReport {
        reduction,
        cases,
        max_abs_diff,
        relaxation_dominates,
        passed: max_abs_diff <= REDUCTION_TOL && relaxation_dominates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_reductions_pass() {
        for r in Reduction::ALL {
            let report = verify_reduction(r).unwrap();
            assert!(report.passed, "{report:?}");
        }
    }

    #[test]
    fn ids_round_trip() {
        for r in Reduction::ALL {
            assert_eq!(r.as_str().parse::<Reduction>().unwrap(), r);
        }
    }
}

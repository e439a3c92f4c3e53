//! Numerical tolerances shared by the certifiers, the quadrature layer and
//! the bound evaluators.

use serde::{Deserialize, Serialize};

/// Absolute tolerance for sampled identity and inequality checks.
pub const CERT: f64 = 1e-9;

/// Maximum disagreement between a closed-form derivative and its central
/// difference.
pub const FINITE_DIFFERENCE: f64 = 1e-5;

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-5;

/// Absolute part of the `holds` rule for evaluated bounds.
pub const INEQ_ABS: f64 = 1e-9;

/// Relative part (scaled by |rhs|) of the `holds` rule.
pub const INEQ_REL: f64 = 1e-9;

/// Default absolute quadrature tolerance for smooth integrands.
pub const QUAD: f64 = 1e-10;

/// Quadrature tolerance for integrands built from |f'|, which may have kinks.
pub const QUAD_KINKED: f64 = 1e-7;

/// Evaluation budget for adaptive quadrature.
pub const QUAD_BUDGET: usize = 1_000_000;

/// Offset applied to sample points that land on an excluded domain point.
pub const PERTURBATION: f64 = 1e-12;

/// Ratios are not formed when the bound is below this value.
pub const RHS_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub cert: f64,
    pub ineq_abs: f64,
    pub ineq_rel: f64,
    pub quad: f64,
    pub quad_kinked: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cert: CERT,
            ineq_abs: INEQ_ABS,
            ineq_rel: INEQ_REL,
            quad: QUAD,
            quad_kinked: QUAD_KINKED,
        }
    }
}

impl Tolerances {
    /// Allowed negative slack for a bound whose right-hand side is `rhs`.
    pub fn ineq(&self, rhs: f64) -> f64 {
        self.ineq_abs + self.ineq_rel * rhs.abs()
    }

    pub fn holds(&self, lhs: f64, rhs: f64) -> bool {
        rhs - lhs >= -self.ineq(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_negative_slack_still_holds() {
        let tol = Tolerances::default();
        assert!(tol.holds(1.0 + 1e-12, 1.0));
        assert!(!tol.holds(1.0 + 1e-6, 1.0));
    }
}

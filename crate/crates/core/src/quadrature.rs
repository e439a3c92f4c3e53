//! Adaptive Gauss-Kronrod (7/15) quadrature and the integral identity that
//! underlies every bound in this crate:
//!
//! ```text
//! f(x) − (1/η)∫_a^{a+η} f(u) du
//!     = η [ ∫_0^s t f'(a + tη) dt + ∫_s^1 (t − 1) f'(a + tη) dt ],  s = (x − a)/η
//! ```

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::ScalarFn;
use crate::segment::InvexSegment;
use crate::tolerances::QUAD_BUDGET;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const RULE_POINTS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    /// Absolute error estimate, never negative.
    pub err_estimate: f64,
    pub evals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    // Largest error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let sample = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { what: "integrand".into(), point: x, value: v })
        }
    };
    let fc = sample(center)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = sample(center - dx)? + sample(center + dx)?;
        k += WGK[j] * pair;
        if j % 2 == 1 {
            g += WG[j / 2] * pair;
        }
    }
    Ok((k * half, ((k - g) * half).abs()))
}

/// Integrates `f` over `[lo, hi]`, bisecting the piece with the largest
/// error estimate until the summed estimate is at most `tol` or the budget
/// of [`QUAD_BUDGET`] evaluations is spent.
pub fn integrate_with<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInput(format!("integration bounds [{lo}, {hi}] are not ordered")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let (value, err) = kronrod(&f, lo, hi)?;
    let mut evals = RULE_POINTS;
    if lo == hi {
        return Ok(QuadResult { value: 0.0, err_estimate: 0.0, evals });
    }
    let mut heap = BinaryHeap::new();
    let mut done = Vec::new();
    heap.push(Piece { lo, hi, value, err });
    let mut total_err = err;
    let min_width = (hi - lo) * 1e-13;

    while total_err > tol && evals + 2 * RULE_POINTS <= QUAD_BUDGET {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if worst.hi - worst.lo < min_width || mid <= worst.lo || mid >= worst.hi {
            // cannot refine further; keep it out of the queue
            done.push(worst);
            continue;
        }
        let (lv, le) = kronrod(&f, worst.lo, mid)?;
        let (rv, re) = kronrod(&f, mid, worst.hi)?;
        evals += 2 * RULE_POINTS;
        heap.push(Piece { lo: worst.lo, hi: mid, value: lv, err: le });
        heap.push(Piece { lo: mid, hi: worst.hi, value: rv, err: re });
        total_err += le + re - worst.err;
    }

    done.extend(heap);
    // Sum left to right so the result does not depend on heap layout.
    done.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value = done.iter().map(|p| p.value).sum();
    let err_estimate = done.iter().map(|p| p.err).sum::<f64>();
    let result = QuadResult { value, err_estimate, evals };
    if err_estimate > tol {
        return Err(Error::NoConvergence { best: result });
    }
    Ok(result)
}

/// Integrates over [lo, hi] split at `breaks`, giving each piece a share
/// of `tol` proportional to its length. Breaks outside (lo, hi) are ignored.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<QuadResult> {
    let mut edges = vec![lo];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&b| lo < b && b < hi).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    edges.extend(inner);
    edges.push(hi);
    if edges.len() == 2 {
        return integrate_with(f, lo, hi, tol);
    }
    let width = hi - lo;
    let mut total = QuadResult { value: 0.0, err_estimate: 0.0, evals: 0 };
    for w in edges.windows(2) {
        let piece_tol = tol * (w[1] - w[0]) / width;
        let r = integrate_with(&f, w[0], w[1], piece_tol.max(f64::MIN_POSITIVE))?;
        total.value += r.value;
        total.err_estimate += r.err_estimate;
        total.evals += r.evals;
    }
    Ok(total)
}

/// Integrates a [`ScalarFn`], split at its declared kinks.
pub fn integrate(f: &ScalarFn, lo: f64, hi: f64, tol: f64) -> Result<QuadResult> {
    integrate_with_breaks(|x| f.value(x), lo, hi, f.kinks(), tol)
}

/// (1/η(b, a)) ∫_a^{a+η(b, a)} f(u) du.
pub fn mean_value(f: &ScalarFn, seg: &InvexSegment, tol: f64) -> Result<f64> {
    let eta = seg.eta();
    Ok(integrate(f, seg.a(), seg.end(), tol * eta)?.value / eta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// Combined quadrature error estimate of both sides.
    pub err_estimate: f64,
}

/// Evaluates both sides of the identity at `x`. The kernel has a kink at
/// t = (x − a)/η, so the right-hand integrals are split there.
pub fn identity_residual(
    f: &ScalarFn,
    seg: &InvexSegment,
    x: f64,
    tol: f64,
) -> Result<IdentityResidual> {
    seg.require(x)?;
    let (a, eta) = (seg.a(), seg.eta());
    let s = seg.relative(x);
    let mean = integrate(f, a, seg.end(), tol * eta)?;
    let lhs = f.value(x) - mean.value / eta;

    let kinks: Vec<f64> = f.kinks_in(a, seg.end()).iter().map(|k| (k - a) / eta).collect();
    let left = integrate_with_breaks(|t| t * f.derivative(a + t * eta), 0.0, s, &kinks, tol)?;
    let right = integrate_with_breaks(|t| (t - 1.0) * f.derivative(a + t * eta), s, 1.0, &kinks, tol)?;
    let rhs = eta * (left.value + right.value);
    Ok(IdentityResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        err_estimate: mean.err_estimate / eta + eta * (left.err_estimate + right.err_estimate),
    })
}

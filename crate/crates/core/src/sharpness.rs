//! Worst-case search for lhs/rhs ratios: grid sweeps over x (and q), and
//! a best-constant estimate for the preinvex bound over a family of
//! functions, refined by golden-section search.

use serde::Serialize;

use crate::bounds::{BoundCase, BoundId, BoundParams};
use crate::certify::SamplingPlan;
use crate::domain::linspace;
use crate::error::{Error, Result};
use crate::eta::EtaMap;
use crate::function::ScalarFn;
use crate::segment::InvexSegment;

/// Default number of x-points in a sweep.
pub const SWEEP_POINTS: usize = 129;
/// Grid maxima that get a golden-section refinement.
pub const REFINED_MAXIMA: usize = 3;
/// Members whose maximal ratio is within this of the overall maximum are
/// reported as attaining it.
pub const ATTAIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSample {
    pub x: f64,
    pub q: Option<f64>,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSurface {
    pub bound_id: BoundId,
    pub samples: Vec<RatioSample>,
    /// Grid points where rhs fell below the floor.
    pub excluded: Vec<(f64, Option<f64>)>,
    pub max_ratio: f64,
    pub argmax: RatioSample,
}

fn ratio_at(case: &BoundCase, id: BoundId, x: f64, params: &BoundParams) -> Result<Option<f64>> {
    Ok(case.evaluate(id, x, params)?.ratio())
}

/// Ratios lhs/rhs of `id` over `x_grid` × `q_grid`. Bounds without an
/// exponent ignore `q_grid`; midpoint-only bounds are evaluated once per q.
pub fn ratio_sweep(
    case: &BoundCase,
    id: BoundId,
    x_grid: &[f64],
    q_grid: &[f64],
    m: Option<f64>,
) -> Result<RatioSurface> {
    let qs: Vec<Option<f64>> =
        if id.uses_exponent() { q_grid.iter().copied().map(Some).collect() } else { vec![None] };
    if qs.is_empty() || x_grid.is_empty() {
        return Err(Error::InvalidInput("ratio sweep needs a non-empty grid".into()));
    }
    let xs: Vec<f64> = if id.is_midpoint_only() { vec![case.segment().midpoint()] } else { x_grid.to_vec() };
    let mut samples = Vec::new();
    let mut excluded = Vec::new();
    for &q in &qs {
        let params = BoundParams { q, m };
        for &x in &xs {
            match ratio_at(case, id, x, &params)? {
                Some(ratio) => samples.push(RatioSample { x, q, ratio }),
                None => excluded.push((x, q)),
            }
        }
    }
    let argmax = *samples
        .iter()
        .reduce(|best, s| if s.ratio > best.ratio { s } else { best })
        .ok_or(Error::AllExcluded)?;
    Ok(RatioSurface { bound_id: id, samples, excluded, max_ratio: argmax.ratio, argmax })
}

/// Maximises `g` on [lo, hi] by golden-section search. Returns (x, g(x)).
pub fn golden_section_max<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    let candidates = [(lo, g(lo)), (hi, g(hi)), (c, gc), (d, gd)];
    candidates.into_iter().fold((lo, f64::NEG_INFINITY), |best, (x, v)| if v > best.1 { (x, v) } else { best })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantEstimate {
    /// (1/6)·max ratio: the smallest constant that would still make the
    /// preinvex bound hold on the family at the sampled points.
    pub constant: f64,
    pub max_ratio: f64,
    pub argmax_function: String,
    pub argmax_x: f64,
    /// Per member: label and maximal ratio, or None if every point was
    /// excluded.
    pub member_maxima: Vec<(String, Option<f64>)>,
    /// Members whose maximal ratio is within [`ATTAIN_TOL`] of the maximum.
    pub attaining: Vec<String>,
}

/// Maximal ratio of the preinvex bound for one function: grid sweep, then
/// golden-section refinement around the largest grid values.
fn member_max(case: &BoundCase, x_grid: &[f64]) -> Result<Option<(f64, f64)>> {
    let surface = match ratio_sweep(case, BoundId::Preinvex, x_grid, &[], None) {
        Ok(s) => s,
        Err(Error::AllExcluded) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut best = (surface.argmax.x, surface.max_ratio);
    let mut order: Vec<usize> = (0..surface.samples.len()).collect();
    order.sort_by(|&i, &j| surface.samples[j].ratio.total_cmp(&surface.samples[i].ratio));
    let params = BoundParams::default();
    let g = |x: f64| ratio_at(case, BoundId::Preinvex, x, &params).ok().flatten().unwrap_or(f64::NEG_INFINITY);
    for &i in order.iter().take(REFINED_MAXIMA) {
        let x = surface.samples[i].x;
        let pos = x_grid.iter().position(|&g| g == x).unwrap_or(0);
        let lo = x_grid[pos.saturating_sub(1)];
        let hi = x_grid[(pos + 1).min(x_grid.len() - 1)];
        let (xr, r) = golden_section_max(g, lo, hi, 1e-12, 200);
        if r > best.1 {
            best = (xr, r);
        }
    }
    Ok(Some(best))
}

/// Estimates the best constant in the preinvex bound over `family` on the
/// segment, using `x_points` grid points. Every member's |f'| must be
/// certified preinvex.
pub fn best_constant_estimate(
    map: &EtaMap,
    seg: &InvexSegment,
    family: &[ScalarFn],
    x_points: usize,
) -> Result<ConstantEstimate> {
    if family.is_empty() {
        return Err(Error::InvalidInput("best constant estimate needs a non-empty family".into()));
    }
    if x_points < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 x-points, got {x_points}")));
    }
    let x_grid = linspace(seg.a().min(seg.end()), seg.a().max(seg.end()), x_points);
    let mut member_maxima = Vec::with_capacity(family.len());
    let mut overall: Option<(String, f64, f64)> = None;
    for f in family {
        let case = BoundCase::with_tolerances(f, map, *seg, Default::default(), SamplingPlan::default())?;
        let cert = case.derivative_certificate(1.0)?;
        if cert.is_refuted() {
            return Err(Error::NotPreinvex { target: format!("|{}'|", f.label()), witness: cert.witness });
        }
        let found = member_max(&case, &x_grid)?;
        if let Some((x, r)) = found {
            if overall.as_ref().is_none_or(|(_, _, best)| r > *best) {
                overall = Some((f.label().to_string(), x, r));
            }
        }
        member_maxima.push((f.label().to_string(), found.map(|(_, r)| r)));
    }
    let (argmax_function, argmax_x, max_ratio) = overall.ok_or(Error::AllExcluded)?;
    let attaining = member_maxima
        .iter()
        .filter(|(_, r)| r.is_some_and(|r| r >= max_ratio - ATTAIN_TOL))
        .map(|(l, _)| l.clone())
        .collect();
    Ok(ConstantEstimate {
        constant: max_ratio / 6.0,
        max_ratio,
        argmax_function,
        argmax_x,
        member_maxima,
        attaining,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(f: ScalarFn) -> BoundCase {
        BoundCase::from_endpoints(&f, &EtaMap::trivial(), 0.0, 1.0).unwrap()
    }

    #[test]
    fn identity_sweep_peaks_at_both_ends() {
        let case = unit(ScalarFn::identity());
        let s = ratio_sweep(&case, BoundId::Preinvex, &linspace(0.0, 1.0, SWEEP_POINTS), &[], None).unwrap();
        assert!((s.max_ratio - 1.0).abs() < 1e-12);
        let first = s.samples.first().unwrap();
        let last = s.samples.last().unwrap();
        assert!((first.ratio - 1.0).abs() < 1e-12);
        assert!((first.ratio - last.ratio).abs() < 1e-12);
        assert!(s.excluded.is_empty());
    }

    #[test]
    fn constant_is_all_excluded() {
        let case = unit(ScalarFn::constant(4.0));
        let r = ratio_sweep(&case, BoundId::Preinvex, &linspace(0.0, 1.0, 5), &[], None);
        assert_eq!(r.unwrap_err(), Error::AllExcluded);
        let seg = *case.segment();
        let r = best_constant_estimate(&EtaMap::trivial(), &seg, &[ScalarFn::constant(1.0)], 9);
        assert_eq!(r.unwrap_err(), Error::AllExcluded);
    }

    #[test]
    fn square_midpoint_ratio() {
        let case = unit(ScalarFn::square());
        let s = ratio_sweep(&case, BoundId::Preinvex, &[0.5], &[], None).unwrap();
        assert!((s.samples[0].ratio - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn exponent_grid_is_swept() {
        let case = unit(ScalarFn::square());
        let s = ratio_sweep(&case, BoundId::PowerMean, &linspace(0.0, 1.0, 5), &[1.0, 2.0, 3.0], None).unwrap();
        assert_eq!(s.samples.len() + s.excluded.len(), 15);
        assert!(s.samples.iter().all(|p| p.ratio <= 1.0 + 1e-9));
    }

    #[test]
    fn golden_section_finds_interior_max() {
        let (x, v) = golden_section_max(|x| -(x - 0.3).powi(2), 0.0, 1.0, 1e-12, 200);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v <= 0.0 && v > -1e-12);
        let (x, _) = golden_section_max(|x| x, 0.0, 1.0, 1e-12, 200);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn identity_family_gives_one_sixth() {
        let map = EtaMap::trivial();
        let seg = InvexSegment::new(&map, 0.0, 1.0).unwrap();
        let e = best_constant_estimate(&map, &seg, &[ScalarFn::identity()], SWEEP_POINTS).unwrap();
        assert!((e.constant - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(e.attaining, vec!["identity".to_string()]);
    }

    #[test]
    fn superset_does_not_decrease_estimate() {
        let map = EtaMap::trivial();
        let seg = InvexSegment::new(&map, 0.0, 1.0).unwrap();
        let small = best_constant_estimate(&map, &seg, &[ScalarFn::cube()], 33).unwrap();
        let big = best_constant_estimate(&map, &seg, &[ScalarFn::cube(), ScalarFn::identity()], 33).unwrap();
        assert!(big.constant >= small.constant);
    }

    #[test]
    fn refuses_non_preinvex_member() {
        let map = EtaMap::trivial();
        let seg = InvexSegment::new(&map, -1.0, 1.0).unwrap();
        let r = best_constant_estimate(&map, &seg, &[ScalarFn::tent()], 9);
        assert!(matches!(r, Err(Error::NotPreinvex { .. })));
    }
}

//! One-dimensional domains: finite unions of intervals with optional
//! excluded points, e.g. `(-5, 0) ∪ (0, 5)` or `ℝ \ {0}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::tolerances::PERTURBATION;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    /// Distance from `x` to the closure of the interval.
    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

/// A sample point produced by [`DomainDescriptor::sample`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub value: f64,
    /// The nominal grid point was not in the domain and was nudged.
    pub perturbed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainDescriptor {
    intervals: Vec<Interval>,
    excluded: Vec<f64>,
}

impl DomainDescriptor {
    /// Intervals must be sorted, non-empty and pairwise disjoint; every
    /// excluded point must lie inside one of them.
    pub fn new(intervals: Vec<Interval>, mut excluded: Vec<f64>) -> Result<Self> {
        for iv in &intervals {
            if iv.lo.is_nan() || iv.hi.is_nan() || iv.lo > iv.hi {
                return Err(Error::InvalidDomain(format!("malformed interval {iv}")));
            }
            if iv.lo == iv.hi && !(iv.lo_closed && iv.hi_closed) {
                return Err(Error::InvalidDomain(format!("empty interval {iv}")));
            }
        }
        for pair in intervals.windows(2) {
            let (left, right) = (pair[0], pair[1]);
            let touching = left.hi == right.lo && left.hi_closed && right.lo_closed;
            if left.hi > right.lo || touching {
                return Err(Error::InvalidDomain(format!(
                    "intervals {left} and {right} overlap or are out of order"
                )));
            }
        }
        excluded.sort_by(f64::total_cmp);
        excluded.dedup();
        for &p in &excluded {
            if !intervals.iter().any(|iv| iv.contains(p)) {
                return Err(Error::InvalidDomain(format!(
                    "excluded point {p} is not inside any interval"
                )));
            }
        }
        Ok(Self { intervals, excluded })
    }

    pub fn real_line() -> Self {
        Self {
            intervals: vec![Interval::open(f64::NEG_INFINITY, f64::INFINITY)],
            excluded: Vec::new(),
        }
    }

    pub fn nonzero_reals() -> Self {
        Self {
            intervals: vec![Interval::open(f64::NEG_INFINITY, f64::INFINITY)],
            excluded: vec![0.0],
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![Interval::closed(lo, hi)], Vec::new())
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![Interval::open(lo, hi)], Vec::new())
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn excluded(&self) -> &[f64] {
        &self.excluded
    }

    pub fn is_excluded(&self, x: f64) -> bool {
        self.excluded.contains(&x)
    }

    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && !self.is_excluded(x) && self.intervals.iter().any(|iv| iv.contains(x))
    }

    /// Distance from `x` to the closure of the domain; zero for boundary and
    /// excluded points.
    pub fn distance(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::INFINITY;
        }
        self.intervals
            .iter()
            .map(|iv| iv.distance(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Moves a point that sits on an excluded point or an open boundary by
    /// `+PERTURBATION` (or inward, for an open upper end). Returns `None`
    /// when the point is genuinely outside.
    pub fn admit(&self, x: f64) -> Option<SamplePoint> {
        if self.contains(x) {
            return Some(SamplePoint { value: x, perturbed: false });
        }
        if self.distance(x) > 0.0 {
            return None;
        }
        let step = PERTURBATION * x.abs().max(1.0);
        [x + step, x - step]
            .into_iter()
            .find(|&c| self.contains(c))
            .map(|value| SamplePoint { value, perturbed: true })
    }

    /// Grid over the part of the domain inside `window`. Points are spread
    /// over the pieces in proportion to their length (at least three per
    /// piece); grid points that fall outside the domain proper are admitted
    /// with a perturbation.
    pub fn sample(&self, points: usize, window: (f64, f64)) -> Result<Vec<SamplePoint>> {
        let pieces: Vec<(f64, f64)> = self
            .intervals
            .iter()
            .filter_map(|iv| {
                let lo = iv.lo.max(window.0);
                let hi = iv.hi.min(window.1);
                (lo < hi && lo.is_finite() && hi.is_finite()).then_some((lo, hi))
            })
            .collect();
        if pieces.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let total: f64 = pieces.iter().map(|(lo, hi)| hi - lo).sum();
        let mut out = Vec::with_capacity(points + 3 * pieces.len());
        for (lo, hi) in pieces {
            let share = ((points as f64) * (hi - lo) / total).round() as usize;
            let n = share.max(3);
            for x in linspace(lo, hi, n) {
                if let Some(p) = self.admit(x) {
                    out.push(p);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyDomain);
        }
        Ok(out)
    }
}

impl fmt::Display for DomainDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.intervals.iter().map(|iv| iv.to_string()).collect();
        write!(f, "{}", parts.join(" ∪ "))?;
        if !self.excluded.is_empty() {
            let ex: Vec<String> = self.excluded.iter().map(|p| p.to_string()).collect();
            write!(f, " \\ {{{}}}", ex.join(", "))?;
        }
        Ok(())
    }
}

/// `n` evenly spaced points from `lo` to `hi`, both endpoints included
/// exactly.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_overlapping_intervals() {
        let r = DomainDescriptor::new(
            vec![Interval::closed(0.0, 2.0), Interval::closed(1.0, 3.0)],
            vec![],
        );
        assert!(matches!(r, Err(Error::InvalidDomain(_))));
    }

    #[test]
    fn rejects_excluded_point_outside() {
        let r = DomainDescriptor::new(vec![Interval::closed(0.0, 1.0)], vec![2.0]);
        assert!(matches!(r, Err(Error::InvalidDomain(_))));
    }

    #[test]
    fn nonzero_reals_membership() {
        let d = DomainDescriptor::nonzero_reals();
        assert!(d.contains(-1.0));
        assert!(!d.contains(0.0));
        assert_eq!(d.distance(0.0), 0.0);
        let p = d.admit(0.0).unwrap();
        assert!(p.perturbed);
        assert_eq!(p.value, PERTURBATION);
    }

    #[test]
    fn sample_nudges_open_ends_inward() {
        let d = DomainDescriptor::new(
            vec![Interval::open(-5.0, 0.0), Interval::open(0.0, 5.0)],
            vec![],
        )
        .unwrap();
        let pts = d.sample(64, (-10.0, 10.0)).unwrap();
        assert!(pts.len() >= 64);
        assert!(pts.iter().all(|p| d.contains(p.value)));
        assert!(pts.iter().any(|p| p.perturbed));
    }

    #[test]
    fn sample_outside_window_is_empty() {
        let d = DomainDescriptor::closed(0.0, 1.0).unwrap();
        assert_eq!(d.sample(10, (2.0, 3.0)), Err(Error::EmptyDomain));
    }

    #[test]
    fn linspace_hits_endpoints() {
        let g = linspace(0.1, 0.7, 7);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[6], 0.7);
    }
}

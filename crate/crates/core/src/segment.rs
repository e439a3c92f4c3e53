use crate::domain::linspace;
use crate::error::{Error, Result};
use crate::eta::EtaMap;

/// Number of `t` values used to confirm that `a + t·η(b, a)` stays in the
/// domain when a segment is built.
const MEMBERSHIP_CHECKS: usize = 33;

/// The pair (a, b) together with the interval `[a, a + η(b, a)]` it induces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvexSegment {
    a: f64,
    b: f64,
    eta_ab: f64,
}

impl InvexSegment {
    pub fn new(map: &EtaMap, a: f64, b: f64) -> Result<Self> {
        let eta_ab = map.eval(b, a)?;
        if !(eta_ab > 0.0) {
            return Err(Error::DegenerateSegment { a, b, eta: eta_ab });
        }
        let seg = Self { a, b, eta_ab };
        for t in linspace(0.0, 1.0, MEMBERSHIP_CHECKS) {
            let point = seg.point(t);
            if !map.domain().contains(point) {
                return Err(Error::SegmentLeavesDomain {
                    map: map.label().to_string(),
                    point,
                    t,
                });
            }
        }
        Ok(seg)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// η(b, a), always positive.
    pub fn eta(&self) -> f64 {
        self.eta_ab
    }

    /// a + η(b, a).
    pub fn end(&self) -> f64 {
        self.a + self.eta_ab
    }

    pub fn midpoint(&self) -> f64 {
        self.a + 0.5 * self.eta_ab
    }

    pub fn point(&self, t: f64) -> f64 {
        if t == 1.0 {
            self.end()
        } else {
            self.a + t * self.eta_ab
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.end()
    }

    pub fn require(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideSegment { x, lo: self.a, hi: self.end() })
        }
    }

    /// (x − a)/η(b, a), clamped to [0, 1].
    pub fn relative(&self, x: f64) -> f64 {
        ((x - self.a) / self.eta_ab).clamp(0.0, 1.0)
    }

    /// Smallest interval containing a, b and a + η(b, a).
    pub fn hull(&self) -> (f64, f64) {
        let lo = self.a.min(self.b).min(self.end());
        let hi = self.a.max(self.b).max(self.end());
        (lo, hi)
    }

    /// `n` evenly spaced evaluation points from a to a + η(b, a).
    pub fn grid(&self, n: usize) -> Vec<f64> {
        linspace(self.a, self.end(), n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_segment() {
        let s = InvexSegment::new(&EtaMap::trivial(), 0.0, 1.0).unwrap();
        assert_eq!(s.eta(), 1.0);
        assert_eq!(s.end(), 1.0);
        assert_eq!(s.midpoint(), 0.5);
    }

    #[test]
    fn rejects_degenerate_and_reversed() {
        let m = EtaMap::trivial();
        assert!(matches!(InvexSegment::new(&m, 1.0, 1.0), Err(Error::DegenerateSegment { .. })));
        assert!(matches!(InvexSegment::new(&m, 2.0, 1.0), Err(Error::DegenerateSegment { .. })));
    }

    #[test]
    fn rejects_segment_through_excluded_point() {
        // eta(1, -2) = 2 on the nonzero map, so the segment ends at 0.
        let r = InvexSegment::new(&EtaMap::nonzero_reals(), -2.0, 1.0);
        assert!(matches!(r, Err(Error::SegmentLeavesDomain { .. })));
    }

    #[test]
    fn sign_split_segment_can_point_away_from_b() {
        let s = InvexSegment::new(&EtaMap::sign_split(), 3.0, -2.0).unwrap();
        assert_eq!(s.eta(), 5.0);
        assert_eq!(s.hull(), (-2.0, 8.0));
    }

    #[test]
    fn outside_segment_is_rejected() {
        let s = InvexSegment::new(&EtaMap::trivial(), 0.0, 1.0).unwrap();
        assert!(matches!(s.require(1.5), Err(Error::OutsideSegment { .. })));
    }
}

use preinvex_core::certify::{check_condition_c, max_abs_derivative};
use preinvex_core::sharpness::{best_constant_estimate, ratio_sweep};
use preinvex_core::{BoundCase, BoundId, BoundParams, EtaMap, Error, InvexSegment, SamplingPlan, ScalarFn};

const FIXTURES: [fn() -> ScalarFn; 5] =
    [ScalarFn::identity, ScalarFn::square, ScalarFn::cube, ScalarFn::quartic_plus_linear, ScalarFn::exp];

/// Every bound, on every fixture whose hypotheses hold, keeps lhs/rhs ≤ 1.
#[test]
fn no_certified_fixture_exceeds_its_bound() {
    let plan = SamplingPlan::with_resolution(16, 9);
    let setups = [(EtaMap::trivial(), 0.0, 1.0), (EtaMap::trivial(), 1.0, 3.0), (EtaMap::nonzero_reals(), 1.0, 3.0)];
    let mut checked = 0;
    for (map, a, b) in &setups {
        let cond = check_condition_c(map, &plan).unwrap();
        let seg = InvexSegment::new(map, *a, *b).unwrap();
        for make in FIXTURES {
            let f = make();
            let case = BoundCase::new(&f, map, seg).unwrap().with_condition_c(cond.clone());
            let m = max_abs_derivative(&f, &seg);
            for id in BoundId::ALL {
                if id.is_classical() && !map.is_trivial() {
                    continue;
                }
                for q in [1.0, 1.5, 2.0, 4.0] {
                    let params = BoundParams { q: Some(q), m: Some(m) };
                    let r = match case.evaluate(id, a + 0.3 * (b - a), &params) {
                        Ok(r) => r,
                        Err(Error::InvalidExponent { .. }) => continue,
                        Err(e) => panic!("{id} {} {}: {e}", f.label(), map.label()),
                    };
                    assert!(r.holds, "{id} {} {} q={q}: {r:?}", f.label(), map.label());
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 300);
}

#[test]
fn surfaces_stay_below_one() {
    let map = EtaMap::trivial();
    for make in FIXTURES {
        let f = make();
        let case = BoundCase::from_endpoints(&f, &map, 0.5, 2.0).unwrap();
        let xs = case.segment().grid(65);
        for id in [BoundId::Preinvex, BoundId::PowerMean] {
            let s = ratio_sweep(&case, id, &xs, &[1.0, 2.0, 3.0], None).unwrap();
            assert!(s.max_ratio <= 1.0 + 1e-9, "{id} {}: {}", f.label(), s.max_ratio);
            assert!(s.samples.iter().all(|p| p.ratio >= 0.0));
        }
    }
}

#[test]
fn ratio_symmetric_at_segment_ends_for_identity() {
    let case = BoundCase::from_endpoints(&ScalarFn::identity(), &EtaMap::trivial(), -1.0, 4.0).unwrap();
    let s = ratio_sweep(&case, BoundId::Preinvex, &[-1.0, 4.0], &[], None).unwrap();
    assert!((s.samples[0].ratio - s.samples[1].ratio).abs() <= 1e-12);
}

#[test]
fn family_superset_is_monotone() {
    let map = EtaMap::trivial();
    let seg = InvexSegment::new(&map, 0.5, 2.5).unwrap();
    let fam: Vec<ScalarFn> = FIXTURES.iter().map(|m| m()).collect();
    let mut prev = 0.0;
    for k in 1..=fam.len() {
        let e = best_constant_estimate(&map, &seg, &fam[..k], 33).unwrap();
        assert!(e.constant >= prev);
        prev = e.constant;
    }
}

use preinvex_core::certify::{check_condition_c, check_invex_set, check_preinvex, PreinvexTarget};
use preinvex_core::{EtaMap, InvexSegment, SamplingPlan, ScalarFn, Verdict};
use proptest::prelude::*;

#[test]
fn builtin_maps() {
    let plan = SamplingPlan::with_resolution(24, 9);
    for map in [EtaMap::trivial(), EtaMap::sign_split(), EtaMap::nonzero_reals()] {
        assert!(check_invex_set(&map, &plan).unwrap().is_certified(), "{}", map.label());
    }
    assert!(check_condition_c(&EtaMap::trivial(), &plan).unwrap().is_certified());
    assert!(check_condition_c(&EtaMap::nonzero_reals(), &plan).unwrap().is_certified());
    let r = check_condition_c(&EtaMap::sign_split(), &plan).unwrap();
    assert!(r.is_refuted() && r.witness.is_some());
    let r = check_condition_c(&EtaMap::scaled(2.0), &plan).unwrap();
    assert!(r.is_refuted());
    let w = r.witness.unwrap();
    assert!(w.x != w.y);
}

#[test]
fn preinvexity_examples() {
    let plan = SamplingPlan::default();
    let split = EtaMap::sign_split();
    let seg = InvexSegment::new(&split, 3.0, -2.0).unwrap();
    let r = check_preinvex(PreinvexTarget::Value(&ScalarFn::neg_abs()), &split, &seg, &plan).unwrap();
    assert_eq!(r.verdict, Verdict::Certified);

    let trivial = EtaMap::trivial();
    let seg = InvexSegment::new(&trivial, -1.0, 1.0).unwrap();
    let f = ScalarFn::square().scaled(-1.0);
    let r = check_preinvex(PreinvexTarget::Value(&f), &trivial, &seg, &plan).unwrap();
    assert!(r.is_refuted());
    let w = r.witness.unwrap();
    let z = w.x + w.t * (w.y - w.x);
    assert!(f.value(z) > (1.0 - w.t) * f.value(w.x) + w.t * f.value(w.y));
}

/// Convexity of c2 x² + c3 x³ on [lo, hi] from the sign of f'' = 2c2 + 6c3 x,
/// which is affine. Returns (min f'', length of the set where f'' < 0).
fn curvature(c2: f64, c3: f64, lo: f64, hi: f64) -> (f64, f64) {
    let d = |x: f64| 2.0 * c2 + 6.0 * c3 * x;
    let min = d(lo).min(d(hi));
    if min >= 0.0 {
        return (min, 0.0);
    }
    let neg = if c3 == 0.0 {
        hi - lo
    } else {
        let root = -c2 / (3.0 * c3);
        if d(lo) < 0.0 { (root.min(hi) - lo).max(0.0) } else { (hi - root.max(lo)).max(0.0) }
    };
    (min, neg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trivial_map_agrees_with_curvature(c2 in -2.0f64..2.0, c3 in -1.0f64..1.0, lo in -2.0f64..2.0, len in 0.5f64..3.0) {
        let hi = lo + len;
        let (min, neg) = curvature(c2, c3, lo, hi);
        prop_assume!(min >= 0.0 || (min < -0.5 && neg > len / 4.0));
        let f = ScalarFn::polynomial(&[0.0, 0.0, c2, c3]);
        let map = EtaMap::trivial();
        let seg = InvexSegment::new(&map, lo, hi).unwrap();
        let r = check_preinvex(PreinvexTarget::Value(&f), &map, &seg, &SamplingPlan::with_resolution(24, 9)).unwrap();
        prop_assert_eq!(r.is_certified(), min >= 0.0, "{:?}", r);
        prop_assert_eq!(r.is_refuted(), min < 0.0);
    }

    #[test]
    fn refinement_never_lowers_worst_violation(c2 in -2.0f64..2.0, c3 in -1.0f64..1.0, lo in -2.0f64..2.0, len in 0.5f64..3.0, n in 3usize..10) {
        let f = ScalarFn::polynomial(&[0.0, 1.0, c2, c3]);
        let map = EtaMap::trivial();
        let seg = InvexSegment::new(&map, lo, lo + len).unwrap();
        let coarse = check_preinvex(PreinvexTarget::Value(&f), &map, &seg, &SamplingPlan::with_resolution(n, n)).unwrap();
        let fine = check_preinvex(PreinvexTarget::Value(&f), &map, &seg, &SamplingPlan::with_resolution(2 * n - 1, 2 * n - 1)).unwrap();
        prop_assert!(fine.worst_violation >= coarse.worst_violation);
        prop_assert!(fine.samples_used >= coarse.samples_used);
    }
}

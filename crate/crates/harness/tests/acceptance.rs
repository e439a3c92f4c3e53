//! One PASS/FAIL line per acceptance criterion, at the pinned tolerances.
//!
//! Criterion 3b is known to fail: x^2 on [0, 1] meets the preinvex bound
//! with equality at x = b as well, because |f'| is affine there and the
//! bound is exact for affine |f'|. The check is kept as specified and its
//! expected failure is asserted so that any change in behaviour shows up.

use preinvex_harness::suite::{acceptance_checks, DEFAULT_SEED};

const KNOWN_FAILURES: &[&str] = &["3b"];

#[test]
fn acceptance() {
    let checks = acceptance_checks(DEFAULT_SEED);
    for c in &checks {
        println!("{c}");
    }
    let ids: Vec<&str> = checks.iter().map(|c| c.id).collect();
    assert_eq!(ids, ["1", "2", "3a", "3b", "4", "5", "6", "7", "8a", "8b", "8c", "9"]);

    let unexpected: Vec<String> =
        checks.iter().filter(|c| !c.passed && !KNOWN_FAILURES.contains(&c.id)).map(ToString::to_string).collect();
    assert!(unexpected.is_empty(), "failing criteria:\n{}", unexpected.join("\n"));

    let sharp = checks.iter().find(|c| c.id == "3b").unwrap();
    if !sharp.passed {
        assert!(sharp.detail.contains("\"identity\", \"square\""), "{}", sharp.detail);
    }
}

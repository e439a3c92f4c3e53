//! Built-in functions and η-maps addressable by label.

use crate::error::{Error, Result};
use crate::eta::EtaMap;
use crate::function::ScalarFn;

pub const FUNCTION_LABELS: &[&str] = &[
    "identity",
    "square",
    "cube",
    "quartic_plus_linear",
    "exp",
    "neg_abs",
    "tent",
];

pub const ETA_LABELS: &[&str] = &["trivial", "sign_split", "nonzero_reals"];

pub fn function(label: &str) -> Result<ScalarFn> {
    Ok(match label {
        "identity" => ScalarFn::identity(),
        "square" => ScalarFn::square(),
        "cube" => ScalarFn::cube(),
        "quartic_plus_linear" => ScalarFn::quartic_plus_linear(),
        "exp" => ScalarFn::exp(),
        "neg_abs" => ScalarFn::neg_abs(),
        "tent" => ScalarFn::tent(),
        other => return Err(Error::UnknownLabel(other.to_string())),
    })
}

pub fn eta_map(label: &str) -> Result<EtaMap> {
    Ok(match label {
        "trivial" => EtaMap::trivial(),
        "sign_split" => EtaMap::sign_split(),
        "nonzero_reals" => EtaMap::nonzero_reals(),
        other => return Err(Error::UnknownLabel(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_label_resolves() {
        for l in FUNCTION_LABELS {
            assert_eq!(function(l).unwrap().label(), *l);
        }
        for l in ETA_LABELS {
            assert_eq!(eta_map(l).unwrap().label(), *l);
        }
    }

    #[test]
    fn unknown_label() {
        assert_eq!(function("nope").unwrap_err(), Error::UnknownLabel("nope".into()));
        assert!(eta_map("nope").is_err());
    }

    #[test]
    fn closed_form_derivatives_match_central_differences() {
        let h = crate::tolerances::FD_STEP;
        for l in FUNCTION_LABELS {
            let f = function(l).unwrap();
            for i in 1..64 {
                let x = -3.0 + 6.0 * i as f64 / 64.0;
                // skip the kink of neg_abs / tent
                if x.abs() < 2.0 * h {
                    continue;
                }
                let diff = (f.derivative(x) - f.central_difference(x, h)).abs();
                assert!(diff <= crate::tolerances::FINITE_DIFFERENCE, "{l} at {x}: {diff}");
            }
        }
    }
}

//! Classical bounds on an ordinary interval [a, b]: Ostrowski's inequality,
//! the Lipschitz midpoint bound and Kirmaci's midpoint bounds.

use super::{conjugate_exponent, BoundCase, BoundId, BoundParams, BoundReport};
use crate::error::{Error, Result};
use crate::eta::EtaMap;
use crate::function::ScalarFn;

/// Right-hand side of a classical bound, given |f'(a)| and |f'(b)|.
#[allow(clippy::too_many_arguments)]
pub(super) fn rhs(
    id: BoundId,
    a: f64,
    b: f64,
    x: f64,
    sa: f64,
    sb: f64,
    q: Option<f64>,
    m: Option<f64>,
) -> Result<f64> {
    let len = b - a;
    let need_q = || q.ok_or(Error::MissingExponent(id));
    let need_m = || m.ok_or(Error::MissingDerivativeBound(id));
    Ok(match id {
        BoundId::Ostrowski => {
            let m = need_m()?;
            m / len * (((x - a).powi(2) + (b - x).powi(2)) / 2.0)
        }
        BoundId::LipschitzMidpoint => need_m()? * len / 4.0,
        BoundId::KirmaciMidpoint => len / 8.0 * (sa + sb),
        BoundId::KirmaciHolderMidpoint => {
            let q = need_q()?;
            let p = conjugate_exponent(q)?;
            let first = (3.0 * sa.powf(q) + sb.powf(q)).powf(1.0 / q);
            let second = (3.0 * sb.powf(q) + sa.powf(q)).powf(1.0 / q);
            len / 16.0 * (4.0 / (p + 1.0)).powf(1.0 / p) * (first + second)
        }
        BoundId::KirmaciHolderMidpointRelaxed => {
            let p = conjugate_exponent(need_q()?)?;
            len / 4.0 * (4.0 / (p + 1.0)).powf(1.0 / p) * (sa + sb)
        }
        BoundId::KirmaciPowerMeanMidpoint => {
            let q = need_q()?;
            3f64.powf(1.0 - 1.0 / q) / 8.0 * len * (sa + sb)
        }
        other => return Err(Error::InvalidInput(format!("{other} is not a classical bound"))),
    })
}

/// Evaluates a classical bound for `f` on [a, b]. Midpoint bounds ignore
/// `x`.
pub fn classical_bound(
    f: &ScalarFn,
    a: f64,
    b: f64,
    x: f64,
    id: BoundId,
    params: &BoundParams,
) -> Result<BoundReport> {
    BoundCase::from_endpoints(f, &EtaMap::trivial(), a, b)?.classical(id, x, params)
}

use thiserror::Error;

use crate::bounds::BoundId;
use crate::certify::Witness;
use crate::quadrature::QuadResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point} lies outside the domain of eta map `{map}`")]
    OutsideDomain { map: String, point: f64 },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("sampling region is empty")]
    EmptyDomain,

    #[error("degenerate segment: eta(b, a) = {eta} for a = {a}, b = {b} (need eta(b, a) > 0)")]
    DegenerateSegment { a: f64, b: f64, eta: f64 },

    #[error("segment point {point} (t = {t}) leaves the domain of `{map}`")]
    SegmentLeavesDomain { map: String, point: f64, t: f64 },

    #[error("evaluation point {x} lies outside [{lo}, {hi}]")]
    OutsideSegment { x: f64, lo: f64, hi: f64 },

    #[error("non-finite value {value} from `{what}` at {point}")]
    NonFinite { what: String, point: f64, value: f64 },

    #[error("invalid exponent q = {q}: {reason}")]
    InvalidExponent { q: f64, reason: &'static str },

    #[error("condition C refuted for `{map}` (witness {witness:?})")]
    ConditionCRefuted { map: String, witness: Option<Witness> },

    #[error("condition C has not been certified for `{0}`")]
    ConditionCUnchecked(String),

    #[error("`{target}` is not preinvex on the segment (witness {witness:?})")]
    NotPreinvex { target: String, witness: Option<Witness> },

    #[error("|f'({point})| = {value} exceeds M = {bound}")]
    DerivativeExceedsBound { point: f64, value: f64, bound: f64 },

    #[error("{0} requires a derivative bound M")]
    MissingDerivativeBound(BoundId),

    #[error("{0} requires an exponent q")]
    MissingExponent(BoundId),

    #[error("`{function}` is not differentiable at {point}, inside the segment")]
    NotDifferentiable { function: String, point: f64 },

    #[error("{0} is only defined for eta(b, a) = b - a")]
    RequiresTrivialEta(BoundId),

    #[error(
        "quadrature did not converge: best value {}, error estimate {} after {} evaluations",
        best.value, best.err_estimate, best.evals
    )]
    NoConvergence { best: QuadResult },

    #[error("every sample was excluded (rhs vanishes)")]
    AllExcluded,

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

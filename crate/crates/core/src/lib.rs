//! Ostrowski-type inequalities for functions whose derivative is preinvex
//! with respect to an η-map.
//!
//! The crate covers four layers:
//!
//! - [`domain`], [`eta`], [`segment`], [`function`]: one-dimensional invex
//!   sets, η-maps, segments `[a, a + η(b, a)]` and differentiable functions.
//! - [`certify`]: sampling-based certification of invexity, condition C and
//!   preinvexity, with concrete witnesses on refutation.
//! - [`quadrature`] and [`bounds`]: adaptive Gauss-Kronrod integration,
//!   the integral identity behind the bounds, and every bound evaluated
//!   against the numerically computed left-hand side.
//! - [`sharpness`]: worst-case ratio search and best-constant estimates.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod certify;
pub mod domain;
pub mod error;
pub mod eta;
pub mod function;
pub mod quadrature;
pub mod registry;
pub mod segment;
pub mod sharpness;
pub mod tolerances;

pub use bounds::{BoundCase, BoundId, BoundParams, BoundReport};
pub use certify::{CertReport, SamplingPlan, Verdict, Witness};
pub use domain::DomainDescriptor;
pub use error::{Error, Result};
pub use eta::EtaMap;
pub use function::ScalarFn;
pub use segment::InvexSegment;
pub use tolerances::Tolerances;

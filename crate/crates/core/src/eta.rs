//! η-maps: the bifunctions that generate invex geometry on a domain.

use std::fmt;
use std::sync::Arc;

use crate::domain::DomainDescriptor;
use crate::error::{Error, Result};

type Bifunction = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct EtaMap {
    label: String,
    domain: DomainDescriptor,
    eval: Bifunction,
    trivial: bool,
}

impl EtaMap {
    pub fn new(
        label: impl Into<String>,
        domain: DomainDescriptor,
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { label: label.into(), domain, eval: Arc::new(eval), trivial: false }
    }

    /// η(x, y) = x − y on the whole real line.
    pub fn trivial() -> Self {
        Self {
            label: "trivial".into(),
            domain: DomainDescriptor::real_line(),
            eval: Arc::new(|x, y| x - y),
            trivial: true,
        }
    }

    /// η(x, y) = x − y when xy ≥ 0 and y − x otherwise, on ℝ.
    pub fn sign_split() -> Self {
        Self::new("sign_split", DomainDescriptor::real_line(), |x, y| {
            if x * y >= 0.0 {
                x - y
            } else {
                y - x
            }
        })
    }

    /// On ℝ \ {0}: η(x, y) = x − y when x and y share a sign, −y otherwise.
    pub fn nonzero_reals() -> Self {
        Self::new("nonzero_reals", DomainDescriptor::nonzero_reals(), |x, y| {
            if (x > 0.0 && y > 0.0) || (x < 0.0 && y < 0.0) {
                x - y
            } else {
                -y
            }
        })
    }

    /// η(x, y) = factor · (x − y) on ℝ.
    pub fn scaled(factor: f64) -> Self {
        Self::new(format!("scaled({factor})"), DomainDescriptor::real_line(), move |x, y| {
            factor * (x - y)
        })
    }

    /// Same η on a different domain.
    pub fn with_domain(mut self, domain: DomainDescriptor) -> Self {
        self.domain = domain;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &DomainDescriptor {
        &self.domain
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        for p in [x, y] {
            if !self.domain.contains(p) {
                return Err(Error::OutsideDomain { map: self.label.clone(), point: p });
            }
        }
        let v = (self.eval)(x, y);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                what: format!("eta `{}`", self.label),
                point: x,
                value: v,
            });
        }
        Ok(v)
    }

    /// Evaluates without the domain check; callers guarantee membership.
    pub(crate) fn raw(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }
}

impl fmt::Debug for EtaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EtaMap")
            .field("label", &self.label)
            .field("domain", &self.domain.to_string())
            .field("trivial", &self.trivial)
            .finish()
    }
}

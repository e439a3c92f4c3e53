//! Scalar test functions with closed-form or finite-difference derivatives.

use std::fmt;
use std::sync::Arc;

type Unary = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Derivative {
    ClosedForm(Unary),
    FiniteDifference { step: f64 },
}

#[derive(Clone)]
pub struct ScalarFn {
    label: String,
    f: Unary,
    derivative: Derivative,
    /// Points where f' is discontinuous or not differentiable.
    kinks: Arc<[f64]>,
    /// Points where f itself is not differentiable; also listed in `kinks`.
    corners: Arc<[f64]>,
}

impl ScalarFn {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            f: Arc::new(f),
            derivative: Derivative::ClosedForm(Arc::new(df)),
            kinks: Arc::new([]),
            corners: Arc::new([]),
        }
    }

    /// Declares the points where f' is discontinuous or not differentiable,
    /// so that integrals can be split there.
    pub fn with_kinks(mut self, kinks: &[f64]) -> Self {
        let mut k = kinks.to_vec();
        k.sort_by(f64::total_cmp);
        k.dedup();
        self.kinks = k.into();
        self
    }

    /// Declares points where f is not differentiable. They are kinks too.
    pub fn with_corners(mut self, corners: &[f64]) -> Self {
        let mut c = corners.to_vec();
        c.sort_by(f64::total_cmp);
        c.dedup();
        let mut k: Vec<f64> = self.kinks.iter().copied().chain(c.iter().copied()).collect();
        k.sort_by(f64::total_cmp);
        k.dedup();
        self.kinks = k.into();
        self.corners = c.into();
        self
    }

    pub fn corners(&self) -> &[f64] {
        &self.corners
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    /// Declared kinks strictly inside (lo, hi).
    pub fn kinks_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.kinks.iter().copied().filter(|&k| lo < k && k < hi).collect()
    }

    /// Points in (lo, hi) where f' changes sign, located on a 1025-point
    /// grid and refined by bisection. |f'| has a kink at each of them.
    pub fn derivative_sign_changes(&self, lo: f64, hi: f64) -> Vec<f64> {
        let grid = crate::domain::linspace(lo, hi, 1025);
        let d: Vec<f64> = grid.iter().map(|&x| self.derivative(x)).collect();
        let mut out = Vec::new();
        for i in 0..grid.len() - 1 {
            if d[i] == 0.0 && i > 0 && d[i - 1] * d[i + 1] < 0.0 {
                out.push(grid[i]);
            }
            if d[i] * d[i + 1] >= 0.0 {
                continue;
            }
            let (mut l, mut r) = (grid[i], grid[i + 1]);
            for _ in 0..100 {
                let m = 0.5 * (l + r);
                if m <= l || m >= r {
                    break;
                }
                if self.derivative(m) * d[i] > 0.0 {
                    l = m;
                } else {
                    r = m;
                }
            }
            out.push(0.5 * (l + r));
        }
        out
    }

    /// Kinks of |f'| in (lo, hi): declared kinks and sign changes of f'.
    pub fn abs_derivative_kinks_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut k = self.kinks_in(lo, hi);
        k.extend(self.derivative_sign_changes(lo, hi));
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// Derivative by central differences with step `step`.
    pub fn with_finite_difference(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        step: f64,
    ) -> Self {
        assert!(step > 0.0, "finite-difference step must be positive");
        Self {
            label: label.into(),
            f: Arc::new(f),
            derivative: Derivative::FiniteDifference { step },
            kinks: Arc::new([]),
            corners: Arc::new([]),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn derivative_kind(&self) -> &Derivative {
        &self.derivative
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match &self.derivative {
            Derivative::ClosedForm(df) => df(x),
            Derivative::FiniteDifference { step } => self.central_difference(x, *step),
        }
    }

    pub fn abs_derivative(&self, x: f64) -> f64 {
        self.derivative(x).abs()
    }

    /// |f'(x)|^q, taking the absolute value before the power.
    pub fn abs_derivative_pow(&self, x: f64, q: f64) -> f64 {
        self.abs_derivative(x).powf(q)
    }

    pub fn central_difference(&self, x: f64, h: f64) -> f64 {
        (self.value(x + h) - self.value(x - h)) / (2.0 * h)
    }

    /// c · f, with derivative c · f'.
    pub fn scaled(&self, c: f64) -> Self {
        let f = Arc::clone(&self.f);
        let derivative = match &self.derivative {
            Derivative::ClosedForm(df) => {
                let df = Arc::clone(df);
                Derivative::ClosedForm(Arc::new(move |x| c * df(x)))
            }
            Derivative::FiniteDifference { step } => Derivative::FiniteDifference { step: *step },
        };
        Self {
            label: format!("{c}*{}", self.label),
            f: Arc::new(move |x| c * f(x)),
            derivative,
            kinks: Arc::clone(&self.kinks),
            corners: Arc::clone(&self.corners),
        }
    }

    /// Σ coeffs[k] · x^k, evaluated by Horner's rule.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        let label = format!(
            "poly({})",
            coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
        );
        let c: Arc<[f64]> = coeffs.into();
        let dc: Arc<[f64]> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &ck)| k as f64 * ck)
            .collect::<Vec<_>>()
            .into();
        Self::new(label, move |x| horner(&c, x), move |x| horner(&dc, x))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("constant({c})"), move |_| c, |_| 0.0)
    }

    pub fn identity() -> Self {
        Self::new("identity", |x| x, |_| 1.0)
    }

    pub fn square() -> Self {
        Self::new("square", |x| x * x, |x| 2.0 * x)
    }

    pub fn cube() -> Self {
        Self::new("cube", |x| x * x * x, |x| 3.0 * x * x)
    }

    /// x⁴ + x.
    pub fn quartic_plus_linear() -> Self {
        Self::new("quartic_plus_linear", |x| x.powi(4) + x, |x| 4.0 * x.powi(3) + 1.0)
    }

    pub fn exp() -> Self {
        Self::new("exp", f64::exp, f64::exp)
    }

    /// −|x|; the derivative at 0 is taken as 0.
    pub fn neg_abs() -> Self {
        Self::new("neg_abs", |x: f64| -x.abs(), |x: f64| if x == 0.0 { 0.0 } else { -x.signum() })
            .with_corners(&[0.0])
    }

    /// 10x − x|x|/2, whose derivative is 10 − |x|.
    pub fn tent() -> Self {
        Self::new("tent", |x: f64| 10.0 * x - 0.5 * x * x.abs(), |x: f64| 10.0 - x.abs()).with_kinks(&[0.0])
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.derivative {
            Derivative::ClosedForm(_) => "closed-form".to_string(),
            Derivative::FiniteDifference { step } => format!("finite-difference(h={step})"),
        };
        f.debug_struct("ScalarFn").field("label", &self.label).field("derivative", &kind).finish()
    }
}

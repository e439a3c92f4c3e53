use std::fmt;
use std::path::{Path, PathBuf};

use preinvex_core::{registry, BoundId, EtaMap, ScalarFn, Tolerances};
use serde::{Deserialize, Serialize};

use crate::{HarnessError, Result};

/// A registry label or a polynomial given by its coefficients
/// (constant term first).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Label(String),
    Poly { poly: Vec<f64> },
}

impl FunctionSpec {
    pub fn resolve(&self) -> Result<ScalarFn> {
        match self {
            FunctionSpec::Label(l) => registry::function(l).map_err(|e| HarnessError::Config(e.to_string())),
            FunctionSpec::Poly { poly } => {
                if poly.is_empty() || poly.iter().any(|c| !c.is_finite()) {
                    return Err(HarnessError::Config(format!("polynomial {poly:?} needs finite coefficients")));
                }
                Ok(ScalarFn::polynomial(poly))
            }
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Label(l) => f.write_str(l),
            FunctionSpec::Poly { poly } => write!(f, "{poly:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_resolution() -> usize {
    129
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub functions: Vec<FunctionSpec>,
    pub eta_maps: Vec<String>,
    pub segments: Vec<[f64; 2]>,
    #[serde(default)]
    pub bounds: Vec<BoundId>,
    #[serde(default)]
    pub q_values: Vec<f64>,
    #[serde(default = "default_resolution")]
    pub x_resolution: usize,
    /// Derivative bound for the M-bounds; when absent, the largest |f'| on
    /// a fine grid of each segment is used.
    #[serde(default)]
    pub m: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    /// Checks everything that can be checked without numerical work.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        self.resolve_functions()?;
        self.resolve_maps()?;
        if self.x_resolution < 3 {
            return bad(format!("x_resolution must be at least 3, got {}", self.x_resolution));
        }
        for &[a, b] in &self.segments {
            if !a.is_finite() || !b.is_finite() {
                return bad(format!("segment ({a}, {b}) is not finite"));
            }
        }
        for &q in &self.q_values {
            if !(q.is_finite() && q >= 1.0) {
                return bad(format!("q values must be finite and >= 1, got {q}"));
            }
        }
        if let Some(m) = self.m {
            if !(m.is_finite() && m > 0.0) {
                return bad(format!("m must be positive, got {m}"));
            }
        }
        if self.q_values.is_empty() {
            if let Some(id) = self.bounds.iter().find(|id| id.uses_exponent()) {
                return bad(format!("bound {id} needs at least one q value"));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [("cert", t.cert), ("ineq_abs", t.ineq_abs), ("ineq_rel", t.ineq_rel), ("quad", t.quad), ("quad_kinked", t.quad_kinked)] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("tolerance {name} must be finite and non-negative, got {v}"));
            }
        }
        if !(t.quad > 0.0 && t.quad_kinked > 0.0) {
            return bad("quadrature tolerances must be positive".into());
        }
        Ok(())
    }

    pub fn resolve_functions(&self) -> Result<Vec<ScalarFn>> {
        self.functions.iter().map(FunctionSpec::resolve).collect()
    }

    pub fn resolve_maps(&self) -> Result<Vec<EtaMap>> {
        self.eta_maps
            .iter()
            .map(|l| registry::eta_map(l).map_err(|e| HarnessError::Config(e.to_string())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
functions = ["square"]
eta_maps = ["trivial"]
segments = [[0, 1]]
bounds = ["THM22_21"]
x_resolution = 3
"#;

    #[test]
    fn parses_minimal() {
        let c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.bounds, vec![BoundId::Preinvex]);
        assert_eq!(c.segments, vec![[0.0, 1.0]]);
        assert_eq!(c.tolerances, Tolerances::default());
        assert!(c.output.is_none());
    }

    #[test]
    fn polynomial_and_output() {
        let c = ExperimentConfig::from_toml(
            r#"
functions = ["identity", { poly = [0, 1, 3] }]
eta_maps = ["trivial", "nonzero_reals"]
segments = [[1, 3]]
bounds = ["THM24", "KIRMACI_1EE"]
q_values = [1, 2.5]
tolerances = { ineq_abs = 1e-8 }
output = { path = "out.json", format = "json" }
"#,
        )
        .unwrap();
        assert_eq!(c.functions[1], FunctionSpec::Poly { poly: vec![0.0, 1.0, 3.0] });
        assert_eq!(c.resolve_functions().unwrap()[1].value(2.0), 14.0);
        assert_eq!(c.tolerances.ineq_abs, 1e-8);
        assert_eq!(c.tolerances.quad, Tolerances::default().quad);
        assert_eq!(c.output.unwrap().format, OutputFormat::Json);
        assert_eq!(c.x_resolution, 129);
    }

    #[test]
    fn rejects_bad_configs() {
        let cases = [
            MINIMAL.replace("square", "sqaure"),
            MINIMAL.replace("\"trivial\"", "\"nope\""),
            MINIMAL.replace("THM22_21", "THM99"),
            MINIMAL.replace("x_resolution = 3", "x_resolution = 2"),
            MINIMAL.replace("THM22_21", "THM24"),
            format!("{MINIMAL}q_values = [0.5]\n"),
            format!("{MINIMAL}unknown_key = 1\n"),
            format!("{MINIMAL}m = -1\n"),
        ];
        for text in cases {
            assert!(matches!(ExperimentConfig::from_toml(&text), Err(HarnessError::Config(_))), "{text}");
        }
    }
}

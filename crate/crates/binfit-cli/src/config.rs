//! TOML configuration for tolerance/grid overrides and bench generators.

use std::path::Path;

use binfit::bench::{GenFamily, GeneratorSpec};
use binfit::FitConfig;
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub max_iterations: Option<u32>,
    pub param_tol: Option<f64>,
    pub loglik_tol: Option<f64>,
    pub restarts: Option<u32>,
    pub pn_grid: Option<Vec<u32>>,
    pub pl_grid: Option<Vec<u32>>,
    /// Placement of the unbounded top bin in the midpoint estimator.
    pub top_bin_factor: Option<f64>,
    pub generator: Option<GeneratorConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub family: String,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub shape: Option<f64>,
    pub scale: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub p: Option<f64>,
    pub units: Option<u32>,
    pub size_min: Option<u32>,
    pub size_max: Option<u32>,
    pub rounding: Option<bool>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }

    pub fn apply(&self, base: &FitConfig) -> FitConfig {
        FitConfig {
            max_iterations: self.max_iterations.unwrap_or(base.max_iterations),
            param_tol: self.param_tol.unwrap_or(base.param_tol),
            loglik_tol: self.loglik_tol.unwrap_or(base.loglik_tol),
            restarts: self.restarts.unwrap_or(base.restarts),
            seed: base.seed,
            pn_grid: self.pn_grid.clone().or_else(|| base.pn_grid.clone()),
            pl_grid: self.pl_grid.clone().or_else(|| base.pl_grid.clone()),
        }
    }
}

/// Reference parameter sets used when a bench family is named without a
/// config file; they land squarely on the default census bin scheme.
pub fn default_family(name: &str) -> Result<GenFamily, String> {
    match name.to_ascii_lowercase().as_str() {
        "lognormal" => Ok(GenFamily::Lognormal { mu: 10.8, sigma: 0.7 }),
        "gamma" => Ok(GenFamily::Gamma { shape: 2.5, scale: 20_000.0 }),
        "weibull" => Ok(GenFamily::Weibull { shape: 1.4, scale: 55_000.0 }),
        "dagum" => Ok(GenFamily::Dagum { a: 3.5, b: 45_000.0, p: 1.1 }),
        other => Err(format!("unknown generating family '{other}'")),
    }
}

impl GeneratorConfig {
    pub fn to_spec(&self, fallback_seed: u64) -> Result<GeneratorSpec, String> {
        let base = default_family(&self.family)?;
        let family = match base {
            GenFamily::Lognormal { mu, sigma } => GenFamily::Lognormal {
                mu: self.mu.unwrap_or(mu),
                sigma: self.sigma.unwrap_or(sigma),
            },
            GenFamily::Gamma { shape, scale } => GenFamily::Gamma {
                shape: self.shape.unwrap_or(shape),
                scale: self.scale.unwrap_or(scale),
            },
            GenFamily::Weibull { shape, scale } => GenFamily::Weibull {
                shape: self.shape.unwrap_or(shape),
                scale: self.scale.unwrap_or(scale),
            },
            GenFamily::Dagum { a, b, p } => GenFamily::Dagum {
                a: self.a.unwrap_or(a),
                b: self.b.unwrap_or(b),
                p: self.p.unwrap_or(p),
            },
        };
        let mut spec = GeneratorSpec::new(
            family,
            self.units.unwrap_or(100),
            (self.size_min.unwrap_or(40), self.size_max.unwrap_or(2000)),
            self.seed.unwrap_or(fallback_seed),
        );
        spec.apply_census_rounding = self.rounding.unwrap_or(true);
        Ok(spec)
    }
}

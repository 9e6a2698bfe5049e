//! Run configuration: tolerances, truncation defaults, budgets and output
//! format. Loaded from a JSON file; missing fields take their defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sp4::special::QuadratureSpec;

use crate::Failure;

/// Environment variable naming the config file when `--config` is absent.
pub const CONFIG_ENV: &str = "SP4_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Absolute and relative tolerance of every 1-d quadrature.
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    /// Points per axis of the tensor rule used for the long element.
    pub tensor_points: usize,
    /// Height bound and grid used when a command does not give them.
    pub height_bound: i64,
    pub grid: usize,
    /// Cap on v1²·v12² tuples per Ramanujan sum.
    pub ramanujan_budget: u64,
    /// Cap on coset representatives per series evaluation.
    pub max_terms: u64,
    /// Distance to a ζ pole below which closed forms refuse to evaluate.
    pub pole_eps: f64,
    /// Step of the symmetric residue estimate.
    pub residue_eps: f64,
    pub format: Format,
    pub fixture_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            quad_abs_tol: 1e-12,
            quad_rel_tol: 1e-9,
            tensor_points: 40,
            height_bound: 10,
            grid: 16,
            ramanujan_budget: sp4::ramanujan::DEFAULT_BUDGET,
            max_terms: 2_000_000_000,
            pole_eps: 1e-9,
            residue_eps: 1e-5,
            format: Format::Json,
            fixture_dir: PathBuf::from("fixtures"),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Failure> {
        let tols = [self.quad_abs_tol, self.quad_rel_tol, self.pole_eps, self.residue_eps];
        if tols.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Failure::invalid("all tolerances must be positive"));
        }
        if self.tensor_points < 1
            || self.height_bound < 1
            || self.grid < 1
            || self.ramanujan_budget < 1
            || self.max_terms < 1
        {
            return Err(Failure::invalid("budgets and sizes must be at least 1"));
        }
        if self.residue_eps >= 0.1 {
            return Err(Failure::invalid("residue_eps must be below 0.1"));
        }
        Ok(())
    }

    pub fn quad(&self) -> QuadratureSpec {
        QuadratureSpec {
            tensor_points: self.tensor_points,
            ..QuadratureSpec::with_tol(self.quad_abs_tol, self.quad_rel_tol)
        }
    }

    pub fn from_file(path: &Path) -> Result<RunConfig, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::invalid(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Failure::invalid(format!("bad config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// `--config` wins over the environment variable; with neither the
    /// defaults apply.
    pub fn load(flag: Option<&Path>) -> Result<RunConfig, Failure> {
        let env = std::env::var_os(CONFIG_ENV).filter(|s| !s.is_empty()).map(PathBuf::from);
        match flag.map(Path::to_path_buf).or(env) {
            Some(p) => RunConfig::from_file(&p),
            None => Ok(RunConfig::default()),
        }
    }
}

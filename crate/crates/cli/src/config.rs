//! Layered settings: flags, then `QDECOMP_*` environment variables, then a TOML file, then defaults.

use std::path::Path;

use qdecomp::compiler::Policy;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Table,
    Qasm,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub qpu_total: usize,
    pub policy: Policy,
    pub tolerance: f64,
    pub output_format: OutputFormat,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            qpu_total: 16,
            policy: Policy::Auto,
            tolerance: 1e-9,
            output_format: OutputFormat::Json,
        }
    }
}

/// Every field optional; one instance per layer.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Partial {
    pub qpu_total: Option<usize>,
    pub policy: Option<Policy>,
    pub tolerance: Option<f64>,
    pub output_format: Option<OutputFormat>,
}

impl Partial {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Reads `QDECOMP_QPU`, `QDECOMP_POLICY` and `QDECOMP_TOL` through `get`.
    pub fn from_env(get: impl Fn(&str) -> Option<String>) -> Result<Self, CliError> {
        let mut p = Partial::default();
        if let Some(v) = get("QDECOMP_QPU") {
            p.qpu_total =
                Some(v.trim().parse().map_err(|_| {
                    CliError::Usage(format!("QDECOMP_QPU={v:?} is not an integer"))
                })?);
        }
        if let Some(v) = get("QDECOMP_POLICY") {
            p.policy =
                Some(Policy::parse(v.trim()).ok_or_else(|| {
                    CliError::Usage(format!("QDECOMP_POLICY={v:?} is not a policy"))
                })?);
        }
        if let Some(v) = get("QDECOMP_TOL") {
            p.tolerance = Some(
                v.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("QDECOMP_TOL={v:?} is not a number")))?,
            );
        }
        Ok(p)
    }

    /// Fields set in `self` win over `lower`.
    pub fn over(self, lower: Partial) -> Partial {
        Partial {
            qpu_total: self.qpu_total.or(lower.qpu_total),
            policy: self.policy.or(lower.policy),
            tolerance: self.tolerance.or(lower.tolerance),
            output_format: self.output_format.or(lower.output_format),
        }
    }

    pub fn resolve(self) -> Result<CliConfig, CliError> {
        let d = CliConfig::default();
        let c = CliConfig {
            qpu_total: self.qpu_total.unwrap_or(d.qpu_total),
            policy: self.policy.unwrap_or(d.policy),
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            output_format: self.output_format.unwrap_or(d.output_format),
        };
        if c.qpu_total == 0 {
            return Err(CliError::Usage("qpu_total must be at least 1".into()));
        }
        if c.tolerance.is_nan() || c.tolerance <= 0.0 {
            return Err(CliError::Usage("tolerance must be positive".into()));
        }
        Ok(c)
    }
}

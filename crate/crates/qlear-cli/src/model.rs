//! Self-contained model files: everything `predict` needs, as JSON.

use std::path::Path;

use serde::{Deserialize, Serialize};

use qlear::{ClassPool, ParamGrid, QlearParams, StandardizationStats};

use crate::error::CliError;

/// Format revision this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

/// A fitted classifier on disk: chosen parameters, the representative
/// pools, optional feature standardization, and a record of how it was fit.
///
/// Predicting from a model file needs no access to the training data.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: u32,
    pub params: QlearParams,
    pub pools: Vec<ClassPool>,
    pub preprocessing: Option<StandardizationStats>,
    pub meta: ModelMeta,
}

/// How the model was produced. `created_unix` is the only field expected
/// to differ between two runs with identical inputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelMeta {
    pub seed: u64,
    pub pool_fraction: f64,
    pub grid: ParamGrid,
    pub cv_error: f64,
    pub created_unix: Option<u64>,
    pub source: String,
}

impl ModelFile {
    /// Feature dimension the model expects.
    pub fn dim(&self) -> usize {
        self.pools[0].dim()
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        text.push('\n');
        std::fs::write(path, text).map_err(|source| CliError::File {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::File {
            path: path.to_path_buf(),
            source,
        })?;
        let model: Self = serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })?;
        let invalid = |message: String| CliError::Invalid {
            path: path.to_path_buf(),
            message,
        };
        if model.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!(
                "unsupported schema_version {} (this build reads {SCHEMA_VERSION})",
                model.schema_version
            )));
        }
        if model.pools.is_empty() {
            return Err(invalid("model contains no class pools".into()));
        }
        let dim = model.pools[0].dim();
        if model.pools.iter().any(|p| p.dim() != dim) {
            return Err(invalid("class pools disagree on feature dimension".into()));
        }
        if let Some(stats) = &model.preprocessing {
            if stats.dim() != dim {
                return Err(invalid(format!(
                    "preprocessing dimension {} does not match pool dimension {dim}",
                    stats.dim()
                )));
            }
        }
        Ok(model)
    }
}

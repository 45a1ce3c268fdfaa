//! Parameter selection by cross-validation, persisted as a model file.

use std::path::Path;

use qlear::{load_csv, sample_pools, two_fold_cv, CsvOptions};

use crate::error::CliError;
use crate::model::{ModelFile, ModelMeta, SCHEMA_VERSION};

use super::{csv_writer, load_grid, with_context};

pub fn run(
    data_path: &Path,
    pool_fraction: f64,
    seed: u64,
    grid_path: Option<&Path>,
    standardize: bool,
    out: &Path,
) -> Result<(), CliError> {
    if !pool_fraction.is_finite() || pool_fraction <= 0.0 || pool_fraction > 0.5 {
        return Err(CliError::Usage(format!(
            "--pool-fraction must lie in (0, 0.5], got {pool_fraction}"
        )));
    }
    let grid = load_grid(grid_path)?;
    let raw = load_csv(data_path, &CsvOptions::default()).map_err(with_context(format!(
        "failed to read {}",
        data_path.display()
    )))?;
    let (dataset, stats) = if standardize {
        let (standardized, stats) = raw.standardize()?;
        (standardized, Some(stats))
    } else {
        (raw, None)
    };
    let (pools, _) = sample_pools(&dataset, pool_fraction, seed)?;
    let result = two_fold_cv(&pools, &grid, seed)?;

    // The full cross-validation table, in canonical grid order, to stdout.
    let mut writer = csv_writer(None)?;
    writer.write_record([
        "q",
        "n_s",
        "n_ns",
        "alpha",
        "misclassified",
        "total",
        "cv_error",
    ])?;
    for point in result.table() {
        let params = point.params();
        writer.write_record([
            params.q().to_string(),
            params.n_s().to_string(),
            params.n_ns().to_string(),
            params.alpha().to_string(),
            point.misclassified().to_string(),
            point.total().to_string(),
            point.cv_error().to_string(),
        ])?;
    }
    writer.flush().map_err(csv::Error::from)?;

    let best = *result.best();
    let model = ModelFile {
        schema_version: SCHEMA_VERSION,
        params: best,
        pools,
        preprocessing: stats,
        meta: ModelMeta {
            seed,
            pool_fraction,
            grid,
            cv_error: result.cv_error(),
            created_unix: unix_now(),
            source: file_name(data_path),
        },
    };
    model.save(out)?;

    let point = result.best_point();
    eprintln!(
        "fit: best q={}, n_s={}, n_ns={}, alpha={} with cross-validation error {}/{} ({:.2}%)",
        best.q(),
        best.n_s(),
        best.n_ns(),
        best.alpha(),
        point.misclassified(),
        point.total(),
        100.0 * point.cv_error()
    );
    eprintln!("fit: wrote model to {}", out.display());
    Ok(())
}

fn unix_now() -> Option<u64> {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .ok()
        .map(|elapsed| elapsed.as_secs())
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|name| name.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

//! Cross-validated holdout error for a list of datasets over several seeds.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qlear::{evaluate, load_csv, sample_pools, two_fold_cv, CsvOptions, ParamGrid};

use crate::error::CliError;

use super::{csv_writer, file_stem, load_grid, with_context};

/// Previously reported error rates (in percent) for well-known benchmark
/// datasets, matched against the dataset's file name. Shown for
/// comparison only; they are not pass/fail targets.
const REFERENCE_ERROR_PCT: &[(&str, &str)] = &[
    ("appendix", "0"),
    ("australian", "0"),
    ("banana", "3.2"),
    ("contraceptive", "9.7"),
    ("german", "0"),
    ("glass", "2.8"),
    ("iris", "0"),
    ("parkinson", "0.003"),
    ("pima", "0"),
    ("wine", "0"),
];

const HEADER: [&str; 13] = [
    "dataset",
    "seed",
    "pool_size",
    "q",
    "n_s",
    "n_ns",
    "alpha",
    "cv_error_pct",
    "holdout_error_pct",
    "spread_pct",
    "reference_error_pct",
    "runtime_ms",
    "status",
];

pub fn run(data: &[PathBuf], seeds: u64, grid_path: Option<&Path>) -> Result<(), CliError> {
    if seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    let grid = load_grid(grid_path)?;
    let mut writer = csv_writer(None)?;
    writer.write_record(HEADER)?;
    for path in data {
        // One bad dataset must not abort the batch: its row is marked
        // failed and the remaining datasets still run.
        if let Err(err) = bench_dataset(path, seeds, &grid, &mut writer) {
            let name = file_stem(path);
            let mut record = vec![name.clone()];
            record.extend(std::iter::repeat_n(String::new(), 9));
            record.push(reference_for(&name).unwrap_or("").to_string());
            record.push(String::new());
            record.push(format!("failed: {err}"));
            writer.write_record(&record)?;
            eprintln!("benchmark: {name}: failed: {err}");
        }
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn bench_dataset(
    path: &Path,
    seeds: u64,
    grid: &ParamGrid,
    writer: &mut csv::Writer<Box<dyn Write>>,
) -> Result<(), CliError> {
    let name = file_stem(path);
    let dataset = load_csv(path, &CsvOptions::default())
        .map_err(with_context(format!("failed to read {}", path.display())))?;
    let mut error_rates = Vec::new();
    let mut pool_size = 0usize;
    let mut total_ms: u128 = 0;
    for seed in 0..seeds {
        let started = Instant::now();
        let (pools, holdout) = sample_pools(&dataset, 0.5, seed)?;
        let result = two_fold_cv(&pools, grid, seed)?;
        let best = *result.best();
        let report = evaluate(&pools, &best, &holdout)?;
        let elapsed_ms = started.elapsed().as_millis();
        total_ms += elapsed_ms;
        pool_size = pools.iter().map(|pool| pool.len()).max().unwrap_or(0);
        error_rates.push(report.error_rate());
        writer.write_record([
            name.clone(),
            seed.to_string(),
            pool_size.to_string(),
            best.q().to_string(),
            best.n_s().to_string(),
            best.n_ns().to_string(),
            best.alpha().to_string(),
            format!("{:.2}", 100.0 * result.cv_error()),
            format!("{:.2}", 100.0 * report.error_rate()),
            String::new(),
            String::new(),
            elapsed_ms.to_string(),
            "ok".to_string(),
        ])?;
    }
    let n = error_rates.len() as f64;
    let mean = error_rates.iter().sum::<f64>() / n;
    let spread = if error_rates.len() > 1 {
        let variance = error_rates
            .iter()
            .map(|rate| (rate - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        variance.sqrt()
    } else {
        0.0
    };
    let reference = reference_for(&name);
    writer.write_record([
        name.clone(),
        "mean".to_string(),
        pool_size.to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        format!("{:.2}", 100.0 * mean),
        format!("{:.2}", 100.0 * spread),
        reference.unwrap_or("").to_string(),
        total_ms.to_string(),
        "ok".to_string(),
    ])?;
    match reference {
        Some(reference) => eprintln!(
            "benchmark: {name}: mean holdout error {:.2}% +/- {:.2}% over {seeds} seed(s); \
             reported reference {reference}%",
            100.0 * mean,
            100.0 * spread
        ),
        None => eprintln!(
            "benchmark: {name}: mean holdout error {:.2}% +/- {:.2}% over {seeds} seed(s)",
            100.0 * mean,
            100.0 * spread
        ),
    }
    Ok(())
}

fn reference_for(name: &str) -> Option<&'static str> {
    let lower = name.to_lowercase();
    REFERENCE_ERROR_PCT
        .iter()
        .find(|(key, _)| lower.contains(key))
        .map(|(_, value)| *value)
}

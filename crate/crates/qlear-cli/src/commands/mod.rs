//! Subcommand implementations and the small helpers they share.

mod benchmark;
mod demo;
mod fit;
mod predict;

use std::fs::File;
use std::io::Write;
use std::path::Path;

use qlear::ParamGrid;

use crate::cli::Command;
use crate::error::CliError;

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Demo {
            problem,
            q,
            resolution,
            out,
        } => demo::run(problem, q, resolution, out.as_deref()),
        Command::Fit {
            data,
            pool_fraction,
            seed,
            grid,
            standardize,
            out,
        } => fit::run(
            &data,
            pool_fraction,
            seed,
            grid.as_deref(),
            standardize,
            &out,
        ),
        Command::Predict { model, data, out } => predict::run(&model, &data, out.as_deref()),
        Command::Benchmark { data, seeds, grid } => benchmark::run(&data, seeds, grid.as_deref()),
    }
}

/// CSV writer on the given path, or on stdout when no path is given.
fn csv_writer(out: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>, CliError> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path).map_err(|source| CliError::File {
            path: path.to_path_buf(),
            source,
        })?),
        None => Box::new(std::io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

/// Search grid from a JSON config file, or the stock grid when absent.
fn load_grid(path: Option<&Path>) -> Result<ParamGrid, CliError> {
    match path {
        None => Ok(ParamGrid::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::File {
                path: path.to_path_buf(),
                source,
            })?;
            serde_json::from_str(&text).map_err(|source| CliError::Json {
                path: path.to_path_buf(),
                source,
            })
        }
    }
}

/// Wraps a library error with a note about what the command was doing.
fn with_context(context: String) -> impl FnOnce(qlear::Error) -> CliError {
    move |source| CliError::Context { context, source }
}

/// Display name of a dataset file: the stem without directory or extension.
fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

//! Built-in problems rendered as decision-surface CSVs.

use std::path::Path;

use qlear::{
    iris, make_and, make_xor, pools_from_indices, simple_classify, singleton_subclasses, ClassPool,
    FeatureVector, LabeledDataset,
};

use crate::cli::Problem;
use crate::error::CliError;

use super::csv_writer;

pub fn run(
    problem: Problem,
    q: f64,
    resolution: usize,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if resolution < 2 {
        return Err(CliError::Usage(format!(
            "--resolution must be at least 2, got {resolution}"
        )));
    }
    qlear::validate_q(q).map_err(|err| CliError::Usage(format!("--q {q} is not usable: {err}")))?;
    match problem {
        Problem::Xor => corner_problem(make_xor(1, 0.0, 0)?.to_pools(), q, resolution, out, "xor"),
        Problem::And => corner_problem(
            // Whole-class pools cannot separate a conjunction: each corner
            // gets its own singleton subclass instead.
            singleton_subclasses(&make_and(1, 0.0, 0)?.to_pools()),
            q,
            resolution,
            out,
            "and",
        ),
        Problem::Iris34 => iris34(q, resolution, out),
    }
}

fn corner_problem(
    pools: Vec<ClassPool>,
    q: f64,
    resolution: usize,
    out: Option<&Path>,
    name: &str,
) -> Result<(), CliError> {
    write_grid(&pools, q, resolution, (-2.0, 2.0), (-2.0, 2.0), out)?;
    eprintln!("{name}: wrote {resolution}x{resolution} decision grid on [-2,2]^2 at q={q}");
    Ok(())
}

/// Labels every cell of an axis-aligned grid and writes (x, y, label) rows.
fn write_grid(
    pools: &[ClassPool],
    q: f64,
    resolution: usize,
    x_range: (f64, f64),
    y_range: (f64, f64),
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mut writer = csv_writer(out)?;
    writer.write_record(["x", "y", "label"])?;
    let steps = (resolution - 1) as f64;
    for i in 0..resolution {
        let x = x_range.0 + (x_range.1 - x_range.0) * i as f64 / steps;
        for j in 0..resolution {
            let y = y_range.0 + (y_range.1 - y_range.0) * j as f64 / steps;
            let prediction = simple_classify(&FeatureVector::new(vec![x, y])?, pools, q)?;
            writer.write_record([x.to_string(), y.to_string(), prediction.label().to_string()])?;
        }
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// The bundled 150-flower dataset on its two petal attributes: 15
/// representatives per class (rows 20-34 of each class) as 45 singleton
/// subclasses, decision surface over the padded attribute plane, and the
/// error count on the 105 samples left out.
fn iris34(q: f64, resolution: usize, out: Option<&Path>) -> Result<(), CliError> {
    let data = iris().project(&[2, 3])?;
    let positions: Vec<Vec<usize>> = vec![(19..=33).collect(); 3];
    let (pools, holdout) = pools_from_indices(&data, &positions)?;
    let subclasses = singleton_subclasses(&pools);
    let x_range = padded_extent(&data, 0);
    let y_range = padded_extent(&data, 1);
    write_grid(&subclasses, q, resolution, x_range, y_range, out)?;
    let mut errors = 0usize;
    for (features, label) in holdout.features().iter().zip(holdout.labels()) {
        if simple_classify(features, &subclasses, q)?.label() != label.as_str() {
            errors += 1;
        }
    }
    eprintln!(
        "iris34: wrote {resolution}x{resolution} decision grid over [{:.3}, {:.3}] x \
         [{:.3}, {:.3}] at q={q}",
        x_range.0, x_range.1, y_range.0, y_range.1
    );
    eprintln!(
        "iris34: held-out error {errors}/{} ({:.2}%) with {} singleton subclasses",
        holdout.len(),
        100.0 * errors as f64 / holdout.len() as f64,
        subclasses.len()
    );
    Ok(())
}

/// Range of one attribute across the dataset, padded by 5% on each side.
fn padded_extent(data: &LabeledDataset, column: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for features in data.features() {
        let value = features.components()[column];
        lo = lo.min(value);
        hi = hi.max(value);
    }
    let margin = 0.05 * (hi - lo);
    (lo - margin, hi + margin)
}

//! Batch prediction from a saved model, with evaluation when the input
//! carries labels.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use qlear::{classify_batch, load_csv, load_vectors_csv, CsvOptions, FeatureVector, Prediction};

use crate::error::CliError;
use crate::model::ModelFile;

use super::{csv_writer, with_context};

pub fn run(model_path: &Path, data_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let model = ModelFile::load(model_path)?;
    let dim = model.dim();
    let columns = column_count(data_path)?;
    let options = CsvOptions::default();

    // Width decides the input kind: exactly the model's dimension means
    // unlabeled features, one extra column means a trailing label.
    let (features, truths): (Vec<FeatureVector>, Option<Vec<String>>) = if columns == dim {
        let features = load_vectors_csv(data_path, &options).map_err(with_context(format!(
            "failed to read {}",
            data_path.display()
        )))?;
        (features, None)
    } else if columns == dim + 1 {
        let labeled = load_csv(data_path, &options).map_err(with_context(format!(
            "failed to read {}",
            data_path.display()
        )))?;
        (labeled.features().to_vec(), Some(labeled.labels().to_vec()))
    } else {
        return Err(CliError::Context {
            context: format!(
                "{}: rows have {columns} columns, but the model expects {dim} feature columns \
                 (unlabeled) or {} with a trailing label",
                data_path.display(),
                dim + 1
            ),
            source: qlear::Error::DimensionMismatch {
                expected: dim,
                got: columns,
            },
        });
    };

    if let Some(truths) = &truths {
        let known: HashSet<&str> = model.pools.iter().map(|pool| pool.label()).collect();
        if let Some(unknown) = truths.iter().find(|label| !known.contains(label.as_str())) {
            return Err(CliError::Context {
                context: format!(
                    "{}: label {unknown:?} does not appear in the model",
                    data_path.display()
                ),
                source: qlear::Error::UnknownLabel(unknown.clone()),
            });
        }
    }

    let queries = match &model.preprocessing {
        Some(stats) => features
            .iter()
            .map(|f| stats.apply_vector(f))
            .collect::<qlear::Result<Vec<_>>>()?,
        None => features,
    };
    let predictions = classify_batch(&queries, &model.pools, &model.params)?;

    let mut writer = csv_writer(out)?;
    let mut header = vec!["row".to_string(), "predicted".to_string()];
    header.extend(
        model
            .pools
            .iter()
            .map(|pool| format!("score_{}", pool.label())),
    );
    writer.write_record(&header)?;
    for (row, prediction) in predictions.iter().enumerate() {
        let mut record = vec![row.to_string(), prediction.label().to_string()];
        record.extend(prediction.scores().iter().map(|s| s.score().to_string()));
        writer.write_record(&record)?;
    }
    writer.flush().map_err(csv::Error::from)?;

    if let Some(truths) = truths {
        report_accuracy(&model, &predictions, &truths);
    }
    Ok(())
}

/// Field count of the first CSV record.
fn column_count(path: &Path) -> Result<usize, CliError> {
    let file = std::fs::File::open(path).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(file);
    let mut record = csv::StringRecord::new();
    match reader.read_record(&mut record) {
        Ok(true) => Ok(record.len()),
        Ok(false) => Err(CliError::Lib(qlear::Error::EmptyFile)),
        Err(source) => Err(CliError::Invalid {
            path: path.to_path_buf(),
            message: source.to_string(),
        }),
    }
}

/// Error rate and confusion counts against the given true labels, printed
/// to stderr so the prediction CSV on stdout stays clean.
fn report_accuracy(model: &ModelFile, predictions: &[Prediction], truths: &[String]) {
    let labels: Vec<&str> = model.pools.iter().map(|pool| pool.label()).collect();
    let index: HashMap<&str, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, label)| (*label, i))
        .collect();
    let mut confusion = vec![vec![0usize; labels.len()]; labels.len()];
    let mut wrong = 0usize;
    for (prediction, truth) in predictions.iter().zip(truths) {
        let t = index[truth.as_str()];
        let p = index[prediction.label()];
        confusion[t][p] += 1;
        if t != p {
            wrong += 1;
        }
    }
    eprintln!(
        "evaluation: {wrong}/{} misclassified ({:.2}% error)",
        truths.len(),
        100.0 * wrong as f64 / truths.len() as f64
    );
    eprintln!("confusion (true class -> predicted counts):");
    for (t, row) in confusion.iter().enumerate() {
        let cells = labels
            .iter()
            .zip(row)
            .map(|(label, count)| format!("{label}={count}"))
            .collect::<Vec<_>>()
            .join(", ");
        eprintln!("  {}: {cells}", labels[t]);
    }
}

//! Dataset ingestion, preprocessing, and toy generators.
//!
//! Labeled data enters the library either from CSV files ([`load_csv`]),
//! from the built-in generators ([`make_xor`], [`make_and`],
//! [`make_blobs`]), or from the bundled [`iris`] fixture. A
//! [`LabeledDataset`] owns its feature vectors and labels and offers
//! stratified splitting and optional z-score standardization; classes are
//! ordered by first appearance, and that order drives every downstream
//! tie-break.

use std::io::Read;
use std::path::Path;

use csv::ReaderBuilder;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::classifier::ClassPool;
use crate::density::FeatureVector;
use crate::error::{Error, Result};

/// Which CSV column carries the class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelColumn {
    /// The last column of each row.
    Last,
    /// A zero-based column index.
    Index(usize),
}

/// CSV parsing options.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CsvOptions {
    /// Skip the first row as a header. Default: no header.
    pub has_header: bool,
    /// Label position. Default: last column.
    pub label_column: LabelColumn,
    /// Field delimiter. Default: comma.
    pub delimiter: u8,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            has_header: false,
            label_column: LabelColumn::Last,
            delimiter: b',',
        }
    }
}

/// Feature vectors with class labels.
///
/// Rows keep their input order; `class_names` lists the distinct labels by
/// first appearance.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    features: Vec<FeatureVector>,
    labels: Vec<String>,
    class_names: Vec<String>,
}

impl LabeledDataset {
    /// Validates parallel feature and label lists.
    pub fn new(features: Vec<FeatureVector>, labels: Vec<String>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::EmptyInput);
        }
        if features.len() != labels.len() {
            return Err(Error::InvalidParams(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        let dim = features[0].dim();
        for f in &features {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.dim(),
                });
            }
        }
        let mut class_names: Vec<String> = Vec::new();
        for label in &labels {
            if label.is_empty() {
                return Err(Error::InvalidParams("empty class label".into()));
            }
            if !class_names.iter().any(|c| c == label) {
                class_names.push(label.clone());
            }
        }
        Ok(Self {
            features,
            labels,
            class_names,
        })
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.features[0].dim()
    }

    pub fn features(&self) -> &[FeatureVector] {
        &self.features
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Distinct labels in first-appearance order.
    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// Row indices of each class, in class order; indices ascend within a
    /// class.
    pub fn class_indices(&self) -> Vec<Vec<usize>> {
        self.class_names
            .iter()
            .map(|name| {
                self.labels
                    .iter()
                    .enumerate()
                    .filter(|&(_, l)| l == name)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    }

    /// Groups every row into per-class pools, in class order.
    pub fn to_pools(&self) -> Vec<ClassPool> {
        self.class_indices()
            .iter()
            .zip(&self.class_names)
            .map(|(indices, name)| {
                let members = indices.iter().map(|&i| self.features[i].clone()).collect();
                ClassPool::new(name.clone(), members)
                    .expect("classes are non-empty by construction")
            })
            .collect()
    }

    /// The sub-dataset of the given rows, keeping their order.
    pub(crate) fn select(&self, indices: &[usize]) -> Result<Self> {
        let features = indices.iter().map(|&i| self.features[i].clone()).collect();
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        Self::new(features, labels)
    }

    /// The dataset restricted to the given feature columns, in the given
    /// order. Columns are zero-based and may not repeat.
    pub fn project(&self, columns: &[usize]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::EmptyInput);
        }
        let d = self.dim();
        for (i, &c) in columns.iter().enumerate() {
            if c >= d {
                return Err(Error::InvalidParams(format!(
                    "column {c} out of range for dimension {d}"
                )));
            }
            if columns[..i].contains(&c) {
                return Err(Error::InvalidParams(format!("column {c} listed twice")));
            }
        }
        let features = self
            .features
            .iter()
            .map(|f| FeatureVector::new(columns.iter().map(|&c| f.components()[c]).collect()))
            .collect::<Result<_>>()?;
        Self::new(features, self.labels.clone())
    }

    /// Z-scores each feature column and returns the statistics for reuse on
    /// test data. A constant column keeps its values at zero: its standard
    /// deviation is recorded as 1 and flagged.
    pub fn standardize(&self) -> Result<(Self, StandardizationStats)> {
        let n = self.len();
        if n < 2 {
            return Err(Error::SingleSample);
        }
        let d = self.dim();
        let mut mean = vec![0.0; d];
        for f in &self.features {
            for (m, &x) in mean.iter_mut().zip(f.components()) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let mut variance = vec![0.0; d];
        for f in &self.features {
            for (v, (&x, &m)) in variance.iter_mut().zip(f.components().iter().zip(&mean)) {
                *v += (x - m) * (x - m);
            }
        }
        let mut std = Vec::with_capacity(d);
        let mut constant_features = Vec::with_capacity(d);
        for (v, m) in variance.iter().zip(&mean) {
            let s = (v / n as f64).sqrt();
            if s <= 1e-12 * m.abs().max(1.0) {
                std.push(1.0);
                constant_features.push(true);
            } else {
                std.push(s);
                constant_features.push(false);
            }
        }
        let stats = StandardizationStats::new(mean, std, constant_features)?;
        let standardized = stats.apply(self)?;
        Ok((standardized, stats))
    }

    /// Stratified seeded split into `(train, test)`.
    ///
    /// Each class contributes `floor(test_fraction * class size)` rows to
    /// the test side, drawn without replacement; the remainder stays in
    /// train. Both sides keep the original row order. Requires
    /// `0 < test_fraction < 1` and at least 2 samples per class.
    pub fn split(&self, test_fraction: f64, seed: u64) -> Result<(Self, Self)> {
        if !test_fraction.is_finite() || test_fraction <= 0.0 || test_fraction >= 1.0 {
            return Err(Error::InvalidFraction(test_fraction));
        }
        let by_class = self.class_indices();
        for (name, indices) in self.class_names.iter().zip(&by_class) {
            if indices.len() < 2 {
                return Err(Error::ClassTooSmall {
                    label: name.clone(),
                    got: indices.len(),
                    need: 2,
                });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut in_test = vec![false; self.len()];
        let mut test_count = 0usize;
        for indices in &by_class {
            let k = (test_fraction * indices.len() as f64).floor() as usize;
            let mut picks: Vec<usize> =
                rand::seq::index::sample(&mut rng, indices.len(), k).into_vec();
            picks.sort_unstable();
            for p in picks {
                in_test[indices[p]] = true;
                test_count += 1;
            }
        }
        if test_count == 0 {
            return Err(Error::InvalidParams(format!(
                "test fraction {test_fraction} selects no samples"
            )));
        }
        let (mut train_rows, mut test_rows) = (Vec::new(), Vec::new());
        for (i, &is_test) in in_test.iter().enumerate() {
            if is_test {
                test_rows.push(i);
            } else {
                train_rows.push(i);
            }
        }
        Ok((self.select(&train_rows)?, self.select(&test_rows)?))
    }
}

/// Per-feature mean and standard deviation of a training set.
///
/// Standard deviations are population values (divide by `n`); flagged
/// constant features carry a substitute deviation of 1 so application is
/// always well defined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "StandardizationStatsSerde",
    into = "StandardizationStatsSerde"
)]
pub struct StandardizationStats {
    mean: Vec<f64>,
    std: Vec<f64>,
    constant_features: Vec<bool>,
}

impl StandardizationStats {
    /// Validates explicit statistics: equal lengths, finite means, strictly
    /// positive finite deviations.
    pub fn new(mean: Vec<f64>, std: Vec<f64>, constant_features: Vec<bool>) -> Result<Self> {
        if mean.is_empty() {
            return Err(Error::EmptyInput);
        }
        if mean.len() != std.len() || mean.len() != constant_features.len() {
            return Err(Error::InvalidParams(
                "standardization statistics have mismatched lengths".into(),
            ));
        }
        if mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        if std.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(Error::InvalidParams(
                "standard deviations must be finite and positive".into(),
            ));
        }
        Ok(Self {
            mean,
            std,
            constant_features,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn std(&self) -> &[f64] {
        &self.std
    }

    /// Flags for columns that were constant in the training data.
    pub fn constant_features(&self) -> &[bool] {
        &self.constant_features
    }

    /// Z-scores one vector with these statistics.
    pub fn apply_vector(&self, v: &FeatureVector) -> Result<FeatureVector> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.dim(),
            });
        }
        let z = v
            .components()
            .iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(&x, (&m, &s))| (x - m) / s)
            .collect();
        FeatureVector::new(z)
    }

    /// Z-scores a whole dataset, keeping its labels.
    pub fn apply(&self, dataset: &LabeledDataset) -> Result<LabeledDataset> {
        let features = dataset
            .features()
            .iter()
            .map(|f| self.apply_vector(f))
            .collect::<Result<_>>()?;
        LabeledDataset::new(features, dataset.labels().to_vec())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StandardizationStatsSerde {
    mean: Vec<f64>,
    std: Vec<f64>,
    constant_features: Vec<bool>,
}

impl TryFrom<StandardizationStatsSerde> for StandardizationStats {
    type Error = Error;

    fn try_from(raw: StandardizationStatsSerde) -> Result<Self> {
        Self::new(raw.mean, raw.std, raw.constant_features)
    }
}

impl From<StandardizationStats> for StandardizationStatsSerde {
    fn from(s: StandardizationStats) -> Self {
        Self {
            mean: s.mean,
            std: s.std,
            constant_features: s.constant_features,
        }
    }
}

fn map_csv_error(e: csv::Error) -> Error {
    let message = e.to_string();
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        _ => Error::MalformedCsv(message),
    }
}

/// Reads all records, checking that every row has the same field count.
/// Returns `(file line, record)` pairs.
fn read_records<R: Read>(reader: R, options: &CsvOptions) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut rdr = ReaderBuilder::new()
        .has_headers(options.has_header)
        .delimiter(options.delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut records = Vec::new();
    let mut expected: Option<usize> = None;
    for record in rdr.records() {
        let record = record.map_err(map_csv_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        match expected {
            None => expected = Some(record.len()),
            Some(e) if record.len() != e => {
                return Err(Error::InconsistentColumns {
                    row: line,
                    expected: e,
                    got: record.len(),
                })
            }
            _ => {}
        }
        records.push((line, record));
    }
    if records.is_empty() {
        return Err(Error::EmptyFile);
    }
    Ok(records)
}

fn parse_cell(line: u64, column: usize, cell: &str) -> Result<f64> {
    let parsed: f64 = cell.parse().map_err(|_| Error::ParseError {
        row: line,
        column: column + 1,
        value: cell.to_string(),
    })?;
    if !parsed.is_finite() {
        return Err(Error::ParseError {
            row: line,
            column: column + 1,
            value: cell.to_string(),
        });
    }
    Ok(parsed)
}

fn read_labeled<R: Read>(reader: R, options: &CsvOptions) -> Result<LabeledDataset> {
    let records = read_records(reader, options)?;
    let columns = records[0].1.len();
    if columns < 2 {
        return Err(Error::MalformedCsv(
            "each row needs at least one feature column and a label column".into(),
        ));
    }
    let label_index = match options.label_column {
        LabelColumn::Last => columns - 1,
        LabelColumn::Index(i) => {
            if i >= columns {
                return Err(Error::InvalidLabelColumn { index: i, columns });
            }
            i
        }
    };
    let mut features = Vec::with_capacity(records.len());
    let mut labels = Vec::with_capacity(records.len());
    for (line, record) in &records {
        let mut row = Vec::with_capacity(columns - 1);
        for (column, cell) in record.iter().enumerate() {
            if column == label_index {
                if cell.is_empty() {
                    return Err(Error::MalformedCsv(format!("row {line}: empty label")));
                }
                labels.push(cell.to_string());
            } else {
                row.push(parse_cell(*line, column, cell)?);
            }
        }
        features.push(FeatureVector::new(row)?);
    }
    LabeledDataset::new(features, labels)
}

/// Loads a labeled dataset from a CSV file.
///
/// Features must be plain decimal numbers; the label column may hold any
/// non-empty text. Parse failures report the file line and 1-based column.
pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<LabeledDataset> {
    let file = std::fs::File::open(path)?;
    read_labeled(file, options)
}

/// Loads unlabeled vectors from a CSV file: every column is a feature.
/// `options.label_column` is ignored.
pub fn load_vectors_csv(
    path: impl AsRef<Path>,
    options: &CsvOptions,
) -> Result<Vec<FeatureVector>> {
    let file = std::fs::File::open(path)?;
    let records = read_records(file, options)?;
    let mut vectors = Vec::with_capacity(records.len());
    for (line, record) in &records {
        let row = record
            .iter()
            .enumerate()
            .map(|(column, cell)| parse_cell(*line, column, cell))
            .collect::<Result<Vec<f64>>>()?;
        vectors.push(FeatureVector::new(row)?);
    }
    Ok(vectors)
}

/// The bundled 150-row Iris dataset: 4 features, 3 classes of 50.
pub fn iris() -> LabeledDataset {
    static IRIS_CSV: &str = include_str!("../../../data/iris.csv");
    read_labeled(IRIS_CSV.as_bytes(), &CsvOptions::default())
        .expect("bundled Iris fixture is valid")
}

fn corner_dataset(
    corners: &[([f64; 2], &str)],
    n_per_arm: usize,
    noise_std: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    if n_per_arm == 0 {
        return Err(Error::InvalidParams(
            "each corner needs at least one point".into(),
        ));
    }
    if !noise_std.is_finite() || noise_std < 0.0 {
        return Err(Error::InvalidParams(format!(
            "noise level must be finite and non-negative, got {noise_std}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, noise_std)
        .map_err(|e| Error::InvalidParams(format!("noise distribution: {e}")))?;
    let mut features = Vec::with_capacity(corners.len() * n_per_arm);
    let mut labels = Vec::with_capacity(corners.len() * n_per_arm);
    for (corner, label) in corners {
        for _ in 0..n_per_arm {
            let x = corner[0] + noise.sample(&mut rng);
            let y = corner[1] + noise.sample(&mut rng);
            features.push(FeatureVector::new(vec![x, y])?);
            labels.push(label.to_string());
        }
    }
    LabeledDataset::new(features, labels)
}

/// The two-dimensional XOR problem: corners `(1,1)` and `(-1,-1)` form
/// class `A`, corners `(1,-1)` and `(-1,1)` class `B`, each jittered with
/// seeded Gaussian noise. `noise_std = 0` reproduces the exact corners.
pub fn make_xor(n_per_arm: usize, noise_std: f64, seed: u64) -> Result<LabeledDataset> {
    corner_dataset(
        &[
            ([1.0, 1.0], "A"),
            ([-1.0, -1.0], "A"),
            ([1.0, -1.0], "B"),
            ([-1.0, 1.0], "B"),
        ],
        n_per_arm,
        noise_std,
        seed,
    )
}

/// The two-dimensional AND problem: corner `(1,1)` is `TRUE`, the other
/// three corners `FALSE`, each jittered with seeded Gaussian noise.
pub fn make_and(n_per_arm: usize, noise_std: f64, seed: u64) -> Result<LabeledDataset> {
    corner_dataset(
        &[
            ([1.0, 1.0], "TRUE"),
            ([-1.0, -1.0], "FALSE"),
            ([1.0, -1.0], "FALSE"),
            ([-1.0, 1.0], "FALSE"),
        ],
        n_per_arm,
        noise_std,
        seed,
    )
}

/// Isotropic Gaussian blobs: `n_per_class` points around each center, one
/// class per center, labeled `class0`, `class1`, ...
pub fn make_blobs(
    n_per_class: usize,
    centers: &[FeatureVector],
    noise_std: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    if centers.is_empty() {
        return Err(Error::EmptyInput);
    }
    if n_per_class == 0 {
        return Err(Error::InvalidParams(
            "each blob needs at least one point".into(),
        ));
    }
    if !noise_std.is_finite() || noise_std < 0.0 {
        return Err(Error::InvalidParams(format!(
            "noise level must be finite and non-negative, got {noise_std}"
        )));
    }
    let dim = centers[0].dim();
    for c in centers {
        if c.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: c.dim(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, noise_std)
        .map_err(|e| Error::InvalidParams(format!("noise distribution: {e}")))?;
    let mut features = Vec::with_capacity(centers.len() * n_per_class);
    let mut labels = Vec::with_capacity(centers.len() * n_per_class);
    for (ci, center) in centers.iter().enumerate() {
        for _ in 0..n_per_class {
            let point = center
                .components()
                .iter()
                .map(|&c| c + noise.sample(&mut rng))
                .collect();
            features.push(FeatureVector::new(point)?);
            labels.push(format!("class{ci}"));
        }
    }
    LabeledDataset::new(features, labels)
}

//! Pool sampling, cross-validated grid search, and holdout evaluation.
//!
//! Training data becomes a set of per-class representative pools, either by
//! seeded stratified sampling ([`sample_pools`]) or by explicit index lists
//! ([`pools_from_indices`]). [`two_fold_cv`] splits each pool in half,
//! classifies each half against the other for every point of a
//! [`ParamGrid`], and reports the full error table plus the tie-broken best
//! parameters. [`evaluate`] measures a parameter choice on held-out data.
//!
//! All randomness flows through a caller-supplied seed, and grid results
//! are assembled in a canonical order (`q`, outermost, then `n_s`, `n_ns`,
//! `alpha`), so every function here is bit-for-bit reproducible across
//! runs, machines, and thread counts.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{check_pools, classify_batch, ClassPool, QlearParams};
use crate::dataset::LabeledDataset;
use crate::density::{validate_q, FeatureVector, SymmetricAccumulator};
use crate::error::{Error, Result};
use crate::neighbors::k_nearest;

/// Candidate values for each hyperparameter of the decision rule.
///
/// The cross-validation grid is the Cartesian product of the four axes,
/// enumerated with `q` outermost, then `n_s`, `n_ns`, and `alpha`
/// innermost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamGridSerde", into = "ParamGridSerde")]
pub struct ParamGrid {
    q_values: Vec<f64>,
    n_s_values: Vec<usize>,
    n_ns_values: Vec<usize>,
    alpha_values: Vec<f64>,
}

impl ParamGrid {
    /// Validates explicit axes: all four non-empty, every `q` valid, every
    /// neighbor count at least 1, every `alpha` finite and non-negative.
    pub fn new(
        q_values: Vec<f64>,
        n_s_values: Vec<usize>,
        n_ns_values: Vec<usize>,
        alpha_values: Vec<f64>,
    ) -> Result<Self> {
        if q_values.is_empty() {
            return Err(Error::EmptyGrid("q_values"));
        }
        if n_s_values.is_empty() {
            return Err(Error::EmptyGrid("n_s_values"));
        }
        if n_ns_values.is_empty() {
            return Err(Error::EmptyGrid("n_ns_values"));
        }
        if alpha_values.is_empty() {
            return Err(Error::EmptyGrid("alpha_values"));
        }
        for &q in &q_values {
            validate_q(q)?;
        }
        if n_s_values.iter().chain(&n_ns_values).any(|&n| n == 0) {
            return Err(Error::InvalidParams(
                "neighbor counts must be at least 1".into(),
            ));
        }
        if alpha_values.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(Error::InvalidParams(
                "alpha values must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            q_values,
            n_s_values,
            n_ns_values,
            alpha_values,
        })
    }

    pub fn q_values(&self) -> &[f64] {
        &self.q_values
    }

    pub fn n_s_values(&self) -> &[usize] {
        &self.n_s_values
    }

    pub fn n_ns_values(&self) -> &[usize] {
        &self.n_ns_values
    }

    pub fn alpha_values(&self) -> &[f64] {
        &self.alpha_values
    }

    /// Number of grid points (product of the four axis lengths).
    pub fn len(&self) -> usize {
        self.q_values.len()
            * self.n_s_values.len()
            * self.n_ns_values.len()
            * self.alpha_values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Every grid point in canonical order.
    pub fn points(&self) -> Vec<QlearParams> {
        self.indexed_points().into_iter().map(|(_, p)| p).collect()
    }

    /// Grid points in canonical order, each with the index of its `q` value
    /// (used to share per-`q` entropy tables during cross-validation).
    fn indexed_points(&self) -> Vec<(usize, QlearParams)> {
        let mut points = Vec::with_capacity(self.len());
        for (qi, &q) in self.q_values.iter().enumerate() {
            for &n_s in &self.n_s_values {
                for &n_ns in &self.n_ns_values {
                    for &alpha in &self.alpha_values {
                        let params = QlearParams::new(q, n_s, n_ns, alpha)
                            .expect("grid axes validated at construction");
                        points.push((qi, params));
                    }
                }
            }
        }
        points
    }
}

impl Default for ParamGrid {
    /// The stock search grid: `q` spans both sub- and super-unit entropy
    /// orders, neighbor counts range from a single representative to 29,
    /// and `alpha` steps from 0 to 1 in quarters.
    fn default() -> Self {
        Self::new(
            vec![0.03, 0.1, 0.5, 0.95, 1.22, 1.5, 1.78, 2.0],
            vec![1, 3, 5, 7, 9, 13, 15, 25, 29],
            vec![1, 2, 4, 5, 6],
            vec![0.0, 0.25, 0.5, 0.75, 1.0],
        )
        .expect("stock grid is valid")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamGridSerde {
    q_values: Vec<f64>,
    n_s_values: Vec<usize>,
    n_ns_values: Vec<usize>,
    alpha_values: Vec<f64>,
}

impl TryFrom<ParamGridSerde> for ParamGrid {
    type Error = Error;

    fn try_from(raw: ParamGridSerde) -> Result<Self> {
        Self::new(
            raw.q_values,
            raw.n_s_values,
            raw.n_ns_values,
            raw.alpha_values,
        )
    }
}

impl From<ParamGrid> for ParamGridSerde {
    fn from(g: ParamGrid) -> Self {
        Self {
            q_values: g.q_values,
            n_s_values: g.n_s_values,
            n_ns_values: g.n_ns_values,
            alpha_values: g.alpha_values,
        }
    }
}

/// One row of a cross-validation table: a parameter choice and its error.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    params: QlearParams,
    misclassified: usize,
    total: usize,
    cv_error: f64,
}

impl GridPoint {
    pub fn params(&self) -> &QlearParams {
        &self.params
    }

    /// Misclassified samples across both folds.
    pub fn misclassified(&self) -> usize {
        self.misclassified
    }

    /// Total classified samples across both folds.
    pub fn total(&self) -> usize {
        self.total
    }

    /// `misclassified / total`.
    pub fn cv_error(&self) -> f64 {
        self.cv_error
    }
}

/// Outcome of a grid search: the full table in canonical order and the
/// winning point.
///
/// The winner minimizes the error; exact ties prefer the smaller `n_s`,
/// then smaller `n_ns`, then smaller `q`, then smaller `alpha` (cheaper
/// and more conservative models first).
#[derive(Clone, Debug, PartialEq)]
pub struct GridSearchResult {
    best: GridPoint,
    table: Vec<GridPoint>,
}

impl GridSearchResult {
    pub fn best(&self) -> &QlearParams {
        self.best.params()
    }

    /// Cross-validation error of the winning point.
    pub fn cv_error(&self) -> f64 {
        self.best.cv_error()
    }

    pub fn best_point(&self) -> &GridPoint {
        &self.best
    }

    pub fn table(&self) -> &[GridPoint] {
        &self.table
    }
}

/// Holdout classification outcome: error rate and confusion counts.
///
/// Row and column order of the confusion matrix follows pool order; entry
/// `[i][j]` counts samples of class `i` predicted as class `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    labels: Vec<String>,
    confusion: Vec<Vec<usize>>,
    n_samples: usize,
    error_rate: f64,
}

impl EvaluationReport {
    /// Class labels indexing the confusion matrix, in pool order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn confusion(&self) -> &[Vec<usize>] {
        &self.confusion
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// `1 - correct / n_samples`.
    pub fn error_rate(&self) -> f64 {
        self.error_rate
    }
}

/// Draws per-class representative pools from a dataset.
///
/// Each class contributes `floor(fraction * class size)` members, sampled
/// without replacement with the seeded generator and kept in dataset row
/// order; everything else forms the holdout. The fraction caps at 0.5 so
/// the holdout always dominates, and every class must be large enough to
/// yield at least one representative.
pub fn sample_pools(
    dataset: &LabeledDataset,
    fraction: f64,
    seed: u64,
) -> Result<(Vec<ClassPool>, LabeledDataset)> {
    if !fraction.is_finite() || fraction <= 0.0 || fraction > 0.5 {
        return Err(Error::InvalidFraction(fraction));
    }
    let by_class = dataset.class_indices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pools = Vec::with_capacity(by_class.len());
    let mut pooled = vec![false; dataset.len()];
    for (name, indices) in dataset.class_names().iter().zip(&by_class) {
        let n = indices.len();
        if n < 2 {
            return Err(Error::ClassTooSmall {
                label: name.clone(),
                got: n,
                need: 2,
            });
        }
        let k = (fraction * n as f64).floor() as usize;
        if k == 0 {
            return Err(Error::ClassTooSmall {
                label: name.clone(),
                got: n,
                need: (1.0 / fraction).ceil() as usize,
            });
        }
        let mut picks: Vec<usize> = rand::seq::index::sample(&mut rng, n, k).into_vec();
        picks.sort_unstable();
        let members = picks
            .iter()
            .map(|&p| dataset.features()[indices[p]].clone())
            .collect();
        for &p in &picks {
            pooled[indices[p]] = true;
        }
        pools.push(ClassPool::new(name.clone(), members)?);
    }
    let holdout_rows: Vec<usize> = (0..dataset.len()).filter(|&i| !pooled[i]).collect();
    Ok((pools, dataset.select(&holdout_rows)?))
}

/// Builds pools from explicit per-class member positions.
///
/// `positions_per_class` lists, for each class in dataset class order, the
/// zero-based positions within that class's rows (not global row numbers)
/// of the representatives, kept in the given order. Unselected rows form
/// the holdout; at least one row must remain.
pub fn pools_from_indices(
    dataset: &LabeledDataset,
    positions_per_class: &[Vec<usize>],
) -> Result<(Vec<ClassPool>, LabeledDataset)> {
    let by_class = dataset.class_indices();
    if positions_per_class.len() != by_class.len() {
        return Err(Error::InvalidParams(format!(
            "{} position lists for {} classes",
            positions_per_class.len(),
            by_class.len()
        )));
    }
    let mut pools = Vec::with_capacity(by_class.len());
    let mut pooled = vec![false; dataset.len()];
    for ((name, indices), positions) in dataset
        .class_names()
        .iter()
        .zip(&by_class)
        .zip(positions_per_class)
    {
        if positions.is_empty() {
            return Err(Error::EmptyPool {
                label: name.clone(),
            });
        }
        let mut members = Vec::with_capacity(positions.len());
        for &p in positions {
            if p >= indices.len() {
                return Err(Error::InvalidParams(format!(
                    "position {p} out of range for class {name:?} with {} rows",
                    indices.len()
                )));
            }
            let row = indices[p];
            if pooled[row] {
                return Err(Error::InvalidParams(format!(
                    "position {p} of class {name:?} listed twice"
                )));
            }
            pooled[row] = true;
            members.push(dataset.features()[row].clone());
        }
        pools.push(ClassPool::new(name.clone(), members)?);
    }
    let holdout_rows: Vec<usize> = (0..dataset.len()).filter(|&i| !pooled[i]).collect();
    Ok((pools, dataset.select(&holdout_rows)?))
}

/// Entropy-change lookup for one class and one query: for each effective
/// representative count, the delta per grid `q` value.
struct DeltaTable {
    by_count: BTreeMap<usize, Vec<f64>>,
}

impl DeltaTable {
    /// Builds the table by accumulating ranked representatives
    /// incrementally. The accumulation order (nearest first, query last)
    /// matches the plain classifier exactly, so the resulting entropies are
    /// bit-identical to it.
    fn build(
        query: &FeatureVector,
        ranked: &[&FeatureVector],
        counts: &BTreeSet<usize>,
        q_values: &[f64],
    ) -> Result<Self> {
        let mut acc = SymmetricAccumulator::new(query.dim())?;
        let mut added = 0;
        let mut by_count = BTreeMap::new();
        for &count in counts {
            while added < count {
                acc.add(ranked[added])?;
                added += 1;
            }
            let before = acc.to_density()?.spectrum()?;
            let mut with_query = acc.clone();
            with_query.add(query)?;
            let after = with_query.to_density()?.spectrum()?;
            let deltas = q_values
                .iter()
                .map(|&q| Ok(after.tsallis(q)? - before.tsallis(q)?))
                .collect::<Result<Vec<f64>>>()?;
            by_count.insert(count, deltas);
        }
        Ok(Self { by_count })
    }

    fn delta(&self, count: usize, q_index: usize) -> f64 {
        self.by_count[&count][q_index]
    }
}

/// Per-class context reused for every query of one fold direction.
struct ClassContext<'a> {
    own: &'a [FeatureVector],
    union: Vec<FeatureVector>,
    counts_s: BTreeSet<usize>,
    counts_ns: BTreeSet<usize>,
}

/// Misclassification count per grid point (canonical order) for one fold
/// direction: every query classified against `train`, scored for every
/// grid point at once.
///
/// For each query and class, the ranked same-class and other-class
/// representative prefixes are accumulated once per distinct effective
/// count, and entropies for all grid `q` values are read off the two
/// cached spectra. This evaluates the whole grid with two eigensolves per
/// (query, class, count) instead of two per grid point, while producing
/// bit-identical scores to the plain classifier.
fn fold_errors(
    train: &[ClassPool],
    queries: &[(&FeatureVector, usize)],
    grid: &ParamGrid,
    points: &[(usize, QlearParams)],
    parallel: bool,
) -> Result<Vec<usize>> {
    let contexts: Vec<ClassContext> = (0..train.len())
        .map(|i| {
            let union: Vec<FeatureVector> = train
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .flat_map(|(_, p)| p.members().iter().cloned())
                .collect();
            let counts_s = grid
                .n_s_values()
                .iter()
                .map(|&n| n.min(train[i].len()))
                .collect();
            let counts_ns = grid
                .n_ns_values()
                .iter()
                .map(|&n| n.min(union.len()))
                .collect();
            ClassContext {
                own: train[i].members(),
                union,
                counts_s,
                counts_ns,
            }
        })
        .collect();

    let per_query = |&(query, true_class): &(&FeatureVector, usize)| -> Result<Vec<usize>> {
        let mut tables = Vec::with_capacity(contexts.len());
        for ctx in &contexts {
            let ranked_own: Vec<&FeatureVector> = k_nearest(query, ctx.own, ctx.own.len())?
                .indices()
                .iter()
                .map(|&i| &ctx.own[i])
                .collect();
            let ranked_union: Vec<&FeatureVector> = k_nearest(query, &ctx.union, ctx.union.len())?
                .indices()
                .iter()
                .map(|&i| &ctx.union[i])
                .collect();
            let table_s = DeltaTable::build(query, &ranked_own, &ctx.counts_s, grid.q_values())?;
            let table_ns =
                DeltaTable::build(query, &ranked_union, &ctx.counts_ns, grid.q_values())?;
            tables.push((table_s, table_ns));
        }
        let mut wrong = vec![0usize; points.len()];
        for (gi, (qi, params)) in points.iter().enumerate() {
            let mut best = 0;
            let mut best_score = f64::INFINITY;
            for (ci, ctx) in contexts.iter().enumerate() {
                let eff_s = params.n_s().min(ctx.own.len());
                let eff_ns = params.n_ns().min(ctx.union.len());
                let de_s = tables[ci].0.delta(eff_s, *qi);
                let de_ns = tables[ci].1.delta(eff_ns, *qi);
                let score = de_s - params.alpha() * de_ns;
                if score < best_score {
                    best_score = score;
                    best = ci;
                }
            }
            if best != true_class {
                wrong[gi] = 1;
            }
        }
        Ok(wrong)
    };

    let outcomes: Vec<Result<Vec<usize>>> = if parallel {
        queries.par_iter().map(per_query).collect()
    } else {
        queries.iter().map(per_query).collect()
    };
    let mut totals = vec![0usize; points.len()];
    for outcome in outcomes {
        let wrong = outcome?;
        for (t, w) in totals.iter_mut().zip(wrong) {
            *t += w;
        }
    }
    Ok(totals)
}

fn cv_impl(
    pools: &[ClassPool],
    grid: &ParamGrid,
    seed: u64,
    parallel: bool,
) -> Result<GridSearchResult> {
    check_pools(pools, true)?;
    if pools.len() < 2 {
        return Err(Error::SingleClass);
    }
    for pool in pools {
        if pool.len() < 2 {
            return Err(Error::PoolTooSmall {
                label: pool.label().to_string(),
                got: pool.len(),
                need: 2,
            });
        }
    }

    // Stratified halving: the first fold takes ceil(n/2) seeded picks from
    // each pool, the second the rest, both in pool member order.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_a = Vec::with_capacity(pools.len());
    let mut fold_b = Vec::with_capacity(pools.len());
    for pool in pools {
        let n = pool.len();
        let k = n.div_ceil(2);
        let mut picks: Vec<usize> = rand::seq::index::sample(&mut rng, n, k).into_vec();
        picks.sort_unstable();
        let mut in_a = vec![false; n];
        for &p in &picks {
            in_a[p] = true;
        }
        let members_a: Vec<FeatureVector> =
            picks.iter().map(|&p| pool.members()[p].clone()).collect();
        let members_b: Vec<FeatureVector> = (0..n)
            .filter(|&i| !in_a[i])
            .map(|i| pool.members()[i].clone())
            .collect();
        fold_a.push(ClassPool::new(pool.label().to_string(), members_a)?);
        fold_b.push(ClassPool::new(pool.label().to_string(), members_b)?);
    }

    let points = grid.indexed_points();
    let queries_of = |fold: &[ClassPool]| -> Vec<(FeatureVector, usize)> {
        fold.iter()
            .enumerate()
            .flat_map(|(ci, p)| p.members().iter().map(move |m| (m.clone(), ci)))
            .collect()
    };
    let queries_a = queries_of(&fold_a);
    let queries_b = queries_of(&fold_b);
    let refs_a: Vec<(&FeatureVector, usize)> = queries_a.iter().map(|(f, c)| (f, *c)).collect();
    let refs_b: Vec<(&FeatureVector, usize)> = queries_b.iter().map(|(f, c)| (f, *c)).collect();

    let errors_a = fold_errors(&fold_b, &refs_a, grid, &points, parallel)?;
    let errors_b = fold_errors(&fold_a, &refs_b, grid, &points, parallel)?;
    let total = refs_a.len() + refs_b.len();

    let table: Vec<GridPoint> = points
        .iter()
        .zip(errors_a.iter().zip(&errors_b))
        .map(|((_, params), (ea, eb))| {
            let misclassified = ea + eb;
            GridPoint {
                params: *params,
                misclassified,
                total,
                cv_error: misclassified as f64 / total as f64,
            }
        })
        .collect();

    let mut best = 0;
    for i in 1..table.len() {
        let a = &table[i];
        let b = &table[best];
        let ka = (
            a.cv_error,
            a.params.n_s(),
            a.params.n_ns(),
            a.params.q(),
            a.params.alpha(),
        );
        let kb = (
            b.cv_error,
            b.params.n_s(),
            b.params.n_ns(),
            b.params.q(),
            b.params.alpha(),
        );
        if ka < kb {
            best = i;
        }
    }
    Ok(GridSearchResult {
        best: table[best].clone(),
        table,
    })
}

/// Two-fold cross-validated grid search over `(q, n_s, n_ns, alpha)`.
///
/// Each class pool is halved with the seeded generator; every grid point
/// classifies each half against the other (neighbor counts capped at fold
/// sizes) and is scored by total misclassification. Queries are evaluated
/// in parallel; results are identical to [`two_fold_cv_serial`].
pub fn two_fold_cv(pools: &[ClassPool], grid: &ParamGrid, seed: u64) -> Result<GridSearchResult> {
    cv_impl(pools, grid, seed, true)
}

/// Single-threaded [`two_fold_cv`], for environments where spawning worker
/// threads is undesirable. Produces bit-identical results.
pub fn two_fold_cv_serial(
    pools: &[ClassPool],
    grid: &ParamGrid,
    seed: u64,
) -> Result<GridSearchResult> {
    cv_impl(pools, grid, seed, false)
}

/// Classifies a labeled holdout set and tallies the confusion matrix.
///
/// Every holdout label must name one of the pools; matrix order follows
/// pool order.
pub fn evaluate(
    pools: &[ClassPool],
    params: &QlearParams,
    test: &LabeledDataset,
) -> Result<EvaluationReport> {
    check_pools(pools, true)?;
    if pools.len() < 2 {
        return Err(Error::SingleClass);
    }
    let class_of = |label: &str| -> Result<usize> {
        pools
            .iter()
            .position(|p| p.label() == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    };
    let true_classes: Vec<usize> = test
        .labels()
        .iter()
        .map(|l| class_of(l))
        .collect::<Result<_>>()?;
    let predictions = classify_batch(test.features(), pools, params)?;
    let mut confusion = vec![vec![0usize; pools.len()]; pools.len()];
    for (truth, prediction) in true_classes.iter().zip(&predictions) {
        let predicted = class_of(prediction.label())?;
        confusion[*truth][predicted] += 1;
    }
    let n_samples = test.len();
    let correct: usize = (0..pools.len()).map(|i| confusion[i][i]).sum();
    Ok(EvaluationReport {
        labels: pools.iter().map(|p| p.label().to_string()).collect(),
        confusion,
        n_samples,
        error_rate: 1.0 - correct as f64 / n_samples as f64,
    })
}

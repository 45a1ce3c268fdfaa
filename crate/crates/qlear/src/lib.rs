#![forbid(unsafe_code)]

//! Entropy-change classification over density matrices of class
//! representatives.
//!
//! A set of representative vectors is turned into a symmetric
//! positive-semidefinite, trace-one *density matrix* by accumulating outer
//! products and normalizing by the trace. The eigenvalue spectrum of that
//! matrix is a probability distribution, so it has a Tsallis entropy of any
//! order `q > 0`, `q != 1`. A query vector is classified by how little it
//! disturbs the structure of each class: adding the query's outer product to
//! a class state changes the entropy by `dE`, and the query is assigned to
//! the class minimizing `dE_s - alpha * dE_ns`, where `dE_s` is the change
//! for the nearest same-class representatives and `dE_ns` the change for the
//! nearest representatives of all other classes.
//!
//! The crate provides:
//! - [`density`]: accumulators, density matrices, spectra, Tsallis/Shannon
//!   entropy, Born-rule probabilities;
//! - [`neighbors`]: exact k-nearest-neighbor scans with deterministic
//!   tie-breaking;
//! - [`classifier`]: the entropy-delta decision rules (full scoring rule and
//!   the simplified per-subclass rule);
//! - [`model_selection`]: pool sampling, two-fold cross-validation over a
//!   parameter grid, and holdout evaluation;
//! - [`dataset`]: CSV ingestion, standardization, stratified splitting, toy
//!   generators, and the bundled Iris fixture.

pub mod classifier;
pub mod dataset;
pub mod density;
pub mod error;
pub mod model_selection;
pub mod neighbors;

pub use classifier::{
    class_score, classify, classify_batch, entropy_delta, simple_classify, singleton_subclasses,
    ClassPool, ClassScore, Prediction, QlearParams,
};
pub use dataset::{
    iris, load_csv, load_vectors_csv, make_and, make_blobs, make_xor, CsvOptions, LabelColumn,
    LabeledDataset, StandardizationStats,
};
pub use density::{
    born_probability, born_probability_direction, gram_accumulate, validate_q, DensityMatrix,
    FeatureVector, MeasurementOperator, Spectrum, SymmetricAccumulator,
};
pub use error::{Error, Result};
pub use model_selection::{
    evaluate, pools_from_indices, sample_pools, two_fold_cv, two_fold_cv_serial, EvaluationReport,
    GridPoint, GridSearchResult, ParamGrid,
};
pub use neighbors::{euclidean_distance, k_nearest, NeighborSet};

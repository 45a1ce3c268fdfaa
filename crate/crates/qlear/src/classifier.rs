//! Entropy-change decision rules.
//!
//! Both rules in this module score a query by how much it perturbs density
//! matrices built from class representatives, then pick the class whose
//! state the query disturbs least.
//!
//! * [`classify`] ranks every class by `dE_s − α·dE_ns`: the entropy change
//!   of a state built from the query's nearest same-class representatives,
//!   discounted by the entropy change of a state built from its nearest
//!   other-class representatives.
//! * [`simple_classify`] drops the neighbor selection and the complementary
//!   term: classes are split into subclasses, each carrying its own density
//!   matrix, and the query joins the subclass whose total entropy moves
//!   least.
//!
//! A query aligned with a class's dominant eigendirection can purify the
//! normalized state, so entropy changes may be negative; the argmin is
//! taken over signed values.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{gram_accumulate, validate_q, FeatureVector};
use crate::error::{Error, Result};
use crate::neighbors::k_nearest;

/// A labeled set of representative vectors for one class or subclass.
///
/// Non-empty, with all members sharing one dimension. Several pools may
/// carry the same label when they act as subclasses of one class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ClassPoolSerde", into = "ClassPoolSerde")]
pub struct ClassPool {
    label: String,
    members: Vec<FeatureVector>,
}

impl ClassPool {
    /// Validates and wraps a labeled member list.
    pub fn new(label: impl Into<String>, members: Vec<FeatureVector>) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::InvalidParams("class label is empty".into()));
        }
        let first = match members.first() {
            Some(v) => v,
            None => return Err(Error::EmptyPool { label }),
        };
        let dim = first.dim();
        for m in &members {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: m.dim(),
                });
            }
        }
        Ok(Self { label, members })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn members(&self) -> &[FeatureVector] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassPoolSerde {
    label: String,
    members: Vec<FeatureVector>,
}

impl TryFrom<ClassPoolSerde> for ClassPool {
    type Error = Error;

    fn try_from(raw: ClassPoolSerde) -> Result<Self> {
        Self::new(raw.label, raw.members)
    }
}

impl From<ClassPool> for ClassPoolSerde {
    fn from(pool: ClassPool) -> Self {
        Self {
            label: pool.label,
            members: pool.members,
        }
    }
}

/// Hyperparameters of the entropy-change decision rule.
///
/// `q` is the entropy order, `n_s` the number of same-class neighbors,
/// `n_ns` the number of other-class neighbors, and `alpha` the weight of
/// the complementary term in `dE_s − α·dE_ns`. Neighbor counts cap at the
/// available pool sizes at classification time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QlearParamsSerde", into = "QlearParamsSerde")]
pub struct QlearParams {
    q: f64,
    n_s: usize,
    n_ns: usize,
    alpha: f64,
}

impl QlearParams {
    /// Validates a parameter choice: `q > 0` away from 1, both neighbor
    /// counts at least 1, `alpha` finite and non-negative.
    pub fn new(q: f64, n_s: usize, n_ns: usize, alpha: f64) -> Result<Self> {
        validate_q(q)?;
        if n_s == 0 {
            return Err(Error::InvalidParams(
                "same-class neighbor count must be at least 1".into(),
            ));
        }
        if n_ns == 0 {
            return Err(Error::InvalidParams(
                "other-class neighbor count must be at least 1".into(),
            ));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParams(format!(
                "alpha must be finite and non-negative, got {alpha}"
            )));
        }
        Ok(Self {
            q,
            n_s,
            n_ns,
            alpha,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn n_ns(&self) -> usize {
        self.n_ns
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QlearParamsSerde {
    q: f64,
    n_s: usize,
    n_ns: usize,
    alpha: f64,
}

impl TryFrom<QlearParamsSerde> for QlearParams {
    type Error = Error;

    fn try_from(raw: QlearParamsSerde) -> Result<Self> {
        Self::new(raw.q, raw.n_s, raw.n_ns, raw.alpha)
    }
}

impl From<QlearParams> for QlearParamsSerde {
    fn from(p: QlearParams) -> Self {
        Self {
            q: p.q,
            n_s: p.n_s,
            n_ns: p.n_ns,
            alpha: p.alpha,
        }
    }
}

/// One class's entry in a ranking: the two entropy changes and their
/// weighted combination `score = de_s − α·de_ns`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassScore {
    label: String,
    de_s: f64,
    de_ns: f64,
    score: f64,
}

impl ClassScore {
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Entropy change of the same-class state when the query joins it.
    pub fn de_s(&self) -> f64 {
        self.de_s
    }

    /// Entropy change of the complementary (other-class) state.
    pub fn de_ns(&self) -> f64 {
        self.de_ns
    }

    /// The ranking value `de_s − α·de_ns`; lower is better.
    pub fn score(&self) -> f64 {
        self.score
    }
}

/// The outcome of classifying one query: the winning label plus the full
/// per-pool ranking, in pool order.
///
/// The label belongs to a pool attaining the minimal score. Exact ties are
/// resolved by the producing operation: [`classify`] keeps the earliest
/// pool, [`simple_classify`] prefers the tied subclass with the nearest
/// representative (then the earliest).
#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    label: String,
    scores: Vec<ClassScore>,
}

impl Prediction {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn scores(&self) -> &[ClassScore] {
        &self.scores
    }
}

/// Entropy change of order `q` when `query` joins the state accumulated
/// from `reference`.
///
/// Both states are trace-normalized before their entropies are compared,
/// so the result is the change in mixedness, not in magnitude: adding a
/// vector collinear with a pure state leaves it exactly at zero entropy,
/// while any new direction mixes the spectrum. The value may be negative
/// when the query reinforces the dominant eigendirection of an already
/// mixed state.
pub fn entropy_delta(reference: &[FeatureVector], query: &FeatureVector, q: f64) -> Result<f64> {
    validate_q(q)?;
    let acc = gram_accumulate(reference)?;
    if query.dim() != acc.dim() {
        return Err(Error::DimensionMismatch {
            expected: acc.dim(),
            got: query.dim(),
        });
    }
    let before = acc.to_density()?.spectrum()?.tsallis(q)?;
    let mut with_query = acc;
    with_query.add(query)?;
    let after = with_query.to_density()?.spectrum()?.tsallis(q)?;
    Ok(after - before)
}

/// Checks a pool collection: non-empty, dimension-consistent, and (when
/// `distinct_labels`) free of repeated labels. Returns the shared dimension.
pub(crate) fn check_pools(pools: &[ClassPool], distinct_labels: bool) -> Result<usize> {
    let first = pools.first().ok_or(Error::EmptyInput)?;
    let dim = first.dim();
    for pool in pools {
        if pool.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: pool.dim(),
            });
        }
    }
    if distinct_labels {
        for (i, pool) in pools.iter().enumerate() {
            if pools[..i].iter().any(|p| p.label() == pool.label()) {
                return Err(Error::DuplicateLabel(pool.label().to_string()));
            }
        }
    }
    Ok(dim)
}

fn check_query_dim(query: &FeatureVector, dim: usize) -> Result<()> {
    if query.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: query.dim(),
        });
    }
    Ok(())
}

/// Scores one class against a query.
///
/// `dE_s` uses the query's `n_s` nearest members of the class's own pool;
/// `dE_ns` uses its `n_ns` nearest members of the union of all other
/// pools, ranked jointly by distance with ties broken by pool order then
/// member index. Both counts cap at what is available. Selected
/// representatives are accumulated nearest-first, so repeated calls are
/// bit-for-bit reproducible.
pub fn class_score(
    query: &FeatureVector,
    pools: &[ClassPool],
    class_index: usize,
    params: &QlearParams,
) -> Result<ClassScore> {
    let dim = check_pools(pools, true)?;
    if pools.len() < 2 {
        return Err(Error::SingleClass);
    }
    check_query_dim(query, dim)?;
    if class_index >= pools.len() {
        return Err(Error::InvalidParams(format!(
            "class index {class_index} out of range for {} pools",
            pools.len()
        )));
    }
    class_score_checked(query, pools, class_index, params)
}

/// [`class_score`] without the collection-level validation; callers have
/// already checked the pools and the query dimension.
fn class_score_checked(
    query: &FeatureVector,
    pools: &[ClassPool],
    class_index: usize,
    params: &QlearParams,
) -> Result<ClassScore> {
    let own = &pools[class_index];
    let k_own = params.n_s().min(own.len());
    let nearest_own = k_nearest(query, own.members(), k_own)?;
    let own_selected: Vec<FeatureVector> = nearest_own
        .indices()
        .iter()
        .map(|&i| own.members()[i].clone())
        .collect();

    let union: Vec<FeatureVector> = pools
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != class_index)
        .flat_map(|(_, p)| p.members().iter().cloned())
        .collect();
    let k_other = params.n_ns().min(union.len());
    let nearest_other = k_nearest(query, &union, k_other)?;
    let other_selected: Vec<FeatureVector> = nearest_other
        .indices()
        .iter()
        .map(|&i| union[i].clone())
        .collect();

    let de_s = entropy_delta(&own_selected, query, params.q())?;
    let de_ns = entropy_delta(&other_selected, query, params.q())?;
    Ok(ClassScore {
        label: own.label().to_string(),
        de_s,
        de_ns,
        score: de_s - params.alpha() * de_ns,
    })
}

/// Labels a query with the class whose score `dE_s − α·dE_ns` is minimal.
///
/// Requires at least two pools with distinct labels. Exact score ties go
/// to the earliest pool; a zero query perturbs nothing, ties every class
/// at zero, and so lands in the first pool.
pub fn classify(
    query: &FeatureVector,
    pools: &[ClassPool],
    params: &QlearParams,
) -> Result<Prediction> {
    let dim = check_pools(pools, true)?;
    if pools.len() < 2 {
        return Err(Error::SingleClass);
    }
    check_query_dim(query, dim)?;
    classify_checked(query, pools, params)
}

fn classify_checked(
    query: &FeatureVector,
    pools: &[ClassPool],
    params: &QlearParams,
) -> Result<Prediction> {
    let scores: Vec<ClassScore> = (0..pools.len())
        .map(|i| class_score_checked(query, pools, i, params))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for i in 1..scores.len() {
        if scores[i].score < scores[best].score {
            best = i;
        }
    }
    Ok(Prediction {
        label: scores[best].label.clone(),
        scores,
    })
}

/// Classifies every query against the same pools.
///
/// Output order matches input order and is identical across serial,
/// parallel, and repeated runs. A failing element reports its input index;
/// when several fail, the lowest index is reported.
pub fn classify_batch(
    queries: &[FeatureVector],
    pools: &[ClassPool],
    params: &QlearParams,
) -> Result<Vec<Prediction>> {
    let dim = check_pools(pools, true)?;
    if pools.len() < 2 {
        return Err(Error::SingleClass);
    }
    let outcomes: Vec<Result<Prediction>> = queries
        .par_iter()
        .map(|query| {
            check_query_dim(query, dim)?;
            classify_checked(query, pools, params)
        })
        .collect();
    let mut predictions = Vec::with_capacity(outcomes.len());
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(p) => predictions.push(p),
            Err(e) => {
                return Err(Error::SampleFailed {
                    index,
                    source: Box::new(e),
                })
            }
        }
    }
    Ok(predictions)
}

/// Labels a query by minimal total-entropy change over subclasses.
///
/// Each subclass pool carries its own density matrix; the total entropy of
/// the system is the sum over subclasses. Adding the query to subclass `j`
/// changes only term `j`, so the subclass minimizing the new total is the
/// one minimizing its own entropy change, and that is what is computed.
/// The winning subclass's label (several subclasses may share one) names
/// the class.
///
/// Opposite-sign representatives produce identical density matrices and
/// therefore exact entropy ties; tied subclasses are ranked by the
/// distance from the query to their nearest member, then by subclass
/// order.
pub fn simple_classify(
    query: &FeatureVector,
    subclasses: &[ClassPool],
    q: f64,
) -> Result<Prediction> {
    let dim = check_pools(subclasses, false)?;
    check_query_dim(query, dim)?;
    validate_q(q)?;

    let mut scores = Vec::with_capacity(subclasses.len());
    let mut nearest = Vec::with_capacity(subclasses.len());
    for pool in subclasses {
        let delta = entropy_delta(pool.members(), query, q)?;
        scores.push(ClassScore {
            label: pool.label().to_string(),
            de_s: delta,
            de_ns: 0.0,
            score: delta,
        });
        nearest.push(k_nearest(query, pool.members(), 1)?.distances()[0]);
    }
    let mut best = 0;
    for j in 1..scores.len() {
        let closer_tie = scores[j].score == scores[best].score && nearest[j] < nearest[best];
        if scores[j].score < scores[best].score || closer_tie {
            best = j;
        }
    }
    Ok(Prediction {
        label: scores[best].label.clone(),
        scores,
    })
}

/// Splits pools into singleton subclasses: one pool per representative,
/// keeping the parent label and the original order.
pub fn singleton_subclasses(pools: &[ClassPool]) -> Vec<ClassPool> {
    pools
        .iter()
        .flat_map(|pool| {
            pool.members().iter().map(|m| ClassPool {
                label: pool.label().to_string(),
                members: vec![m.clone()],
            })
        })
        .collect()
}

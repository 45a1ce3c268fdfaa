//! Randomized invariant checks for the density pipeline, the neighbor
//! ranking, and the decision rules.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use qlear::{
    born_probability_direction, classify, classify_batch, entropy_delta, euclidean_distance,
    gram_accumulate, k_nearest, simple_classify, two_fold_cv, two_fold_cv_serial, ClassPool,
    FeatureVector, ParamGrid, QlearParams, Spectrum,
};

fn fv(components: &[f64]) -> FeatureVector {
    FeatureVector::new(components.to_vec()).unwrap()
}

/// `count` random vectors of one shared dimension, none degenerately small.
fn vectors(dim: usize, count: std::ops::RangeInclusive<usize>) -> BoxedStrategy<Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-3.0f64..3.0, dim..=dim), count)
        .prop_filter("vectors must not collapse to zero", |vs| {
            vs.iter()
                .all(|v| v.iter().map(|x| x * x).sum::<f64>() > 1e-6)
        })
        .boxed()
}

/// A dimension together with a vector set of that dimension.
fn sized_vectors() -> impl Strategy<Value = (usize, Vec<Vec<f64>>)> {
    (2usize..=4).prop_flat_map(|d| (Just(d), vectors(d, 1..=8)))
}

/// A valid probability spectrum of dimension 1 to 6.
fn spectra() -> impl Strategy<Value = Spectrum> {
    prop::collection::vec(0.001f64..1.0, 1..=6).prop_map(|raw| {
        let sum: f64 = raw.iter().sum();
        Spectrum::new(raw.into_iter().map(|x| x / sum).collect()).unwrap()
    })
}

/// An entropy order bounded away from the excluded value 1.
fn orders() -> impl Strategy<Value = f64> {
    prop_oneof![0.03f64..0.99, 1.01f64..5.0]
}

/// A two-class problem: two pools of one dimension plus a query.
#[allow(clippy::type_complexity)]
fn two_class_problem() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>)> {
    (2usize..=3).prop_flat_map(|d| {
        (
            vectors(d, 2..=5),
            vectors(d, 2..=5),
            prop::collection::vec(-3.0f64..3.0, d..=d),
        )
    })
}

fn pools_of(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<ClassPool> {
    vec![
        ClassPool::new("A", a.iter().map(|v| fv(v)).collect()).unwrap(),
        ClassPool::new("B", b.iter().map(|v| fv(v)).collect()).unwrap(),
    ]
}

/// An orthogonal matrix derived from random entries.
fn rotation(dim: usize, entries: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| entries[i * dim + j])
        .qr()
        .q()
}

proptest! {
    #[test]
    fn density_spectra_are_probability_distributions((_, vs) in sized_vectors()) {
        let vectors: Vec<FeatureVector> = vs.iter().map(|v| fv(v)).collect();
        let rho = gram_accumulate(&vectors).unwrap().to_density().unwrap();
        prop_assert!((rho.trace() - 1.0).abs() <= 1e-12);
        let spectrum = rho.spectrum().unwrap();
        let eigs = spectrum.eigenvalues();
        prop_assert!(eigs.iter().all(|&p| (0.0..=1.0).contains(&p)));
        prop_assert!(eigs.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((eigs.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn single_direction_states_have_no_entropy(
        (_, vs) in sized_vectors(),
        scale in 0.1f64..10.0,
    ) {
        // One vector, any length: the state is pure and entropy vanishes
        // for every order.
        let v = fv(&vs[0]).normalized().unwrap();
        let scaled = fv(&v.components().iter().map(|c| c * scale).collect::<Vec<_>>());
        let s = gram_accumulate(&[scaled]).unwrap().to_density().unwrap().spectrum().unwrap();
        for q in [0.03, 0.5, 2.0, 5.0] {
            prop_assert!(s.tsallis(q).unwrap() <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1024, ..ProptestConfig::default() })]

    #[test]
    fn uniform_spectrum_attains_the_entropy_maximum(
        s in spectra(),
        q in orders(),
    ) {
        let n = s.dim();
        let uniform = Spectrum::new(vec![1.0 / n as f64; n]).unwrap();
        let max = (1.0 - (n as f64).powf(1.0 - q)) / (q - 1.0);
        prop_assert!((uniform.tsallis(q).unwrap() - max).abs() <= 1e-10);
        prop_assert!(s.tsallis(q).unwrap() <= max + 1e-10);
    }

    #[test]
    fn neighbor_ranking_matches_selection_oracle(
        (pool, query) in (1usize..=20).prop_flat_map(|d| {
            (
                prop::collection::vec(prop::collection::vec(-5.0f64..5.0, d..=d), 1..=200),
                prop::collection::vec(-5.0f64..5.0, d..=d),
            )
        }),
    ) {
        let pool: Vec<FeatureVector> = pool.iter().map(|v| fv(v)).collect();
        let query = fv(&query);

        // Independent oracle: repeated minimum extraction.
        let mut remaining: Vec<usize> = (0..pool.len()).collect();
        let mut oracle = Vec::with_capacity(pool.len());
        while !remaining.is_empty() {
            let mut best = 0;
            for pos in 1..remaining.len() {
                let d_pos = euclidean_distance(&query, &pool[remaining[pos]]).unwrap();
                let d_best = euclidean_distance(&query, &pool[remaining[best]]).unwrap();
                if d_pos < d_best {
                    best = pos;
                }
            }
            oracle.push(remaining.remove(best));
        }

        let full = k_nearest(&query, &pool, pool.len()).unwrap();
        prop_assert_eq!(full.indices(), &oracle[..]);
        for k in 1..=pool.len() {
            let head = k_nearest(&query, &pool, k).unwrap();
            prop_assert_eq!(head.indices(), &full.indices()[..k]);
        }
    }
}

proptest! {
    #[test]
    fn entropy_is_continuous_across_order_one(s in spectra()) {
        let shannon = s.shannon();
        for q in [1.0 - 1e-5, 1.0 + 1e-5] {
            prop_assert!((s.tsallis(q).unwrap() - shannon).abs() <= 1e-4);
        }
    }

    #[test]
    fn entropy_is_rotation_invariant(
        (d, vs) in sized_vectors(),
        entries in prop::collection::vec(-1.0f64..1.0, 16),
        q in orders(),
    ) {
        let r = rotation(d, &entries);
        let originals: Vec<FeatureVector> = vs.iter().map(|v| fv(v)).collect();
        let rotated: Vec<FeatureVector> = vs
            .iter()
            .map(|v| {
                let rv = &r * DVector::from_column_slice(v);
                fv(rv.as_slice())
            })
            .collect();
        let e1 = gram_accumulate(&originals).unwrap().to_density().unwrap()
            .spectrum().unwrap().tsallis(q).unwrap();
        let e2 = gram_accumulate(&rotated).unwrap().to_density().unwrap()
            .spectrum().unwrap().tsallis(q).unwrap();
        prop_assert!((e1 - e2).abs() <= 1e-9);
    }

    #[test]
    fn born_probabilities_sum_to_one_over_a_basis(
        (d, vs) in sized_vectors(),
        entries in prop::collection::vec(-1.0f64..1.0, 16),
    ) {
        let rho = gram_accumulate(&vs.iter().map(|v| fv(v)).collect::<Vec<_>>())
            .unwrap()
            .to_density()
            .unwrap();
        let basis = rotation(d, &entries);
        let total: f64 = (0..d)
            .map(|k| {
                let column = fv(basis.column(k).as_slice());
                born_probability_direction(&rho, &column).unwrap()
            })
            .sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn scores_compose_from_their_parts((a, b, query) in two_class_problem()) {
        let pools = pools_of(&a, &b);
        let params = QlearParams::new(1.78, 2, 1, 0.75).unwrap();
        let p = classify(&fv(&query), &pools, &params).unwrap();
        for s in p.scores() {
            prop_assert_eq!(s.score(), s.de_s() - params.alpha() * s.de_ns());
        }
        let zero_alpha = QlearParams::new(1.78, 2, 1, 0.0).unwrap();
        let p = classify(&fv(&query), &pools, &zero_alpha).unwrap();
        for s in p.scores() {
            prop_assert_eq!(s.score(), s.de_s());
        }
    }

    #[test]
    fn labels_are_scale_invariant((a, b, query) in two_class_problem()) {
        let pools = pools_of(&a, &b);
        let params = QlearParams::new(2.0, 2, 1, 0.5).unwrap();
        let base = classify(&fv(&query), &pools, &params).unwrap();
        let mut scores: Vec<f64> = base.scores().iter().map(|s| s.score()).collect();
        scores.sort_by(f64::total_cmp);
        prop_assume!(scores[1] - scores[0] > 1e-9);

        for c in [1e-3, 0.5, 7.0, 1e3] {
            let scale =
                |vs: &[Vec<f64>]| vs.iter().map(|v| v.iter().map(|x| x * c).collect()).collect::<Vec<Vec<f64>>>();
            let scaled_pools = pools_of(&scale(&a), &scale(&b));
            let scaled_query: Vec<f64> = query.iter().map(|x| x * c).collect();
            let scaled = classify(&fv(&scaled_query), &scaled_pools, &params).unwrap();
            prop_assert_eq!(scaled.label(), base.label());
        }
    }

    #[test]
    fn pool_order_permutation_preserves_the_decision((a, b, query) in two_class_problem()) {
        let params = QlearParams::new(0.5, 2, 2, 0.25).unwrap();
        let forward = classify(&fv(&query), &pools_of(&a, &b), &params).unwrap();
        let mut scores: Vec<f64> = forward.scores().iter().map(|s| s.score()).collect();
        scores.sort_by(f64::total_cmp);
        prop_assume!(scores[1] - scores[0] > 1e-9);

        let swapped_pools = {
            let mut p = pools_of(&a, &b);
            p.swap(0, 1);
            p
        };
        let swapped = classify(&fv(&query), &swapped_pools, &params).unwrap();
        prop_assert_eq!(swapped.label(), forward.label());
        for s in forward.scores() {
            let twin = swapped
                .scores()
                .iter()
                .find(|t| t.label() == s.label())
                .unwrap();
            prop_assert!((twin.score() - s.score()).abs() <= 1e-12);
        }
    }

    #[test]
    fn batch_matches_element_wise_classification((a, b, _) in two_class_problem()) {
        let pools = pools_of(&a, &b);
        let params = QlearParams::new(1.22, 3, 2, 1.0).unwrap();
        let queries: Vec<FeatureVector> = a.iter().chain(&b).map(|v| fv(v)).collect();
        let batch = classify_batch(&queries, &pools, &params).unwrap();
        let singles: Vec<_> = queries
            .iter()
            .map(|q| classify(q, &pools, &params).unwrap())
            .collect();
        prop_assert_eq!(&batch, &singles);
        let again = classify_batch(&queries, &pools, &params).unwrap();
        prop_assert_eq!(&batch, &again);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, ..ProptestConfig::default() })]

    #[test]
    fn subclass_rule_matches_total_entropy_recomputation(
        (subclass_vectors, query) in (2usize..=3).prop_flat_map(|d| {
            (
                prop::collection::vec(vectors(d, 1..=3), 2..=5),
                prop::collection::vec(-3.0f64..3.0, d..=d),
            )
        }),
        q in orders(),
    ) {
        // Subclass labels map many-to-one onto two classes.
        let subclasses: Vec<ClassPool> = subclass_vectors
            .iter()
            .enumerate()
            .map(|(j, vs)| {
                ClassPool::new(format!("c{}", j % 2), vs.iter().map(|v| fv(v)).collect()).unwrap()
            })
            .collect();
        let query = fv(&query);

        // Require a clear winner so float reassociation cannot flip it.
        let mut deltas: Vec<f64> = subclasses
            .iter()
            .map(|p| entropy_delta(p.members(), &query, q).unwrap())
            .collect();
        let fast = simple_classify(&query, &subclasses, q).unwrap();
        deltas.sort_by(f64::total_cmp);
        prop_assume!(deltas[1] - deltas[0] > 1e-9);

        // Oracle: recompute the full total entropy with the query added to
        // each subclass in turn and take the argmin of the totals.
        let baseline: Vec<f64> = subclasses
            .iter()
            .map(|p| {
                gram_accumulate(p.members()).unwrap().to_density().unwrap()
                    .spectrum().unwrap().tsallis(q).unwrap()
            })
            .collect();
        let baseline_total: f64 = baseline.iter().sum();
        let mut best = 0;
        let mut best_total = f64::INFINITY;
        for (j, pool) in subclasses.iter().enumerate() {
            let mut acc = gram_accumulate(pool.members()).unwrap();
            acc.add(&query).unwrap();
            let grown = acc.to_density().unwrap().spectrum().unwrap().tsallis(q).unwrap();
            let total = baseline_total - baseline[j] + grown;
            if total < best_total {
                best_total = total;
                best = j;
            }
        }
        prop_assert_eq!(fast.label(), subclasses[best].label());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn grid_search_is_reproducible_and_schedule_independent(
        (a, b, _) in two_class_problem(),
        seed in any::<u64>(),
    ) {
        let pools = pools_of(&a, &b);
        let grid = ParamGrid::new(vec![2.0, 0.5], vec![1, 2], vec![1], vec![0.0, 0.5]).unwrap();
        let first = two_fold_cv(&pools, &grid, seed).unwrap();
        let second = two_fold_cv(&pools, &grid, seed).unwrap();
        let serial = two_fold_cv_serial(&pools, &grid, seed).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(&first, &serial);
        prop_assert_eq!(first.table().len(), grid.len());
    }
}

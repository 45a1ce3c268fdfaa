//! Exact nearest-neighbor queries over small in-memory pools.
//!
//! Class pools in this library hold at most a few hundred representatives,
//! so neighbors are found by a full scan and sort rather than a spatial
//! index. Ranking is deterministic: ties in distance are broken by the
//! lower pool index, and the `k` nearest are always a prefix of the
//! `k + 1` nearest.

use crate::density::FeatureVector;
use crate::error::{Error, Result};

/// Euclidean distance between two points of equal dimension.
pub fn euclidean_distance(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let sum: f64 = a
        .components()
        .iter()
        .zip(b.components())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum.sqrt())
}

/// The `k` nearest members of a pool, closest first.
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborSet {
    indices: Vec<usize>,
    distances: Vec<f64>,
}

impl NeighborSet {
    /// Pool indices in ranked order.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Distances in ranked order; parallel to [`Self::indices`].
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Ranked `(pool index, distance)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices
            .iter()
            .copied()
            .zip(self.distances.iter().copied())
    }
}

/// Ranks the whole pool by distance to `query` and keeps the `k` closest.
///
/// Requires `1 <= k <= pool.len()`. Equidistant members rank by ascending
/// pool index, so the result is a deterministic prefix of the full ranking.
pub fn k_nearest(query: &FeatureVector, pool: &[FeatureVector], k: usize) -> Result<NeighborSet> {
    if k == 0 {
        return Err(Error::InvalidParams(
            "neighbor count must be at least 1".into(),
        ));
    }
    if k > pool.len() {
        return Err(Error::KTooLarge {
            k,
            pool: pool.len(),
        });
    }
    let mut ranked: Vec<(usize, f64)> = pool
        .iter()
        .enumerate()
        .map(|(i, v)| euclidean_distance(query, v).map(|d| (i, d)))
        .collect::<Result<_>>()?;
    ranked.sort_unstable_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    ranked.truncate(k);
    let (indices, distances) = ranked.into_iter().unzip();
    Ok(NeighborSet { indices, distances })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(components: &[f64]) -> FeatureVector {
        FeatureVector::new(components.to_vec()).unwrap()
    }

    #[test]
    fn distance_matches_pythagoras() {
        let d = euclidean_distance(&fv(&[0.0, 0.0]), &fv(&[3.0, 4.0])).unwrap();
        assert_eq!(d, 5.0);
    }

    #[test]
    fn distance_rejects_mixed_dims() {
        let r = euclidean_distance(&fv(&[0.0]), &fv(&[0.0, 1.0]));
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn nearest_are_sorted_by_distance() {
        let pool = [fv(&[5.0]), fv(&[1.0]), fv(&[3.0])];
        let n = k_nearest(&fv(&[0.0]), &pool, 3).unwrap();
        assert_eq!(n.indices(), &[1, 2, 0]);
        assert_eq!(n.distances(), &[1.0, 3.0, 5.0]);
    }

    #[test]
    fn equidistant_members_rank_by_index() {
        let pool = [fv(&[1.0, 0.0]), fv(&[-1.0, 0.0]), fv(&[0.0, 1.0])];
        let n = k_nearest(&fv(&[0.0, 0.0]), &pool, 3).unwrap();
        assert_eq!(n.indices(), &[0, 1, 2]);
    }

    #[test]
    fn smaller_k_is_a_prefix_of_larger_k() {
        let pool = [fv(&[2.0]), fv(&[-2.0]), fv(&[1.0]), fv(&[4.0])];
        let full = k_nearest(&fv(&[0.0]), &pool, 4).unwrap();
        for k in 1..4 {
            let head = k_nearest(&fv(&[0.0]), &pool, k).unwrap();
            assert_eq!(head.indices(), &full.indices()[..k]);
            assert_eq!(head.distances(), &full.distances()[..k]);
        }
    }

    #[test]
    fn oversized_k_is_rejected() {
        let pool = [fv(&[0.0])];
        assert!(matches!(
            k_nearest(&fv(&[1.0]), &pool, 2),
            Err(Error::KTooLarge { k: 2, pool: 1 })
        ));
        assert!(matches!(
            k_nearest(&fv(&[1.0]), &[], 1),
            Err(Error::KTooLarge { k: 1, pool: 0 })
        ));
        assert!(matches!(
            k_nearest(&fv(&[1.0]), &pool, 0),
            Err(Error::InvalidParams(_))
        ));
    }
}

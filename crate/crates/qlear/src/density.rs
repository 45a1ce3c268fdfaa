//! Density matrices and entropies.
//!
//! The quantum-mechanical bookkeeping behind the classifier: feature vectors
//! are accumulated into a symmetric Gram matrix `A = Σ v vᵀ`, normalized by
//! the trace into a density matrix `ρ` (symmetric, positive semidefinite,
//! trace one), whose eigenvalue spectrum is a probability distribution.
//! Entropies of order `q` are evaluated on that spectrum, and Born-rule
//! probabilities `trace(ρ m)` expose the underlying measurement model.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for flushing and clamping eigenvalues of a density
/// matrix. Eigenvalues within `EIGENVALUE_TOLERANCE * max(1, λ_max)` of zero
/// are treated as exact zeros: rank-deficient Gram matrices always carry
/// eigensolver noise of either sign, and for small `q` even a `1e-16` ghost
/// eigenvalue would contribute visibly to `Σ p^q`.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-10;

/// A clamped spectrum is renormalized to unit sum when it deviates by more
/// than this.
pub const SPECTRUM_SUM_TOLERANCE: f64 = 1e-12;

/// Acceptable deviation of a density matrix trace from 1.
pub const TRACE_TOLERANCE: f64 = 1e-12;

/// The entropy order must stay away from the removable singularity at
/// `q = 1` by more than this.
pub const Q_ONE_TOLERANCE: f64 = 1e-9;

/// Acceptable deviation from unit norm for projector directions.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-9;

/// Acceptable asymmetry for matrices supplied row-wise; accepted input is
/// symmetrized exactly before use.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Iteration cap for the symmetric eigensolver; exceeding it reports
/// [`Error::EigensolverFailure`].
const EIGEN_MAX_ITERATIONS: usize = 10_000;

/// A point in feature space. Components are finite; the dimension is at
/// least 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FeatureVector {
    components: Vec<f64>,
}

impl FeatureVector {
    /// Validates and wraps a component list.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyInput);
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(Self { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Unit-normalized copy, for the optional normalized state preparation.
    /// A zero vector has no direction and is rejected.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroTrace);
        }
        Self::new(self.components.iter().map(|c| c / n).collect())
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = Error;

    fn try_from(components: Vec<f64>) -> Result<Self> {
        Self::new(components)
    }
}

impl From<FeatureVector> for Vec<f64> {
    fn from(v: FeatureVector) -> Self {
        v.components
    }
}

/// Running sum of outer products `Σ v vᵀ`. Storage is exactly symmetric:
/// each product is computed once and written to both triangles.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricAccumulator {
    entries: DMatrix<f64>,
    total_weight: f64,
}

impl SymmetricAccumulator {
    /// An empty accumulator of the given dimension.
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Self {
            entries: DMatrix::zeros(dim, dim),
            total_weight: 0.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Sum of squared norms of the accumulated vectors.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Sum of diagonal entries; equals `total_weight` up to rounding.
    pub fn trace(&self) -> f64 {
        self.entries.diagonal().sum()
    }

    /// Adds one vector's outer product.
    pub fn add(&mut self, v: &FeatureVector) -> Result<()> {
        let d = self.dim();
        if v.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: v.dim(),
            });
        }
        let c = v.components();
        for i in 0..d {
            for j in i..d {
                let updated = self.entries[(i, j)] + c[i] * c[j];
                self.entries[(i, j)] = updated;
                if i != j {
                    self.entries[(j, i)] = updated;
                }
            }
        }
        self.total_weight += c.iter().map(|x| x * x).sum::<f64>();
        Ok(())
    }

    /// Trace-normalizes the accumulated state.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let trace = self.trace();
        if !trace.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        if trace <= 0.0 {
            return Err(Error::ZeroTrace);
        }
        Ok(DensityMatrix {
            entries: &self.entries / trace,
        })
    }
}

/// Accumulates the outer products of a non-empty, dimension-consistent list.
pub fn gram_accumulate(vectors: &[FeatureVector]) -> Result<SymmetricAccumulator> {
    let first = vectors.first().ok_or(Error::EmptyInput)?;
    let mut acc = SymmetricAccumulator::new(first.dim())?;
    for v in vectors {
        acc.add(v)?;
    }
    Ok(acc)
}

/// A symmetric, positive-semidefinite matrix with unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<f64>,
}

impl DensityMatrix {
    /// Validates an explicit matrix: square, finite, symmetric within
    /// [`SYMMETRY_TOLERANCE`] (then symmetrized exactly), trace within
    /// [`TRACE_TOLERANCE`] of 1, and positive semidefinite within
    /// [`EIGENVALUE_TOLERANCE`].
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::EmptyInput);
        }
        for row in rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteInput);
            }
        }
        let mut entries = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                if (rows[i][j] - rows[j][i]).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::NotSymmetric);
                }
                let sym = 0.5 * (rows[i][j] + rows[j][i]);
                entries[(i, j)] = sym;
                entries[(j, i)] = sym;
            }
        }
        let trace = entries.diagonal().sum();
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidTrace { trace });
        }
        let eigs = symmetric_eigenvalues(&entries)?;
        let max_eig = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -EIGENVALUE_TOLERANCE * max_eig.max(1.0) {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_eig,
            });
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().sum()
    }

    /// Eigenvalue spectrum: flushed, clamped to `[0, 1]`, renormalized to
    /// unit sum when needed, sorted descending.
    pub fn spectrum(&self) -> Result<Spectrum> {
        let mut eigs = symmetric_eigenvalues(&self.entries)?;
        let max_eig = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let flush = EIGENVALUE_TOLERANCE * max_eig.max(1.0);
        for e in &mut eigs {
            *e = if e.abs() <= flush {
                0.0
            } else {
                e.clamp(0.0, 1.0)
            };
        }
        let sum: f64 = eigs.iter().sum();
        if sum <= 0.0 {
            return Err(Error::ZeroTrace);
        }
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOLERANCE {
            for e in &mut eigs {
                *e /= sum;
            }
        }
        eigs.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(Spectrum { eigenvalues: eigs })
    }
}

/// Eigenvalues of a symmetric matrix. Dimensions 1 and 2 use exact closed
/// forms; larger matrices use the iterative symmetric eigensolver.
fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    match m.nrows() {
        1 => Ok(vec![m[(0, 0)]]),
        2 => {
            let (a, b, c) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
            let half_trace = 0.5 * (a + c);
            let disc = 0.5 * ((a - c) * (a - c) + 4.0 * b * b).sqrt();
            Ok(vec![half_trace + disc, half_trace - disc])
        }
        _ => {
            let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_ITERATIONS)
                .ok_or(Error::EigensolverFailure)?;
            Ok(eig.eigenvalues.iter().cloned().collect())
        }
    }
}

/// A probability distribution over orthonormal states: the eigenvalues of a
/// density matrix, sorted descending.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Wraps an explicit probability vector. Entries may deviate from
    /// `[0, 1]` by at most [`SPECTRUM_SUM_TOLERANCE`] (and are clamped); the
    /// sum must be within `1e-10` of 1.
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut eigenvalues = Vec::with_capacity(probabilities.len());
        for &p in &probabilities {
            if !p.is_finite()
                || !(-SPECTRUM_SUM_TOLERANCE..=1.0 + SPECTRUM_SUM_TOLERANCE).contains(&p)
            {
                return Err(Error::InvalidParams(format!(
                    "spectrum entry {p} is not a probability"
                )));
            }
            eigenvalues.push(p.clamp(0.0, 1.0));
        }
        let sum: f64 = eigenvalues.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParams(format!(
                "spectrum sums to {sum}, not 1"
            )));
        }
        eigenvalues.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(Self { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Tsallis entropy of order `q`: `(Σ p_i^q − 1) / (1 − q)` with the
    /// convention `0^q = 0`. Requires `q > 0` and `|q − 1| >`
    /// [`Q_ONE_TOLERANCE`].
    pub fn tsallis(&self, q: f64) -> Result<f64> {
        validate_q(q)?;
        let power_sum: f64 = self
            .eigenvalues
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p.powf(q))
            .sum();
        Ok((power_sum - 1.0) / (1.0 - q))
    }

    /// Shannon entropy `−Σ p ln p`, the `q → 1` limit of [`Self::tsallis`].
    pub fn shannon(&self) -> f64 {
        -self
            .eigenvalues
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln())
            .sum::<f64>()
    }
}

/// Checks that an entropy order is usable.
pub fn validate_q(q: f64) -> Result<()> {
    if !q.is_finite() || q <= 0.0 || (q - 1.0).abs() <= Q_ONE_TOLERANCE {
        return Err(Error::InvalidQ(q));
    }
    Ok(())
}

/// A measurement outcome: a symmetric positive-semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOperator {
    entries: DMatrix<f64>,
}

impl MeasurementOperator {
    /// Validates an explicit operator: square, finite, symmetric within
    /// [`SYMMETRY_TOLERANCE`], positive semidefinite within
    /// [`EIGENVALUE_TOLERANCE`].
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::EmptyInput);
        }
        for row in rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteInput);
            }
        }
        let mut entries = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                if (rows[i][j] - rows[j][i]).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::NotSymmetric);
                }
                let sym = 0.5 * (rows[i][j] + rows[j][i]);
                entries[(i, j)] = sym;
                entries[(j, i)] = sym;
            }
        }
        let eigs = symmetric_eigenvalues(&entries)?;
        let max_eig = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -EIGENVALUE_TOLERANCE * max_eig.abs().max(1.0) {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_eig,
            });
        }
        Ok(Self { entries })
    }

    /// The rank-one projector `a aᵀ` for a unit direction `a`.
    pub fn from_direction(a: &FeatureVector) -> Result<Self> {
        check_unit(a)?;
        let c = a.components();
        let d = a.dim();
        let mut entries = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let p = c[i] * c[j];
                entries[(i, j)] = p;
                entries[(j, i)] = p;
            }
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

fn check_unit(a: &FeatureVector) -> Result<()> {
    let norm = a.norm();
    if (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
        return Err(Error::NonUnitVector { norm });
    }
    Ok(())
}

/// Born-rule probability `trace(ρ m)` of observing outcome `m` in state `ρ`.
pub fn born_probability(rho: &DensityMatrix, m: &MeasurementOperator) -> Result<f64> {
    if rho.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: m.dim(),
        });
    }
    let d = rho.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            sum += rho.entries[(i, j)] * m.entries[(j, i)];
        }
    }
    Ok(sum)
}

/// Born-rule probability for the projector on a unit direction `a`:
/// `aᵀ ρ a`, the squared-cosine overlap with the state.
pub fn born_probability_direction(rho: &DensityMatrix, a: &FeatureVector) -> Result<f64> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: a.dim(),
        });
    }
    check_unit(a)?;
    let c = a.components();
    let d = rho.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            sum += c[i] * rho.entries[(i, j)] * c[j];
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fv(components: &[f64]) -> FeatureVector {
        FeatureVector::new(components.to_vec()).unwrap()
    }

    #[test]
    fn gram_of_opposite_corners() {
        let acc = gram_accumulate(&[fv(&[1.0, 1.0]), fv(&[-1.0, -1.0])]).unwrap();
        let e = acc.entries();
        assert_eq!(
            [e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]],
            [2.0, 2.0, 2.0, 2.0]
        );
        assert_eq!(acc.total_weight(), 4.0);
        assert_eq!(acc.trace(), 4.0);
    }

    #[test]
    fn gram_of_single_basis_vector() {
        let acc = gram_accumulate(&[fv(&[1.0, 0.0])]).unwrap();
        let e = acc.entries();
        assert_eq!(
            [e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]],
            [1.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn gram_rejects_empty_and_mixed_dims() {
        assert!(matches!(gram_accumulate(&[]), Err(Error::EmptyInput)));
        let r = gram_accumulate(&[fv(&[1.0, 2.0]), fv(&[1.0])]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn feature_vector_rejects_non_finite() {
        assert!(matches!(
            FeatureVector::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteInput)
        ));
        assert!(matches!(
            FeatureVector::new(vec![f64::INFINITY]),
            Err(Error::NonFiniteInput)
        ));
        assert!(matches!(FeatureVector::new(vec![]), Err(Error::EmptyInput)));
    }

    #[test]
    fn normalize_divides_by_trace() {
        let acc = gram_accumulate(&[fv(&[1.0, 1.0]), fv(&[-1.0, -1.0])]).unwrap();
        let rho = acc.to_density().unwrap();
        let e = rho.entries();
        assert_eq!(
            [e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]],
            [0.5, 0.5, 0.5, 0.5]
        );
        assert!((rho.trace() - 1.0).abs() <= TRACE_TOLERANCE);
    }

    #[test]
    fn zero_vectors_have_no_density() {
        let acc = gram_accumulate(&[fv(&[0.0, 0.0])]).unwrap();
        assert!(matches!(acc.to_density(), Err(Error::ZeroTrace)));
    }

    #[test]
    fn spectrum_of_rank_one_state() {
        // Closed-form oracle for [[.5,.5],[.5,.5]]: trace 1, det 0 → {1, 0}.
        let rho = gram_accumulate(&[fv(&[1.0, 1.0]), fv(&[-1.0, -1.0])])
            .unwrap()
            .to_density()
            .unwrap();
        let s = rho.spectrum().unwrap();
        assert_eq!(s.eigenvalues(), &[1.0, 0.0]);
    }

    #[test]
    fn spectrum_of_maximally_mixed() {
        let rho = DensityMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert_eq!(rho.spectrum().unwrap().eigenvalues(), &[0.5, 0.5]);
    }

    #[test]
    fn spectrum_flushes_eigensolver_noise() {
        // A trace-one matrix with a -1e-15 eigenvalue drifts in through
        // rank-deficient accumulation; the flush maps it to an exact zero.
        let rho = DensityMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1e-15]]).unwrap();
        let s = rho.spectrum().unwrap();
        assert_eq!(s.eigenvalues(), &[1.0, 0.0]);
    }

    #[test]
    fn from_rows_rejects_bad_states() {
        let r = DensityMatrix::from_rows(&[vec![0.5, 0.3], vec![0.0, 0.5]]);
        assert!(matches!(r, Err(Error::NotSymmetric)));
        let r = DensityMatrix::from_rows(&[vec![0.9, 0.0], vec![0.0, 0.2]]);
        assert!(matches!(r, Err(Error::InvalidTrace { .. })));
        let r = DensityMatrix::from_rows(&[vec![1.5, 0.0], vec![0.0, -0.5]]);
        assert!(matches!(r, Err(Error::NotPositiveSemidefinite { .. })));
    }

    #[test]
    fn tsallis_frozen_values() {
        let half = Spectrum::new(vec![0.5, 0.5]).unwrap();
        assert_relative_eq!(half.tsallis(2.0).unwrap(), 0.5, max_relative = 1e-12);
        let thirds = Spectrum::new(vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert_relative_eq!(
            thirds.tsallis(2.0).unwrap(),
            4.0 / 9.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            half.tsallis(0.5).unwrap(),
            2.0 * (2.0_f64.sqrt() - 1.0),
            max_relative = 1e-12
        );
    }

    #[test]
    fn shannon_frozen_value() {
        let half = Spectrum::new(vec![0.5, 0.5]).unwrap();
        assert_relative_eq!(half.shannon(), 2.0_f64.ln(), max_relative = 1e-12);
    }

    #[test]
    fn tsallis_matches_shannon_near_one() {
        // Continuity at the removable singularity: within 1e-4 at q = 1 ± 1e-5.
        let s = Spectrum::new(vec![0.6, 0.3, 0.1]).unwrap();
        let sh = s.shannon();
        for q in [1.0 - 1e-5, 1.0 + 1e-5] {
            assert!((s.tsallis(q).unwrap() - sh).abs() <= 1e-4);
        }
    }

    #[test]
    fn invalid_q_is_rejected() {
        let s = Spectrum::new(vec![1.0]).unwrap();
        for q in [0.0, -1.0, 1.0, 1.0 + 1e-10, f64::NAN] {
            assert!(matches!(s.tsallis(q), Err(Error::InvalidQ(_))));
        }
        assert!(s.tsallis(1.0 + 1e-8).is_ok());
    }

    #[test]
    fn zero_eigenvalues_contribute_nothing() {
        // 0^q = 0 for q < 1 too: (1, 0) must give exactly zero entropy.
        let pure = Spectrum::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(pure.tsallis(0.03).unwrap(), 0.0);
        assert_eq!(pure.tsallis(2.0).unwrap(), 0.0);
        assert_eq!(pure.shannon(), 0.0);
    }

    #[test]
    fn born_on_maximally_mixed_is_isotropic() {
        let rho = DensityMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let a = fv(&[0.6, 0.8]);
        let m = MeasurementOperator::from_direction(&a).unwrap();
        assert_relative_eq!(born_probability(&rho, &m).unwrap(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(
            born_probability_direction(&rho, &a).unwrap(),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn born_projector_is_squared_cosine() {
        // Pure state along e0, direction at 45 degrees → cos² = 0.5.
        let rho = gram_accumulate(&[fv(&[1.0, 0.0])])
            .unwrap()
            .to_density()
            .unwrap();
        let a = fv(&[1.0 / 2.0_f64.sqrt(), 1.0 / 2.0_f64.sqrt()]);
        assert_relative_eq!(
            born_probability_direction(&rho, &a).unwrap(),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn born_rejects_non_unit_direction() {
        let rho = DensityMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let r = born_probability_direction(&rho, &fv(&[1.0, 1.0]));
        assert!(matches!(r, Err(Error::NonUnitVector { .. })));
        assert!(matches!(
            MeasurementOperator::from_direction(&fv(&[1.0, 1.0])),
            Err(Error::NonUnitVector { .. })
        ));
    }

    #[test]
    fn measurement_operator_rejects_indefinite() {
        let r = MeasurementOperator::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(matches!(r, Err(Error::NotPositiveSemidefinite { .. })));
    }

    #[test]
    fn normalized_vectors_have_unit_norm() {
        let v = fv(&[3.0, 4.0]).normalized().unwrap();
        assert_relative_eq!(v.norm(), 1.0, epsilon = 1e-15);
        assert!(matches!(
            fv(&[0.0, 0.0]).normalized(),
            Err(Error::ZeroTrace)
        ));
    }
}

//! Reproducible synthetic similarity-matrix corpora.
//!
//! Generator contract, relied on by tests to recreate corpora byte for byte:
//! a ChaCha8 stream seeded with the given seed, cells visited in row-major
//! order, and per cell one `bernoulli(density)` draw followed by one f64
//! draw `u` in [0, 1). High cells take 0.8 + 0.2*u, low cells 0.2*u, so the
//! default discretizations (max-minus-25% and beta 0.5) both recover the
//! Bernoulli pattern exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::SimilarityMatrix;
use crate::Float;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("density {0} outside the open interval (0, 1)")]
    BadDensity(f64),
    #[error("corpus dimensions must be at least 1x1")]
    EmptyDimensions,
}

pub fn synth_similarity_matrix<T: Float>(
    seed: u64,
    n_rows: usize,
    n_items: usize,
    density: f64,
) -> Result<SimilarityMatrix<T>, SynthError> {
    if !(density > 0.0 && density < 1.0) {
        return Err(SynthError::BadDensity(density));
    }
    if n_rows == 0 || n_items == 0 {
        return Err(SynthError::EmptyDimensions);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<T>> = (0..n_rows)
        .map(|_| {
            (0..n_items)
                .map(|_| {
                    let high = rng.random_bool(density);
                    let u: f64 = rng.random();
                    let v = if high { 0.8 + 0.2 * u } else { 0.2 * u };
                    T::cast(v)
                })
                .collect()
        })
        .collect();
    let row_ids = (0..n_rows).map(|j| format!("p{j}")).collect();
    let col_ids = (0..n_items).map(|i| format!("g{i}")).collect();
    Ok(SimilarityMatrix::new(row_ids, col_ids, rows)
        .expect("generated values are in range and ids are unique"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{discretize_beta, parse_similarity_matrix};

    #[test]
    fn same_seed_same_corpus() {
        let a: SimilarityMatrix<f64> = synth_similarity_matrix(1, 10, 8, 0.3).unwrap();
        let b: SimilarityMatrix<f64> = synth_similarity_matrix(1, 10, 8, 0.3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        let c: SimilarityMatrix<f64> = synth_similarity_matrix(2, 10, 8, 0.3).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn density_bounds_are_exclusive() {
        assert_eq!(
            synth_similarity_matrix::<f64>(1, 5, 5, 0.0).unwrap_err(),
            SynthError::BadDensity(0.0)
        );
        assert_eq!(
            synth_similarity_matrix::<f64>(1, 5, 5, 1.0).unwrap_err(),
            SynthError::BadDensity(1.0)
        );
        assert!(synth_similarity_matrix::<f64>(1, 0, 5, 0.5).is_err());
    }

    #[test]
    fn generated_corpus_round_trips_through_the_parser() {
        let m: SimilarityMatrix<f64> = synth_similarity_matrix(2, 100, 12, 0.5).unwrap();
        let parsed: SimilarityMatrix<f64> = parse_similarity_matrix(&m.to_csv()).unwrap();
        assert_eq!(m, parsed);
    }

    #[test]
    fn beta_half_recovers_the_bernoulli_pattern() {
        let m: SimilarityMatrix<f64> = synth_similarity_matrix(7, 50, 10, 0.4).unwrap();
        let b = discretize_beta(&m, 0.5).unwrap();
        for j in 0..m.n_rows() {
            for i in 0..m.n_cols() {
                assert_eq!(b.bit(j, i), m.value(j, i) >= 0.8);
            }
        }
    }
}

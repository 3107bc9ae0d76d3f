//! Association rule mining over real-valued similarity matrices.
//!
//! The pipeline has four stages:
//!
//! 1. [`dataset`] parses a similarity-matrix CSV (rows are probe patterns,
//!    columns are genes, cells are unit-interval similarities) and binarizes
//!    it into a [`bitmatrix::BitMatrix`], either against the global maximum
//!    (max-minus-x%) or against a fixed threshold.
//! 2. [`miner`] runs a single-scan frequent-itemset search directly on the
//!    bit matrix: supports are popcounts of column intersections, and rows
//!    and columns that can no longer contribute are pruned between levels.
//! 3. [`rules`] turns the frequent-itemset catalog into association rules,
//!    filters them by confidence, and ranks them.
//! 4. [`measures`] scores each rule with thirteen interestingness measures
//!    derived from its contingency counts, and scores a whole rule set with
//!    entropy and variance diversity.
//!
//! [`oracle`] holds deliberately naive reference miners (textbook Apriori and
//! an exhaustive enumerator) that the test suite uses to cross-check the bit
//! matrix miner; [`synth`] generates reproducible random corpora.
//!
//! Everything real-valued is generic over the scalar type through [`Float`];
//! the `*F32`/`*F64` aliases at the crate root pick a concrete scalar.

pub mod bitmatrix;
pub mod dataset;
pub mod measures;
pub mod miner;
pub mod oracle;
pub mod rules;
pub mod synth;

use std::fmt;
use std::iter::Sum;

use num_traits::{FromPrimitive, NumCast};

/// Scalar type for all real-valued computation in this crate.
///
/// Counts (supports, contingency cells) stay integral everywhere; this trait
/// only governs the derived quantities: similarity values, thresholds,
/// probabilities, measures, and diversity scores.
pub trait Float:
    num_traits::Float + FromPrimitive + Sum + fmt::Display + fmt::Debug + Send + Sync + 'static
{
    /// Lossy-but-total conversion from any primitive numeric type.
    fn cast<U: NumCast>(x: U) -> Self {
        NumCast::from(x).expect("numeric cast into a float scalar cannot fail")
    }
}

impl Float for f32 {}
impl Float for f64 {}

pub type SimilarityMatrixF32 = dataset::SimilarityMatrix<f32>;
pub type SimilarityMatrixF64 = dataset::SimilarityMatrix<f64>;
pub type DiscretizeConfigF32 = dataset::DiscretizeConfig<f32>;
pub type DiscretizeConfigF64 = dataset::DiscretizeConfig<f64>;
pub type MiningConfigF32 = miner::MiningConfig<f32>;
pub type MiningConfigF64 = miner::MiningConfig<f64>;
pub type RuleGenConfigF32 = rules::RuleGenConfig<f32>;
pub type RuleGenConfigF64 = rules::RuleGenConfig<f64>;
pub type AssociationRuleF32 = rules::AssociationRule<f32>;
pub type AssociationRuleF64 = rules::AssociationRule<f64>;
pub type MeasureVectorF32 = measures::MeasureVector<f32>;
pub type MeasureVectorF64 = measures::MeasureVector<f64>;

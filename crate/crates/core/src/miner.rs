//! Single-scan frequent-itemset search over a [`BitMatrix`].
//!
//! The data is read once to build the bit matrix; after that, all support
//! counting is popcounts of column intersections. Between levels the working
//! matrix is pruned:
//!
//! * after level 1, columns below the absolute support threshold and rows
//!   with fewer than 2 live items are dropped;
//! * after level k, columns whose item occurs in fewer than k of the level-k
//!   itemsets are dropped (an item inside a frequent (k+1)-itemset occurs in
//!   exactly k of its frequent k-subsets, so such items cannot extend), and
//!   rows with fewer than k+1 live items are dropped (they cannot contain a
//!   (k+1)-itemset of live columns).
//!
//! The absolute support threshold is fixed once against the ORIGINAL row
//! count, before any pruning, which is what makes the row pruning lossless:
//! absolute counts of surviving itemsets never change.

use std::collections::HashSet;

use itertools::Itertools;
use thiserror::Error;

use crate::bitmatrix::{BitMatrix, BitMatrixError};
use crate::Float;

#[derive(Debug, Error, PartialEq)]
pub enum MineError {
    #[error("input matrix has no rows or no columns")]
    EmptyInput,
    #[error("minimum support {0} outside (0, 1]")]
    InvalidSupport(f64),
    #[error("level cap must be at least 1")]
    InvalidMaxK,
    #[error(transparent)]
    BitMatrix(#[from] BitMatrixError),
}

/// Itemset as strictly increasing item (column) indices.
pub type ItemSet = Vec<usize>;

/// Absolute support threshold: ceiling of `min_support * n_rows`, floored at
/// one so that a positive relative threshold never degenerates to zero.
pub fn to_absolute_support<T: Float>(min_support: T, n_rows: usize) -> usize {
    let raw = (min_support * T::cast(n_rows)).ceil();
    raw.to_usize().unwrap_or(0).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiningConfig<T> {
    min_support: T,
    max_k: Option<usize>,
    exhaustive_candidates: bool,
}

impl<T: Float> MiningConfig<T> {
    pub fn new(min_support: T) -> Result<Self, MineError> {
        if !min_support.is_finite() || min_support <= T::zero() || min_support > T::one() {
            return Err(MineError::InvalidSupport(
                min_support.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(MiningConfig {
            min_support,
            max_k: None,
            exhaustive_candidates: false,
        })
    }

    /// Stop after level `max_k` even if larger itemsets could be frequent.
    pub fn with_max_k(mut self, max_k: usize) -> Result<Self, MineError> {
        if max_k == 0 {
            return Err(MineError::InvalidMaxK);
        }
        self.max_k = Some(max_k);
        Ok(self)
    }

    /// Enumerate every k-combination of live columns instead of extending
    /// frequent (k-1)-itemsets. Same output, kept for benchmarking the
    /// unfiltered enumeration.
    pub fn with_exhaustive_candidates(mut self, on: bool) -> Self {
        self.exhaustive_candidates = on;
        self
    }

    pub fn min_support(&self) -> T {
        self.min_support
    }

    pub fn max_k(&self) -> Option<usize> {
        self.max_k
    }

    pub fn exhaustive_candidates(&self) -> bool {
        self.exhaustive_candidates
    }

    pub fn absolute_support(&self, n_rows: usize) -> usize {
        to_absolute_support(self.min_support, n_rows)
    }
}

/// Leveled catalog F = F1 ∪ ... ∪ Fk of frequent itemsets with absolute
/// support counts. Itemsets within a level are unique and lexicographically
/// sorted; every (k-1)-subset of a stored k-itemset is stored at level k-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentItemsets {
    n_transactions: usize,
    item_ids: Vec<String>,
    levels: Vec<Vec<(ItemSet, usize)>>,
}

impl FrequentItemsets {
    pub fn new(n_transactions: usize, item_ids: Vec<String>) -> Self {
        FrequentItemsets {
            n_transactions,
            item_ids,
            levels: Vec::new(),
        }
    }

    /// Append the next level. The level must be non-empty, sorted, duplicate
    /// free, and one longer than the current deepest level.
    pub fn push_level(&mut self, level: Vec<(ItemSet, usize)>) {
        assert!(!level.is_empty(), "levels must be non-empty");
        let k = self.levels.len() + 1;
        for window in level.windows(2) {
            assert!(window[0].0 < window[1].0, "level must be sorted and unique");
        }
        for (set, _) in &level {
            assert_eq!(set.len(), k, "itemset length must match its level");
            assert!(set.windows(2).all(|w| w[0] < w[1]), "itemset must be sorted");
        }
        self.levels.push(level);
    }

    pub fn n_transactions(&self) -> usize {
        self.n_transactions
    }

    pub fn item_ids(&self) -> &[String] {
        &self.item_ids
    }

    /// Deepest stored level (0 when the catalog is empty).
    pub fn max_len(&self) -> usize {
        self.levels.len()
    }

    /// Itemsets of size `k` (1-based). Out-of-range levels are empty.
    pub fn level(&self, k: usize) -> &[(ItemSet, usize)] {
        if k == 0 || k > self.levels.len() {
            &[]
        } else {
            &self.levels[k - 1]
        }
    }

    pub fn levels(&self) -> &[Vec<(ItemSet, usize)>] {
        &self.levels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ItemSet, usize)> {
        self.levels
            .iter()
            .flatten()
            .map(|(set, count)| (set, *count))
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Absolute support of `set`, or None when it is not in the catalog.
    pub fn support_of(&self, set: &[usize]) -> Option<usize> {
        let level = self.level(set.len());
        level
            .binary_search_by(|(s, _)| s.as_slice().cmp(set))
            .ok()
            .map(|i| level[i].1)
    }
}

/// Per-run counters, reported by the benchmark command.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MineStats {
    /// Candidates whose support was actually counted, per level (level 1
    /// counts every column).
    pub candidates_per_level: Vec<usize>,
    /// Frequent itemsets kept per level. Candidates are tested one at a
    /// time, so this is also the miner's peak per-level storage.
    pub frequent_per_level: Vec<usize>,
}

impl MineStats {
    pub fn peak_candidates(&self) -> usize {
        self.candidates_per_level.iter().copied().max().unwrap_or(0)
    }

    /// Largest itemset collection held in memory at any level.
    pub fn peak_stored(&self) -> usize {
        self.frequent_per_level.iter().copied().max().unwrap_or(0)
    }

    pub fn levels(&self) -> usize {
        self.candidates_per_level.len()
    }
}

/// Mine every itemset whose absolute support in the original matrix reaches
/// the threshold. The input matrix is not modified; pruning happens on an
/// internal working copy.
pub fn mine<T: Float>(b: &BitMatrix, cfg: &MiningConfig<T>) -> Result<FrequentItemsets, MineError> {
    mine_with_stats(b, cfg).map(|(catalog, _)| catalog)
}

pub fn mine_with_stats<T: Float>(
    b: &BitMatrix,
    cfg: &MiningConfig<T>,
) -> Result<(FrequentItemsets, MineStats), MineError> {
    if b.n_rows() == 0 || b.n_cols() == 0 {
        return Err(MineError::EmptyInput);
    }
    let new_support = cfg.absolute_support(b.n_rows());
    let mut work = b.clone();
    let mut catalog = FrequentItemsets::new(b.n_rows(), b.col_ids().to_vec());
    let mut stats = MineStats::default();

    // level 1: column sums, pruning infrequent columns as we go
    stats.candidates_per_level.push(work.n_cols());
    let mut frequent_prev: Vec<(ItemSet, usize)> = Vec::new();
    for i in 0..work.n_cols() {
        let sum = work.column_sum(i)?;
        if sum >= new_support {
            frequent_prev.push((vec![i], sum));
        } else {
            work.prune_column(i)?;
        }
    }
    stats.frequent_per_level.push(frequent_prev.len());
    if frequent_prev.is_empty() {
        return Ok((catalog, stats)); // no frequent items: empty catalog
    }
    catalog.push_level(frequent_prev.clone());
    prune_rows_below(&mut work, 2)?;

    // A frequent k-itemset has k distinct frequent (k-1)-subsets, so the
    // level loop can stop once |F_{k-1}| <= k-1.
    let mut k = 2;
    while frequent_prev.len() > k - 1 && cfg.max_k.is_none_or(|cap| k <= cap) {
        let (frequent_k, tested) = if cfg.exhaustive_candidates {
            exhaustive_level(&work, k, new_support)?
        } else {
            filtered_level(&work, &frequent_prev, new_support)?
        };
        stats.candidates_per_level.push(tested);
        stats.frequent_per_level.push(frequent_k.len());
        if !frequent_k.is_empty() {
            catalog.push_level(frequent_k.clone());
        }
        let mut occurrences = vec![0usize; work.n_cols()];
        for (set, _) in &frequent_k {
            for &i in set {
                occurrences[i] += 1;
            }
        }
        for (i, &occ) in occurrences.iter().enumerate() {
            if work.is_live_col(i) && occ < k {
                work.prune_column(i)?;
            }
        }
        prune_rows_below(&mut work, k + 1)?;
        frequent_prev = frequent_k;
        k += 1;
    }
    Ok((catalog, stats))
}

fn prune_rows_below(work: &mut BitMatrix, min_items: usize) -> Result<(), MineError> {
    for j in 0..work.n_rows() {
        if work.is_live_row(j) && work.row_sum(j)? < min_items {
            work.prune_row(j)?;
        }
    }
    Ok(())
}

/// Count candidates built by extending each frequent (k-1)-itemset with a
/// larger live column, skipping any candidate with an infrequent
/// (k-1)-subset. Every k-set whose subsets are all frequent is generated
/// exactly once, from its lexicographically smallest (k-1)-prefix.
fn filtered_level(
    work: &BitMatrix,
    frequent_prev: &[(ItemSet, usize)],
    new_support: usize,
) -> Result<(Vec<(ItemSet, usize)>, usize), MineError> {
    let prev_set: HashSet<&[usize]> = frequent_prev
        .iter()
        .map(|(set, _)| set.as_slice())
        .collect();
    let live: Vec<usize> = work.live_columns().collect();
    let mut out = Vec::new();
    let mut tested = 0usize;
    let mut subset = Vec::new();
    for (set, _) in frequent_prev {
        // items pruned at this level's boundary can no longer extend
        if set.iter().any(|&i| !work.is_live_col(i)) {
            continue;
        }
        let last = *set.last().expect("itemsets are non-empty");
        for &next in live.iter().filter(|&&i| i > last) {
            let mut candidate = set.clone();
            candidate.push(next);
            // the subset omitting the last element is `set` itself
            let all_frequent = (0..candidate.len() - 1).all(|omit| {
                subset.clear();
                subset.extend(
                    candidate
                        .iter()
                        .enumerate()
                        .filter(|&(pos, _)| pos != omit)
                        .map(|(_, &item)| item),
                );
                prev_set.contains(subset.as_slice())
            });
            if !all_frequent {
                continue;
            }
            tested += 1;
            let support = work.support_count(&candidate)?;
            if support >= new_support {
                out.push((candidate, support));
            }
        }
    }
    Ok((out, tested))
}

/// Count every k-combination of live columns.
fn exhaustive_level(
    work: &BitMatrix,
    k: usize,
    new_support: usize,
) -> Result<(Vec<(ItemSet, usize)>, usize), MineError> {
    let live: Vec<usize> = work.live_columns().collect();
    let mut out = Vec::new();
    let mut tested = 0usize;
    for candidate in live.into_iter().combinations(k) {
        tested += 1;
        let support = work.support_count(&candidate)?;
        if support >= new_support {
            out.push((candidate, support));
        }
    }
    Ok((out, tested))
}

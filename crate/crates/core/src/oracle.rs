//! Reference miners used for cross-checking and benchmarking.
//!
//! These are deliberately plain: clarity over speed. The central correctness
//! property of the crate is that [`crate::miner::mine`] agrees with both of
//! them on every input.

use std::collections::HashSet;

use thiserror::Error;

use crate::bitmatrix::BitMatrix;
use crate::measures::ContingencyCounts;
use crate::miner::{FrequentItemsets, ItemSet};
use crate::rules::AssociationRule;
use crate::Float;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} items exceeds the exhaustive-enumeration limit of 20")]
    TooManyItems(usize),
}

/// Transactions as sorted item-index sets; the row-wise view of a BitMatrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionSet {
    transactions: Vec<Vec<usize>>,
    n_items: usize,
    item_ids: Vec<String>,
}

impl TransactionSet {
    /// Build from raw item-index sets. Indices must be below `n_items`;
    /// each transaction is sorted and deduplicated.
    pub fn new(transactions: Vec<Vec<usize>>, n_items: usize) -> Self {
        let transactions = transactions
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t.dedup();
                assert!(t.last().is_none_or(|&i| i < n_items), "item index out of range");
                t
            })
            .collect();
        let item_ids = (0..n_items).map(|i| format!("item{i}")).collect();
        TransactionSet {
            transactions,
            n_items,
            item_ids,
        }
    }

    /// Row-wise view of a bit matrix. Reads raw bits; prune masks are
    /// ignored, so pass an unpruned matrix.
    pub fn from_bitmatrix(b: &BitMatrix) -> Self {
        let transactions = (0..b.n_rows())
            .map(|j| (0..b.n_cols()).filter(|&i| b.bit(j, i)).collect())
            .collect();
        TransactionSet {
            transactions,
            n_items: b.n_cols(),
            item_ids: b.col_ids().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn transactions(&self) -> &[Vec<usize>] {
        &self.transactions
    }

    pub fn item_ids(&self) -> &[String] {
        &self.item_ids
    }

    fn count(&self, set: &[usize]) -> usize {
        self.transactions
            .iter()
            .filter(|t| is_subset(set, t))
            .count()
    }
}

fn is_subset(needle: &[usize], haystack: &[usize]) -> bool {
    let mut it = haystack.iter();
    needle.iter().all(|want| it.any(|have| have == want))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AprioriStats {
    /// Full passes over the transaction set (one per counted level).
    pub data_scans: usize,
    /// Largest candidate set counted at any level.
    pub peak_candidates: usize,
    /// Candidates counted across all levels.
    pub total_candidates: usize,
}

/// Textbook level-wise Apriori.
pub fn apriori_mine(t: &TransactionSet, new_support: usize) -> FrequentItemsets {
    apriori_mine_with_stats(t, new_support).0
}

pub fn apriori_mine_with_stats(
    t: &TransactionSet,
    new_support: usize,
) -> (FrequentItemsets, AprioriStats) {
    let mut catalog = FrequentItemsets::new(t.len(), t.item_ids.clone());
    let mut stats = AprioriStats {
        data_scans: 1,
        peak_candidates: t.n_items,
        total_candidates: t.n_items,
    };

    // one scan to count the singletons
    let mut item_counts = vec![0usize; t.n_items];
    for txn in &t.transactions {
        for &i in txn {
            item_counts[i] += 1;
        }
    }
    let mut frequent: Vec<(ItemSet, usize)> = item_counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c >= new_support)
        .map(|(i, &c)| (vec![i], c))
        .collect();
    if frequent.is_empty() {
        return (catalog, stats);
    }
    catalog.push_level(frequent.clone());

    loop {
        let candidates = join_candidates(&frequent);
        if candidates.is_empty() {
            break;
        }
        stats.peak_candidates = stats.peak_candidates.max(candidates.len());
        stats.total_candidates += candidates.len();
        stats.data_scans += 1;
        let mut counts = vec![0usize; candidates.len()];
        for txn in &t.transactions {
            for (c, candidate) in candidates.iter().enumerate() {
                if is_subset(candidate, txn) {
                    counts[c] += 1;
                }
            }
        }
        frequent = candidates
            .into_iter()
            .zip(counts)
            .filter(|&(_, c)| c >= new_support)
            .collect();
        if frequent.is_empty() {
            break;
        }
        catalog.push_level(frequent.clone());
    }
    (catalog, stats)
}

/// Join frequent (k-1)-itemsets sharing their first k-2 items, then keep
/// only candidates whose (k-1)-subsets are all frequent.
fn join_candidates(frequent: &[(ItemSet, usize)]) -> Vec<ItemSet> {
    let prev: HashSet<&[usize]> = frequent.iter().map(|(s, _)| s.as_slice()).collect();
    let k_minus_1 = frequent.first().map_or(0, |(s, _)| s.len());
    let mut out = Vec::new();
    for (a_idx, (a, _)) in frequent.iter().enumerate() {
        for (b, _) in &frequent[a_idx + 1..] {
            if a[..k_minus_1 - 1] != b[..k_minus_1 - 1] {
                continue;
            }
            let mut candidate = a.clone();
            candidate.push(b[k_minus_1 - 1]);
            let all_frequent = (0..candidate.len()).all(|omit| {
                let subset: Vec<usize> = candidate
                    .iter()
                    .enumerate()
                    .filter(|&(pos, _)| pos != omit)
                    .map(|(_, &i)| i)
                    .collect();
                prev.contains(subset.as_slice())
            });
            if all_frequent {
                out.push(candidate);
            }
        }
    }
    out.sort();
    out
}

/// Enumerate all 2^n_items - 1 itemsets and count each by scanning.
pub fn brute_force_mine(
    t: &TransactionSet,
    new_support: usize,
) -> Result<FrequentItemsets, OracleError> {
    if t.n_items > 20 {
        return Err(OracleError::TooManyItems(t.n_items));
    }
    let mut catalog = FrequentItemsets::new(t.len(), t.item_ids.clone());
    if t.n_items == 0 {
        return Ok(catalog);
    }
    let tx_masks: Vec<u32> = t
        .transactions
        .iter()
        .map(|txn| txn.iter().fold(0u32, |m, &i| m | 1 << i))
        .collect();
    let mut levels: Vec<Vec<(ItemSet, usize)>> = vec![Vec::new(); t.n_items];
    for mask in 1u32..1 << t.n_items {
        let count = tx_masks.iter().filter(|&&m| m & mask == mask).count();
        if count >= new_support {
            let set: ItemSet = (0..t.n_items).filter(|&i| mask >> i & 1 == 1).collect();
            levels[set.len() - 1].push((set, count));
        }
    }
    for mut level in levels {
        if level.is_empty() {
            break; // anti-monotonicity: no larger level can be populated
        }
        level.sort();
        catalog.push_level(level);
    }
    Ok(catalog)
}

/// Brute-force rule enumeration: every split of every frequent itemset, with
/// contingency counts taken by scanning the transactions.
pub fn brute_force_rules<T: Float>(
    t: &TransactionSet,
    new_support: usize,
    min_conf: T,
) -> Result<Vec<AssociationRule<T>>, OracleError> {
    let catalog = brute_force_mine(t, new_support)?;
    let n = t.len();
    let mut out = Vec::new();
    for k in 2..=catalog.max_len() {
        for (set, _) in catalog.level(k) {
            for mask in 1u32..(1 << set.len()) - 1 {
                let antecedent: ItemSet = set
                    .iter()
                    .enumerate()
                    .filter(|&(pos, _)| mask >> pos & 1 == 1)
                    .map(|(_, &i)| i)
                    .collect();
                let consequent: ItemSet = set
                    .iter()
                    .enumerate()
                    .filter(|&(pos, _)| mask >> pos & 1 == 0)
                    .map(|(_, &i)| i)
                    .collect();
                let n_a = t.count(&antecedent);
                let n_ab = t.count(set);
                let confidence = T::cast(n_ab) / T::cast(n_a);
                if confidence >= min_conf {
                    let n_b = t.count(&consequent);
                    let counts = ContingencyCounts::new(n, n_a, n_b, n_ab)
                        .expect("scanned counts are consistent");
                    out.push(AssociationRule::from_parts(
                        antecedent,
                        consequent,
                        T::cast(n_ab) / T::cast(n),
                        confidence,
                        counts,
                    ));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> TransactionSet {
        // {AB, ABC, AC, BC, AB} over items {A, B, C}
        TransactionSet::new(
            vec![vec![0, 1], vec![0, 1, 2], vec![0, 2], vec![1, 2], vec![0, 1]],
            3,
        )
    }

    #[test]
    fn apriori_on_the_example() {
        let f = apriori_mine(&example(), 3);
        assert_eq!(f.level(1), &[(vec![0], 4), (vec![1], 4), (vec![2], 3)][..]);
        assert_eq!(f.level(2), &[(vec![0, 1], 3)][..]);
        assert_eq!(f.len(), 4);
    }

    #[test]
    fn apriori_support_above_row_count_is_empty() {
        let f = apriori_mine(&example(), 6);
        assert!(f.is_empty());
    }

    #[test]
    fn apriori_single_transaction_powerset() {
        let t = TransactionSet::new(vec![vec![0, 1, 2]], 3);
        let f = apriori_mine(&t, 1);
        assert_eq!(f.len(), 7);
        assert_eq!(f.level(3), &[(vec![0, 1, 2], 1)][..]);
    }

    #[test]
    fn brute_force_small_cases() {
        let t = TransactionSet::new(vec![vec![0], vec![1]], 2);
        let f = brute_force_mine(&t, 1).unwrap();
        assert_eq!(f.level(1), &[(vec![0], 1), (vec![1], 1)][..]);
        assert_eq!(f.level(2), &[][..]);
    }

    #[test]
    fn brute_force_guards_item_count() {
        let t = TransactionSet::new(vec![vec![20]], 21);
        assert_eq!(brute_force_mine(&t, 1), Err(OracleError::TooManyItems(21)));
    }

    #[test]
    fn oracles_agree_on_the_example() {
        let t = example();
        for new_support in 1..=6 {
            assert_eq!(
                apriori_mine(&t, new_support),
                brute_force_mine(&t, new_support).unwrap(),
                "new_support {new_support}"
            );
        }
    }

    #[test]
    fn apriori_stats_count_scans_and_candidates() {
        let (_, stats) = apriori_mine_with_stats(&example(), 3);
        // one scan for singletons, one for the pair candidates
        assert_eq!(stats.data_scans, 2);
        assert_eq!(stats.peak_candidates, 3);
    }

    #[test]
    fn transaction_set_round_trips_a_bitmatrix() {
        let b = crate::miner::tests::five_transaction_example();
        let t = TransactionSet::from_bitmatrix(&b);
        assert_eq!(t.len(), 5);
        assert_eq!(t.transactions()[1], vec![0, 1, 2]);
        assert_eq!(t.item_ids(), b.col_ids());
    }
}

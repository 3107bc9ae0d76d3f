//! Association-rule generation from a frequent-itemset catalog.
//!
//! Every rule is a split of a frequent itemset U into disjoint non-empty
//! antecedent and consequent with antecedent ∪ consequent = U. Support is
//! count(U)/n and confidence count(U)/count(antecedent); both sides' counts
//! come straight from the catalog, which downward closure guarantees to
//! contain them.

use std::collections::HashSet;

use thiserror::Error;

use crate::measures::ContingencyCounts;
use crate::miner::{FrequentItemsets, ItemSet};
use crate::Float;

#[derive(Debug, Error, PartialEq)]
pub enum RulesError {
    #[error("minimum confidence {0} outside (0, 1]")]
    InvalidConfidence(f64),
    #[error("top-n must be at least 1")]
    InvalidTopN,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule<T> {
    antecedent: ItemSet,
    consequent: ItemSet,
    support: T,
    confidence: T,
    counts: ContingencyCounts,
}

impl<T: Float> AssociationRule<T> {
    pub(crate) fn from_parts(
        antecedent: ItemSet,
        consequent: ItemSet,
        support: T,
        confidence: T,
        counts: ContingencyCounts,
    ) -> Self {
        debug_assert!(!antecedent.is_empty() && !consequent.is_empty());
        debug_assert!(consequent.iter().all(|i| !antecedent.contains(i)));
        AssociationRule {
            antecedent,
            consequent,
            support,
            confidence,
            counts,
        }
    }

    pub fn antecedent(&self) -> &[usize] {
        &self.antecedent
    }

    pub fn consequent(&self) -> &[usize] {
        &self.consequent
    }

    pub fn support(&self) -> T {
        self.support
    }

    pub fn confidence(&self) -> T {
        self.confidence
    }

    pub fn counts(&self) -> &ContingencyCounts {
        &self.counts
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleGenConfig<T> {
    min_conf: T,
    top_n: usize,
}

impl<T: Float> RuleGenConfig<T> {
    pub const DEFAULT_TOP_N: usize = 15;

    pub fn new(min_conf: T) -> Result<Self, RulesError> {
        if !min_conf.is_finite() || min_conf <= T::zero() || min_conf > T::one() {
            return Err(RulesError::InvalidConfidence(
                min_conf.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(RuleGenConfig {
            min_conf,
            top_n: Self::DEFAULT_TOP_N,
        })
    }

    pub fn with_top_n(mut self, top_n: usize) -> Result<Self, RulesError> {
        if top_n == 0 {
            return Err(RulesError::InvalidTopN);
        }
        self.top_n = top_n;
        Ok(self)
    }

    pub fn min_conf(&self) -> T {
        self.min_conf
    }

    pub fn top_n(&self) -> usize {
        self.top_n
    }
}

fn split_by_mask(set: &[usize], mask: u64) -> (ItemSet, ItemSet) {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (pos, &item) in set.iter().enumerate() {
        if mask >> pos & 1 == 1 {
            lhs.push(item);
        } else {
            rhs.push(item);
        }
    }
    (lhs, rhs)
}

/// Emit every rule with confidence at or above the threshold, once. The
/// catalog must satisfy downward closure (miner and oracle outputs do).
pub fn generate_rules<T: Float>(
    f: &FrequentItemsets,
    cfg: &RuleGenConfig<T>,
) -> Vec<AssociationRule<T>> {
    let n = f.n_transactions();
    let n_t = T::cast(n);
    let mut seen: HashSet<(ItemSet, ItemSet)> = HashSet::new();
    let mut out = Vec::new();
    for k in 2..=f.max_len() {
        assert!(k < 64, "itemsets longer than 63 items are unsupported");
        for (set, count) in f.level(k) {
            let support = T::cast(*count) / n_t;
            for mask in 1..(1u64 << k) - 1 {
                let (antecedent, consequent) = split_by_mask(set, mask);
                let n_a = f
                    .support_of(&antecedent)
                    .expect("downward closure: every subset of a frequent itemset is frequent");
                let confidence = T::cast(*count) / T::cast(n_a);
                if confidence < cfg.min_conf {
                    continue;
                }
                let n_b = f
                    .support_of(&consequent)
                    .expect("downward closure: every subset of a frequent itemset is frequent");
                if !seen.insert((antecedent.clone(), consequent.clone())) {
                    continue;
                }
                let counts = ContingencyCounts::new(n, n_a, n_b, *count)
                    .expect("catalog counts are consistent");
                out.push(AssociationRule::from_parts(
                    antecedent, consequent, support, confidence, counts,
                ));
            }
        }
    }
    out
}

/// Sort descending by confidence, break ties by descending support, then by
/// antecedent and consequent lexicographically, and keep the first `top_n`.
pub fn rank_by_confidence<T: Float>(
    mut rules: Vec<AssociationRule<T>>,
    top_n: usize,
) -> Vec<AssociationRule<T>> {
    rules.sort_by(|a, b| {
        b.confidence
            .partial_cmp(&a.confidence)
            .expect("confidence is finite")
            .then_with(|| {
                b.support
                    .partial_cmp(&a.support)
                    .expect("support is finite")
            })
            .then_with(|| a.antecedent.cmp(&b.antecedent))
            .then_with(|| a.consequent.cmp(&b.consequent))
    });
    rules.truncate(top_n);
    rules
}

/// Diagnostic replay of the found-counter early-exit heuristic: walk the
/// catalog in order for each antecedent base and abandon it at the first
/// superset below rsup = support(base) * min_conf while fewer than two rules
/// have been found. Returns the rules complete enumeration emits that the
/// heuristic would have skipped; nothing is suppressed from real output.
pub fn early_exit_skipped<T: Float>(
    f: &FrequentItemsets,
    cfg: &RuleGenConfig<T>,
) -> Vec<AssociationRule<T>> {
    let n_t = T::cast(f.n_transactions());
    let mut kept: HashSet<(ItemSet, ItemSet)> = HashSet::new();
    for k in 1..f.max_len() {
        for (base, base_count) in f.level(k) {
            let rsup = T::cast(*base_count) / n_t * cfg.min_conf;
            let mut found = 0usize;
            'base: for m in (k + 1)..=f.max_len() {
                for (superset, super_count) in f.level(m) {
                    let sup_m = T::cast(*super_count) / n_t;
                    if sup_m >= rsup {
                        if is_strict_subset(base, superset) {
                            found += 1;
                            let consequent: ItemSet = superset
                                .iter()
                                .copied()
                                .filter(|i| !base.contains(i))
                                .collect();
                            kept.insert((base.clone(), consequent));
                        }
                    } else if found < 2 {
                        break 'base;
                    } else {
                        found = 0;
                    }
                }
            }
        }
    }
    generate_rules(f, cfg)
        .into_iter()
        .filter(|r| !kept.contains(&(r.antecedent.clone(), r.consequent.clone())))
        .collect()
}

fn is_strict_subset(small: &[usize], big: &[usize]) -> bool {
    if small.len() >= big.len() {
        return false;
    }
    let mut it = big.iter();
    small.iter().all(|want| it.any(|have| have == want))
}

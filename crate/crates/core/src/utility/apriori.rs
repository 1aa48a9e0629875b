//! Level-wise Apriori frequent-itemset mining over market baskets.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::utility::baskets::Basket;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Itemset {
    /// Sorted item labels.
    pub items: Vec<String>,
    /// Fraction of baskets containing every item.
    pub support: f64,
}

/// All itemsets with support >= `min_support`, discovered level by level
/// with the anti-monotone prune (every subset of a candidate must already be
/// frequent). Output is ordered by itemset size, then lexicographically.
pub fn apriori_frequent_itemsets(baskets: &[Basket], min_support: f64) -> Result<Vec<Itemset>> {
    if baskets.is_empty() {
        return Err(Error::EmptyInput("no baskets to mine"));
    }
    if !(min_support > 0.0 && min_support <= 1.0) {
        return Err(Error::InvalidSupport(min_support));
    }
    let n = baskets.len() as f64;

    // Level 1: count single items.
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for basket in baskets {
        for item in &basket.items {
            *counts.entry(item).or_insert(0) += 1;
        }
    }
    let mut frequent: Vec<Itemset> = Vec::new();
    let mut level: Vec<Vec<String>> = Vec::new();
    for (item, count) in counts {
        let support = count as f64 / n;
        if support >= min_support {
            level.push(vec![item.to_string()]);
            frequent.push(Itemset {
                items: vec![item.to_string()],
                support,
            });
        }
    }

    while !level.is_empty() {
        let candidates = join_level(&level);
        let mut next_level = Vec::new();
        for candidate in candidates {
            let count = baskets
                .iter()
                .filter(|b| candidate.iter().all(|item| b.items.contains(item)))
                .count();
            let support = count as f64 / n;
            if support >= min_support {
                frequent.push(Itemset {
                    items: candidate.clone(),
                    support,
                });
                next_level.push(candidate);
            }
        }
        level = next_level;
    }

    Ok(frequent)
}

/// Joins size-k frequent itemsets that share their first k-1 items, pruning
/// candidates with any infrequent k-subset. Inputs and outputs are sorted,
/// so candidate order is deterministic.
fn join_level(level: &[Vec<String>]) -> Vec<Vec<String>> {
    let known: BTreeSet<&[String]> = level.iter().map(|i| i.as_slice()).collect();
    let k = level[0].len();
    let mut candidates = Vec::new();
    for (a_pos, a) in level.iter().enumerate() {
        for b in &level[a_pos + 1..] {
            if a[..k - 1] != b[..k - 1] {
                continue;
            }
            let mut candidate = a.clone();
            candidate.push(b[k - 1].clone());
            candidate.sort();
            let all_subsets_frequent = (0..candidate.len()).all(|skip| {
                let subset: Vec<String> = candidate
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, item)| item.clone())
                    .collect();
                known.contains(subset.as_slice())
            });
            if all_subsets_frequent {
                candidates.push(candidate);
            }
        }
    }
    candidates
}

//! Pairwise association rules (A -> B) with confidence, lift, and conviction.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::utility::apriori::Itemset;

/// Conviction is unbounded: a rule that never fails with a non-universal
/// consequent has infinite conviction. JSON has no infinity, so that case
/// serializes as the string "inf".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conviction {
    Finite(f64),
    Infinite,
}

impl Conviction {
    pub fn as_f64(self) -> f64 {
        match self {
            Conviction::Finite(v) => v,
            Conviction::Infinite => f64::INFINITY,
        }
    }
}

impl Serialize for Conviction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Conviction::Finite(v) => serializer.serialize_f64(*v),
            Conviction::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Conviction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ConvictionVisitor;

        impl Visitor<'_> for ConvictionVisitor {
            type Value = Conviction;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Conviction, E> {
                Ok(Conviction::Finite(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Conviction, E> {
                Ok(Conviction::Finite(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Conviction, E> {
                Ok(Conviction::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Conviction, E> {
                if v == "inf" {
                    Ok(Conviction::Infinite)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(ConvictionVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleMetrics {
    pub antecedent: String,
    pub consequent: String,
    pub support_a: f64,
    pub support_b: f64,
    pub support_ab: f64,
    pub confidence: f64,
    pub lift: f64,
    pub conviction: Conviction,
    /// Set on the rule with the highest lift in its batch.
    pub top_by_lift: bool,
}

/// Derives every single-antecedent, single-consequent rule from the size-2
/// frequent itemsets, keeping those with confidence >= `min_confidence`.
/// Rules come back sorted by descending lift (ties: descending confidence,
/// then antecedent/consequent name), with the winner flagged.
pub fn association_rules(itemsets: &[Itemset], min_confidence: f64) -> Result<Vec<RuleMetrics>> {
    let singles: BTreeMap<&str, f64> = itemsets
        .iter()
        .filter(|i| i.items.len() == 1)
        .map(|i| (i.items[0].as_str(), i.support))
        .collect();

    let mut rules = Vec::new();
    for itemset in itemsets.iter().filter(|i| i.items.len() == 2) {
        let pair = (itemset.items[0].as_str(), itemset.items[1].as_str());
        for (a, b) in [pair, (pair.1, pair.0)] {
            let support_a = *singles
                .get(a)
                .ok_or_else(|| Error::MissingSubsetSupport(vec![a.to_string()]))?;
            let support_b = *singles
                .get(b)
                .ok_or_else(|| Error::MissingSubsetSupport(vec![b.to_string()]))?;
            let support_ab = itemset.support;
            let confidence = support_ab / support_a;
            if confidence < min_confidence {
                continue;
            }
            rules.push(RuleMetrics {
                antecedent: a.to_string(),
                consequent: b.to_string(),
                support_a,
                support_b,
                support_ab,
                confidence,
                lift: confidence / support_b,
                conviction: conviction(support_a, support_b, support_ab),
                top_by_lift: false,
            });
        }
    }

    rules.sort_by(|x, y| {
        y.lift
            .total_cmp(&x.lift)
            .then(y.confidence.total_cmp(&x.confidence))
            .then(x.antecedent.cmp(&y.antecedent))
            .then(x.consequent.cmp(&y.consequent))
    });
    if let Some(first) = rules.first_mut() {
        first.top_by_lift = true;
    }
    Ok(rules)
}

/// (1 - P(B)) / (1 - confidence). Infinite exactly when the rule never fails
/// (confidence 1) and B is not universal. A universal consequent makes every
/// rule trivially exact; conviction is 1 there, the independence value.
///
/// Evaluated as supp(A) (1 - supp(B)) / (supp(A) - supp(AB)), which is the
/// same quantity without the rounding that 1 - supp(AB)/supp(A) picks up, so
/// rational supports give exact results.
fn conviction(support_a: f64, support_b: f64, support_ab: f64) -> Conviction {
    if support_ab >= support_a {
        if support_b < 1.0 {
            Conviction::Infinite
        } else {
            Conviction::Finite(1.0)
        }
    } else {
        Conviction::Finite(support_a * (1.0 - support_b) / (support_a - support_ab))
    }
}

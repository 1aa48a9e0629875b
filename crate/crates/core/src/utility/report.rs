//! Report payloads for the classification harness and the basket analysis.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::utility::apriori::apriori_frequent_itemsets;
use crate::utility::baskets::build_baskets;
use crate::utility::forest::{predict_proba, train_bagged_trees, TreeParams};
use crate::utility::metrics::{classification_metrics, ClassificationMetrics};
use crate::utility::rules::{association_rules, RuleMetrics};
use crate::utility::task::ClassificationTask;

pub const TRAIN_TAG: &str = "train";
pub const HOLDOUT_TAG: &str = "holdout";
pub const SYNTHETIC_TAG: &str = "synthetic";

/// One grid row: metrics for the model trained on `source`, evaluated on the
/// shared evaluation set. `error` records a per-source failure (for example
/// single-class labels in a degenerate synthetic dataset) without hiding the
/// other rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityRow {
    pub source: String,
    pub metrics: Option<ClassificationMetrics>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityReport {
    /// Rows in fixed order: train, holdout, synthetic.
    pub rows: Vec<UtilityRow>,
    pub eval_rows: usize,
    pub positive_rate: f64,
}

/// Trains one model per source dataset (same task, same params, same seed)
/// and scores each on the evaluation set.
pub fn utility_report(
    train: &Dataset,
    holdout: &Dataset,
    synthetic: &Dataset,
    eval: &Dataset,
    task: &ClassificationTask,
    params: TreeParams,
    seed: u64,
) -> Result<UtilityReport> {
    let (eval_features, eval_labels) = task.rows(eval)?;
    let positives = eval_labels.iter().filter(|l| **l).count();

    let sources = [
        (TRAIN_TAG, train),
        (HOLDOUT_TAG, holdout),
        (SYNTHETIC_TAG, synthetic),
    ];
    let mut rows = Vec::with_capacity(sources.len());
    for (tag, dataset) in sources {
        match score_source(dataset, &eval_features, &eval_labels, task, params, seed) {
            Ok(metrics) => rows.push(UtilityRow {
                source: tag.to_string(),
                metrics: Some(metrics),
                error: None,
            }),
            Err(err @ Error::SingleClassTraining) | Err(err @ Error::EmptyInput(_)) => {
                rows.push(UtilityRow {
                    source: tag.to_string(),
                    metrics: None,
                    error: Some(err.to_string()),
                })
            }
            Err(other) => return Err(other),
        }
    }

    Ok(UtilityReport {
        rows,
        eval_rows: eval_labels.len(),
        positive_rate: positives as f64 / eval_labels.len().max(1) as f64,
    })
}

fn score_source(
    dataset: &Dataset,
    eval_features: &Dataset,
    eval_labels: &[bool],
    task: &ClassificationTask,
    params: TreeParams,
    seed: u64,
) -> Result<ClassificationMetrics> {
    let (features, labels) = task.rows(dataset)?;
    let model = train_bagged_trees(&features, &labels, params, seed)?;
    let scores = predict_proba(&model, eval_features)?;
    classification_metrics(eval_labels, &scores, 0.5)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasketColumns {
    pub household: String,
    pub week: String,
    pub product: String,
}

/// One comparison row: the dataset's top rule by lift, or `None` when no
/// rule clears the support/confidence thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationRow {
    pub source: String,
    pub baskets: usize,
    pub frequent_itemsets: usize,
    pub top_rule: Option<RuleMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationReport {
    pub min_support: f64,
    pub min_confidence: f64,
    pub rows: Vec<AssociationRow>,
}

/// Mines each named dataset's baskets and reports the top association rule
/// per dataset, in input order.
pub fn association_report(
    datasets: &[(String, Dataset)],
    columns: &BasketColumns,
    min_support: f64,
    min_confidence: f64,
) -> Result<AssociationReport> {
    let mut rows = Vec::with_capacity(datasets.len());
    for (name, dataset) in datasets {
        let baskets = build_baskets(dataset, &columns.household, &columns.week, &columns.product)?;
        if baskets.is_empty() {
            rows.push(AssociationRow {
                source: name.clone(),
                baskets: 0,
                frequent_itemsets: 0,
                top_rule: None,
            });
            continue;
        }
        let itemsets = apriori_frequent_itemsets(&baskets, min_support)?;
        let rules = association_rules(&itemsets, min_confidence)?;
        rows.push(AssociationRow {
            source: name.clone(),
            baskets: baskets.len(),
            frequent_itemsets: itemsets.len(),
            top_rule: rules.into_iter().next(),
        });
    }
    Ok(AssociationReport {
        min_support,
        min_confidence,
        rows,
    })
}

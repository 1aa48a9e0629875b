//! Machine-learning utility evaluation: a fixed bagged-tree classifier
//! trained on each data source and scored on a shared evaluation set, plus
//! Apriori market-basket analysis with confidence/lift/conviction rules.

mod apriori;
mod baskets;
mod forest;
mod metrics;
mod report;
mod rules;
mod task;

pub use apriori::{apriori_frequent_itemsets, Itemset};
pub use baskets::{build_baskets, Basket};
pub use forest::{predict_proba, train_bagged_trees, TrainedModel, TreeParams};
pub use metrics::{classification_metrics, roc_auc, ClassificationMetrics};
pub use report::{
    association_report, utility_report, AssociationReport, AssociationRow, BasketColumns,
    UtilityReport, UtilityRow, HOLDOUT_TAG, SYNTHETIC_TAG, TRAIN_TAG,
};
pub use rules::{association_rules, Conviction, RuleMetrics};
pub use task::{
    binary_labels, make_labels, AssemblyOp, AssemblyOutput, ClassificationTask, LabelRule,
    TaskAssembly,
};

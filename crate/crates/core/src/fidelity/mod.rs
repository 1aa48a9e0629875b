//! Distributional similarity metrics: marginal distances (Wasserstein,
//! Jensen-Shannon), pairwise association matrices (Pearson, Theil's U,
//! correlation ratio), and the combined fidelity report.

mod association;
mod marginal;
mod report;

pub use association::{
    association_matrices, correlation_ratio, matrix_l2_distance, pearson_corr, theils_u,
    AssociationMatrices, LabeledMatrix, MetricValue,
};
pub(crate) use marginal::quantile_sorted;
pub use marginal::{
    freedman_diaconis_bins, histogram_diff, jensen_shannon_distance, wasserstein_1d, HistogramDiff,
};
pub use report::{
    fidelity_report, ColumnDistance, FidelityOptions, FidelityReport, JointDistances,
};

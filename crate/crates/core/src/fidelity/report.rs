//! Assembles the per-column and joint fidelity comparison of two datasets.

use serde::{Deserialize, Serialize};

use crate::data::{align_categories, Dataset};
use crate::error::{Error, Result};
use crate::fidelity::association::{association_matrices, matrix_l2_distance};
use crate::fidelity::marginal::{jensen_shannon_distance, wasserstein_1d};
use crate::preprocess::{derive, DerivedFeatureSpec};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FidelityOptions {
    /// Min-max scale numeric columns by the train column's range before
    /// computing Wasserstein distances, for cross-column comparability.
    /// Off by default: raw distances keep the column's original units.
    #[serde(default)]
    pub scale_numeric: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnDistance {
    pub column: String,
    pub distance: f64,
}

/// L2 distances between the association matrices of the two datasets.
/// An entry is `None` when the dataset has no columns of the required kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistances {
    pub num_num: Option<f64>,
    pub cat_cat: Option<f64>,
    pub num_cat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    /// Wasserstein distance per numeric column, schema order.
    pub numeric: Vec<ColumnDistance>,
    /// Jensen-Shannon distance per categorical column, schema order.
    pub categorical: Vec<ColumnDistance>,
    /// Wasserstein distance per derived feature, kept out of the aggregates.
    pub derived: Vec<ColumnDistance>,
    /// Unweighted mean of the numeric entries.
    pub numeric_mean: Option<f64>,
    /// Unweighted mean of the categorical entries.
    pub categorical_mean: Option<f64>,
    pub joint: JointDistances,
    /// Degenerate association entries, prefixed with the dataset they came from.
    pub degenerate: Vec<String>,
}

/// Compares `other` against `train` column by column and through the three
/// association matrices. Both datasets must share a schema; derived features
/// are computed on each side independently and compared as extra numeric
/// columns.
pub fn fidelity_report(
    train: &Dataset,
    other: &Dataset,
    derived_specs: &[DerivedFeatureSpec],
    options: FidelityOptions,
) -> Result<FidelityReport> {
    if train.schema() != other.schema() {
        return Err(Error::SchemaMismatch(
            "fidelity comparison requires identical schemas".to_string(),
        ));
    }

    let mut numeric = Vec::new();
    for name in train.schema().numeric_names() {
        let distance = numeric_distance(train.numeric(&name)?, other.numeric(&name)?, options)
            .map_err(|e| Error::in_column(&name, e))?;
        numeric.push(ColumnDistance {
            column: name,
            distance,
        });
    }

    let mut categorical = Vec::new();
    for name in train.schema().categorical_names() {
        let index = align_categories(train, other, &name)?;
        let p = index.count_labels(train.categorical(&name)?)?;
        let q = index.count_labels(other.categorical(&name)?)?;
        let distance =
            jensen_shannon_distance(&p, &q, &index).map_err(|e| Error::in_column(&name, e))?;
        categorical.push(ColumnDistance {
            column: name,
            distance,
        });
    }

    let mut derived = Vec::new();
    for spec in derived_specs {
        let train_feature = derive(train, spec)?;
        let other_feature = derive(other, spec)?;
        let distance = numeric_distance(
            train_feature.numeric(&spec.name)?,
            other_feature.numeric(&spec.name)?,
            options,
        )
        .map_err(|e| Error::in_column(&spec.name, e))?;
        derived.push(ColumnDistance {
            column: spec.name.clone(),
            distance,
        });
    }

    let train_assoc = association_matrices(train)?;
    let other_assoc = association_matrices(other)?;
    let joint = JointDistances {
        num_num: joint_distance(&train_assoc.num_num, &other_assoc.num_num)?,
        cat_cat: joint_distance(&train_assoc.cat_cat, &other_assoc.cat_cat)?,
        num_cat: joint_distance(&train_assoc.num_cat, &other_assoc.num_cat)?,
    };

    let mut degenerate = Vec::new();
    degenerate.extend(train_assoc.degenerate.iter().map(|d| format!("train: {d}")));
    degenerate.extend(other_assoc.degenerate.iter().map(|d| format!("other: {d}")));

    Ok(FidelityReport {
        numeric_mean: mean_of(&numeric),
        categorical_mean: mean_of(&categorical),
        numeric,
        categorical,
        derived,
        joint,
        degenerate,
    })
}

fn numeric_distance(train: &[f64], other: &[f64], options: FidelityOptions) -> Result<f64> {
    if !options.scale_numeric {
        return wasserstein_1d(train, other);
    }
    if train.is_empty() {
        return Err(Error::EmptyInput("first sample vector"));
    }
    let lo = train.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = train.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if range == 0.0 {
        // A constant train column gives no scale; fall back to raw units.
        return wasserstein_1d(train, other);
    }
    let scale = |v: &f64| (v - lo) / range;
    let train_scaled: Vec<f64> = train.iter().map(scale).collect();
    let other_scaled: Vec<f64> = other.iter().map(scale).collect();
    wasserstein_1d(&train_scaled, &other_scaled)
}

fn joint_distance(
    a: &crate::fidelity::LabeledMatrix,
    b: &crate::fidelity::LabeledMatrix,
) -> Result<Option<f64>> {
    if a.is_empty() && b.is_empty() {
        return Ok(None);
    }
    matrix_l2_distance(a, b).map(Some)
}

fn mean_of(entries: &[ColumnDistance]) -> Option<f64> {
    if entries.is_empty() {
        return None;
    }
    Some(entries.iter().map(|e| e.distance).sum::<f64>() / entries.len() as f64)
}

//! Pairwise association metrics and the three column-interaction matrices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

/// A metric value plus a flag marking degenerate inputs (zero variance or
/// zero entropy), where the value is a convention rather than a measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub value: f64,
    pub degenerate: bool,
}

impl MetricValue {
    fn measured(value: f64) -> Self {
        MetricValue {
            value,
            degenerate: false,
        }
    }

    fn fallback(value: f64) -> Self {
        MetricValue {
            value,
            degenerate: true,
        }
    }
}

/// Product-moment correlation. Zero variance on either side yields 0 with
/// the degenerate flag set, so a constant column reads as "no association"
/// instead of poisoning the matrix with NaN.
pub fn pearson_corr(x: &[f64], y: &[f64]) -> Result<MetricValue> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::EmptyInput("pearson needs at least two points"));
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(MetricValue::fallback(0.0));
    }
    Ok(MetricValue::measured(
        (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0),
    ))
}

/// Theil's uncertainty coefficient U(x|y) = (H(x) - H(x|y)) / H(x) with
/// natural-log entropies. A constant `x` has zero entropy and is perfectly
/// predictable, so the result is 1 with the degenerate flag set.
pub fn theils_u(x: &[String], y: &[String]) -> Result<MetricValue> {
    if x.is_empty() {
        return Err(Error::EmptyInput("categorical vector"));
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len() as f64;
    let h_x = label_entropy(x.iter());
    if h_x == 0.0 {
        return Ok(MetricValue::fallback(1.0));
    }

    let mut rows_by_y: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, label) in y.iter().enumerate() {
        rows_by_y.entry(label).or_default().push(i);
    }
    let mut h_x_given_y = 0.0;
    for rows in rows_by_y.values() {
        let weight = rows.len() as f64 / n;
        h_x_given_y += weight * label_entropy(rows.iter().map(|&i| &x[i]));
    }

    Ok(MetricValue::measured(
        ((h_x - h_x_given_y) / h_x).clamp(0.0, 1.0),
    ))
}

fn label_entropy<'a>(labels: impl Iterator<Item = &'a String>) -> f64 {
    let mut counts: BTreeMap<&str, f64> = BTreeMap::new();
    let mut total = 0.0;
    for label in labels {
        *counts.entry(label).or_insert(0.0) += 1.0;
        total += 1.0;
    }
    counts
        .values()
        .map(|c| {
            let p = c / total;
            -p * p.ln()
        })
        .sum()
}

/// Correlation ratio: sqrt of between-group variance over total variance.
/// Zero total variance means the values carry no signal to explain, so the
/// result is 0 with the degenerate flag set.
pub fn correlation_ratio(categories: &[String], values: &[f64]) -> Result<MetricValue> {
    if categories.is_empty() {
        return Err(Error::EmptyInput("category vector"));
    }
    if categories.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: categories.len(),
            right: values.len(),
        });
    }
    let n = values.len() as f64;
    let grand_mean = values.iter().sum::<f64>() / n;
    let total: f64 = values.iter().map(|v| (v - grand_mean).powi(2)).sum();
    if total == 0.0 {
        return Ok(MetricValue::fallback(0.0));
    }

    let mut groups: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    for (label, value) in categories.iter().zip(values) {
        let entry = groups.entry(label).or_insert((0.0, 0.0));
        entry.0 += 1.0;
        entry.1 += value;
    }
    let between: f64 = groups
        .values()
        .map(|(count, sum)| {
            let mean = sum / count;
            count * (mean - grand_mean).powi(2)
        })
        .sum();

    Ok(MetricValue::measured(
        (between / total).clamp(0.0, 1.0).sqrt(),
    ))
}

/// A matrix with named rows and columns so distances can verify that two
/// matrices describe the same columns in the same order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl LabeledMatrix {
    fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() || self.cols.is_empty()
    }
}

/// The three interaction matrices over a dataset's columns, in schema order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationMatrices {
    /// Pearson correlations, numeric x numeric. Symmetric, unit diagonal.
    pub num_num: LabeledMatrix,
    /// Theil's U, categorical x categorical; entry (i, j) = U(col_i | col_j).
    /// Not symmetric.
    pub cat_cat: LabeledMatrix,
    /// Correlation ratios; rows are categorical, columns numeric.
    pub num_cat: LabeledMatrix,
    /// Human-readable descriptions of entries that hit a degeneracy fallback.
    pub degenerate: Vec<String>,
}

pub fn association_matrices(dataset: &Dataset) -> Result<AssociationMatrices> {
    let numeric = dataset.schema().numeric_names();
    let categorical = dataset.schema().categorical_names();
    let mut degenerate = Vec::new();

    let mut num_num = vec![vec![0.0; numeric.len()]; numeric.len()];
    for i in 0..numeric.len() {
        num_num[i][i] = 1.0;
        for j in (i + 1)..numeric.len() {
            let m = pearson_corr(dataset.numeric(&numeric[i])?, dataset.numeric(&numeric[j])?)
                .map_err(|e| Error::in_column(&numeric[i], e))?;
            if m.degenerate {
                degenerate.push(format!("pearson({}, {})", numeric[i], numeric[j]));
            }
            num_num[i][j] = m.value;
            num_num[j][i] = m.value;
        }
    }

    let mut cat_cat = vec![vec![0.0; categorical.len()]; categorical.len()];
    for (i, xi) in categorical.iter().enumerate() {
        for (j, yj) in categorical.iter().enumerate() {
            let m = theils_u(dataset.categorical(xi)?, dataset.categorical(yj)?)
                .map_err(|e| Error::in_column(xi, e))?;
            if m.degenerate && i <= j {
                degenerate.push(format!("theils_u({xi} | {yj})"));
            }
            cat_cat[i][j] = m.value;
        }
    }

    let mut num_cat = vec![vec![0.0; numeric.len()]; categorical.len()];
    for (i, cat) in categorical.iter().enumerate() {
        for (j, num) in numeric.iter().enumerate() {
            let m = correlation_ratio(dataset.categorical(cat)?, dataset.numeric(num)?)
                .map_err(|e| Error::in_column(num, e))?;
            if m.degenerate {
                degenerate.push(format!("correlation_ratio({cat}, {num})"));
            }
            num_cat[i][j] = m.value;
        }
    }

    Ok(AssociationMatrices {
        num_num: LabeledMatrix {
            rows: numeric.clone(),
            cols: numeric.clone(),
            values: num_num,
        },
        cat_cat: LabeledMatrix {
            rows: categorical.clone(),
            cols: categorical.clone(),
            values: cat_cat,
        },
        num_cat: LabeledMatrix {
            rows: categorical,
            cols: numeric,
            values: num_cat,
        },
        degenerate,
    })
}

/// Euclidean norm of the element-wise difference of two labeled matrices.
/// The diagonal is included; for same-kind matrices it contributes zero.
pub fn matrix_l2_distance(a: &LabeledMatrix, b: &LabeledMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: format!("{}x{}", a.shape().0, a.shape().1),
            right: format!("{}x{}", b.shape().0, b.shape().1),
        });
    }
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::ColumnOrderMismatch);
    }
    let mut sum = 0.0;
    for (row_a, row_b) in a.values.iter().zip(&b.values) {
        for (va, vb) in row_a.iter().zip(row_b) {
            let d = va - vb;
            sum += d * d;
        }
    }
    Ok(sum.sqrt())
}

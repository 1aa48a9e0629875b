//! Privacy metrics: mixed-type L1 Distance to Closest Record and the
//! closer-to-train ratio, reported raw and normalized against the
//! holdout-to-train baseline.

use serde::{Deserialize, Serialize};

use crate::data::{ColumnKind, Dataset, TableSchema};
use crate::error::{Error, Result};

/// Scaling context for record distances: per-numeric-column min/max bounds
/// fitted on the training dataset. Categorical mismatches always cost 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceConfig {
    schema: TableSchema,
    /// (min, max) per numeric column, in schema order.
    numeric_bounds: Vec<(f64, f64)>,
    /// Numeric columns whose training range is zero; they contribute no
    /// distance and are listed here so reports can flag them.
    pub zero_range_columns: Vec<String>,
}

impl DistanceConfig {
    /// Fits min-max bounds on the training dataset.
    pub fn fit(train: &Dataset) -> Result<Self> {
        if train.row_count() == 0 {
            return Err(Error::EmptyReference);
        }
        let mut numeric_bounds = Vec::new();
        let mut zero_range_columns = Vec::new();
        for name in train.schema().numeric_names() {
            let values = train.numeric(&name)?;
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if lo == hi {
                zero_range_columns.push(name);
            }
            numeric_bounds.push((lo, hi));
        }
        Ok(DistanceConfig {
            schema: train.schema().clone(),
            numeric_bounds,
            zero_range_columns,
        })
    }

    pub fn schema(&self) -> &TableSchema {
        &self.schema
    }

    fn check_schema(&self, dataset: &Dataset) -> Result<()> {
        if dataset.schema() != &self.schema {
            return Err(Error::SchemaMismatch(
                "dataset schema differs from the distance config's training schema".to_string(),
            ));
        }
        Ok(())
    }

    /// Scales a numeric value into [0, 1] by the training bounds, clamping
    /// values outside the training range. Zero-range columns map to 0.
    fn scale(&self, numeric_index: usize, value: f64) -> f64 {
        let (lo, hi) = self.numeric_bounds[numeric_index];
        if hi == lo {
            return 0.0;
        }
        ((value - lo) / (hi - lo)).clamp(0.0, 1.0)
    }
}

/// Row views used by the distance scan: numeric cells scaled later, labels
/// compared verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordView<'a> {
    numeric: Vec<f64>,
    labels: Vec<&'a str>,
}

/// Splits a dataset into per-row numeric/categorical views in schema order.
pub fn record_views<'a>(
    dataset: &'a Dataset,
    config: &DistanceConfig,
) -> Result<Vec<RecordView<'a>>> {
    config.check_schema(dataset)?;
    let mut numeric_cols: Vec<&[f64]> = Vec::new();
    let mut label_cols: Vec<&[String]> = Vec::new();
    for column in &dataset.schema().columns {
        match column.kind {
            ColumnKind::Numeric => numeric_cols.push(dataset.numeric(&column.name)?),
            ColumnKind::Categorical => label_cols.push(dataset.categorical(&column.name)?),
        }
    }
    let views = (0..dataset.row_count())
        .map(|row| RecordView {
            numeric: numeric_cols.iter().map(|c| c[row]).collect(),
            labels: label_cols.iter().map(|c| c[row].as_str()).collect(),
        })
        .collect();
    Ok(views)
}

/// Mixed-type L1 distance: scaled-clamped absolute differences on numeric
/// columns plus a unit cost per categorical mismatch.
pub fn mixed_l1_distance(a: &RecordView, b: &RecordView, config: &DistanceConfig) -> f64 {
    let mut total = 0.0;
    for (i, (va, vb)) in a.numeric.iter().zip(&b.numeric).enumerate() {
        total += (config.scale(i, *va) - config.scale(i, *vb)).abs();
    }
    for (la, lb) in a.labels.iter().zip(&b.labels) {
        if la != lb {
            total += 1.0;
        }
    }
    total
}

/// Per-record minimum distances from each query row to the reference rows,
/// with median and 5th-percentile aggregates. Brute-force exact scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcrResult {
    pub distances: Vec<f64>,
    pub median: f64,
    pub p05: f64,
}

pub fn dcr(query: &Dataset, reference: &Dataset, config: &DistanceConfig) -> Result<DcrResult> {
    if reference.row_count() == 0 {
        return Err(Error::EmptyReference);
    }
    if query.row_count() == 0 {
        return Err(Error::EmptyInput("query dataset has no rows"));
    }
    let query_views = record_views(query, config)?;
    let reference_views = record_views(reference, config)?;

    let distances: Vec<f64> = query_views
        .iter()
        .map(|q| {
            reference_views
                .iter()
                .map(|r| mixed_l1_distance(q, r, config))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();

    let mut sorted = distances.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(DcrResult {
        median: crate::fidelity::quantile_sorted(&sorted, 0.5),
        p05: crate::fidelity::quantile_sorted(&sorted, 0.05),
        distances,
    })
}

/// Fraction of synthetic records at least as close to the training set as to
/// the holdout set (ties count as closer-to-train).
pub fn ccr(
    synthetic: &Dataset,
    train: &Dataset,
    holdout: &Dataset,
    config: &DistanceConfig,
) -> Result<f64> {
    let to_train = dcr(synthetic, train, config)?;
    let to_holdout = dcr(synthetic, holdout, config)?;
    let closer = to_train
        .distances
        .iter()
        .zip(&to_holdout.distances)
        .filter(|(t, h)| t <= h)
        .count();
    Ok(closer as f64 / to_train.distances.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrivacyReport {
    /// Median DCR of synthetic records to the training set, raw units.
    pub dcr_raw_median: f64,
    /// Median DCR of holdout records to the training set (the baseline).
    pub dcr_holdout_baseline: f64,
    /// dcr_raw_median / dcr_holdout_baseline; the holdout itself reads 1.
    /// Absent when the baseline is 0 (holdout overlaps train exactly).
    pub dcr_normalized: Option<f64>,
    /// 5th percentile of synthetic-to-train DCR: worst-case exposure.
    pub dcr_p05: f64,
    pub ccr: f64,
    /// Numeric columns with zero training range (contribute no distance).
    pub zero_range_columns: Vec<String>,
}

/// Builds the full privacy panel: DCR of S against T, the H-against-T
/// baseline, the normalized ratio, and CCR.
pub fn privacy_report(
    synthetic: &Dataset,
    train: &Dataset,
    holdout: &Dataset,
    config: &DistanceConfig,
) -> Result<PrivacyReport> {
    let synth_dcr = dcr(synthetic, train, config)?;
    let holdout_dcr = dcr(holdout, train, config)?;
    let ccr_value = ccr(synthetic, train, holdout, config)?;
    let dcr_normalized = if holdout_dcr.median > 0.0 {
        Some(synth_dcr.median / holdout_dcr.median)
    } else {
        None
    };
    Ok(PrivacyReport {
        dcr_raw_median: synth_dcr.median,
        dcr_holdout_baseline: holdout_dcr.median,
        dcr_normalized,
        dcr_p05: synth_dcr.p05,
        ccr: ccr_value,
        zero_range_columns: config.zero_range_columns.clone(),
    })
}

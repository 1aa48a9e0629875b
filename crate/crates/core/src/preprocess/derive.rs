//! Derived numeric features (unit price, basket size, ratios, differences).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

/// A derived feature: a new numeric column computed from existing columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedFeatureSpec {
    /// Output column name; must not collide with an existing column.
    pub name: String,
    pub formula: DerivedFormula,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DerivedFormula {
    /// Per-row `sales / quantity`.
    UnitPrice { sales_col: String, qty_col: String },
    /// Every row receives the sum of `qty_col` over that row's
    /// `group_cols` group.
    BasketSize {
        group_cols: Vec<String>,
        qty_col: String,
    },
    /// Per-row `a / b`.
    Ratio { a: String, b: String },
    /// Per-row `a - b`.
    Difference { a: String, b: String },
}

impl DerivedFeatureSpec {
    pub fn unit_price(name: &str, sales_col: &str, qty_col: &str) -> Self {
        DerivedFeatureSpec {
            name: name.to_string(),
            formula: DerivedFormula::UnitPrice {
                sales_col: sales_col.to_string(),
                qty_col: qty_col.to_string(),
            },
        }
    }

    pub fn basket_size(name: &str, group_cols: &[&str], qty_col: &str) -> Self {
        DerivedFeatureSpec {
            name: name.to_string(),
            formula: DerivedFormula::BasketSize {
                group_cols: group_cols.iter().map(|c| c.to_string()).collect(),
                qty_col: qty_col.to_string(),
            },
        }
    }
}

/// Append the derived column described by `spec`.
pub fn derive(dataset: &Dataset, spec: &DerivedFeatureSpec) -> Result<Dataset> {
    if dataset.schema().index_of(&spec.name).is_ok() {
        return Err(Error::NameCollision(spec.name.clone()));
    }
    let values = match &spec.formula {
        DerivedFormula::UnitPrice { sales_col, qty_col } => {
            divide(dataset, &spec.name, sales_col, qty_col)?
        }
        DerivedFormula::Ratio { a, b } => divide(dataset, &spec.name, a, b)?,
        DerivedFormula::Difference { a, b } => {
            let left = dataset.numeric(a)?;
            let right = dataset.numeric(b)?;
            left.iter().zip(right).map(|(x, y)| x - y).collect()
        }
        DerivedFormula::BasketSize {
            group_cols,
            qty_col,
        } => {
            let key_idx: Vec<usize> = group_cols
                .iter()
                .map(|c| dataset.schema().index_of(c))
                .collect::<Result<_>>()?;
            let qty = dataset.numeric(qty_col)?;
            let keys = crate::preprocess::row_keys(dataset, &key_idx);
            let mut totals: HashMap<&[String], f64> = HashMap::new();
            for (row, key) in keys.iter().enumerate() {
                *totals.entry(key.as_slice()).or_insert(0.0) += qty[row];
            }
            keys.iter().map(|key| totals[key.as_slice()]).collect()
        }
    };
    dataset.with_numeric_column(&spec.name, values)
}

/// Apply a list of derived-feature specs in order.
pub fn derive_all(dataset: &Dataset, specs: &[DerivedFeatureSpec]) -> Result<Dataset> {
    let mut out = dataset.clone();
    for spec in specs {
        out = derive(&out, spec)?;
    }
    Ok(out)
}

fn divide(dataset: &Dataset, name: &str, num_col: &str, den_col: &str) -> Result<Vec<f64>> {
    let num = dataset.numeric(num_col)?;
    let den = dataset.numeric(den_col)?;
    num.iter()
        .zip(den)
        .enumerate()
        .map(|(row, (x, y))| {
            if *y == 0.0 {
                Err(Error::DivisionByZero {
                    column: name.to_string(),
                    row,
                })
            } else {
                Ok(x / y)
            }
        })
        .collect()
}

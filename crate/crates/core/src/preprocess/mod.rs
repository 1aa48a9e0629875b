//! Retail-style preprocessing and the three-way train/holdout/eval split.
//!
//! The pipeline mirrors what a weekly retail transaction table needs before
//! any evaluation can run: drop non-positive transactions, drop rarely bought
//! products, aggregate to one row per (household, product, week), group
//! customers into demographic clusters, and attach derived features such as
//! unit price and basket size.

mod derive;
mod groupby;
mod split;

pub use derive::{derive, derive_all, DerivedFeatureSpec, DerivedFormula};
pub use groupby::{aggregate, aggregate_weekly, Aggregation};
pub use split::{split, SplitBundle, SplitSpec};

use std::collections::HashMap;

use crate::data::{Column, ColumnKind, Dataset, RawTable};
use crate::error::{Error, Result};

/// Name of the column appended by [`cluster_customers`].
pub const CLUSTER_COLUMN: &str = "customer_cluster";

/// Remove rows whose quantity or sales value is not strictly positive,
/// preserving the order of the surviving rows.
pub fn filter_positive(transactions: &Dataset, qty_col: &str, sales_col: &str) -> Result<Dataset> {
    let qty = transactions.numeric(qty_col)?;
    let sales = transactions.numeric(sales_col)?;
    let keep: Vec<usize> = (0..transactions.row_count())
        .filter(|&i| qty[i] > 0.0 && sales[i] > 0.0)
        .collect();
    Ok(transactions.take_rows(&keep))
}

/// Remove rows whose product label occurs fewer than `min_count` times in the
/// input.
pub fn remove_infrequent_products(
    transactions: &Dataset,
    product_col: &str,
    min_count: usize,
) -> Result<Dataset> {
    let products = transactions.categorical(product_col)?;
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for label in products {
        *counts.entry(label.as_str()).or_insert(0) += 1;
    }
    let keep: Vec<usize> = (0..transactions.row_count())
        .filter(|&i| counts[products[i].as_str()] >= min_count)
        .collect();
    Ok(transactions.take_rows(&keep))
}

/// Append a `customer_cluster` column whose label is the canonical
/// concatenation of the demographic tuple; customers with identical
/// demographics share a cluster.
pub fn cluster_customers(transactions: &Dataset, demographic_cols: &[String]) -> Result<Dataset> {
    let mut columns = Vec::with_capacity(demographic_cols.len());
    for name in demographic_cols {
        columns.push(transactions.categorical(name)?);
    }
    let labels: Vec<String> = (0..transactions.row_count())
        .map(|row| {
            columns
                .iter()
                .map(|col| col[row].as_str())
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect();
    transactions.with_categorical_column(CLUSTER_COLUMN, labels)
}

/// Join the three raw retail source tables into one wide table.
///
/// Demographics are keyed by `household_col`, the product catalog by
/// `product_col`; duplicate catalog keys keep their first row. Transactions
/// whose household has no demographics row (unregistered customers) or whose
/// product is missing from the catalog are dropped.
pub fn merge_retail_tables(
    transactions: &RawTable,
    demographics: &RawTable,
    products: &RawTable,
    household_col: &str,
    product_col: &str,
) -> Result<RawTable> {
    let txn_household = transactions.column_index(household_col)?;
    let txn_product = transactions.column_index(product_col)?;
    let demo_key = demographics.column_index(household_col)?;
    let prod_key = products.column_index(product_col)?;

    let mut demo_rows: HashMap<&str, &Vec<String>> = HashMap::new();
    for row in &demographics.rows {
        demo_rows.entry(row[demo_key].as_str()).or_insert(row);
    }
    let mut prod_rows: HashMap<&str, &Vec<String>> = HashMap::new();
    for row in &products.rows {
        prod_rows.entry(row[prod_key].as_str()).or_insert(row);
    }

    let mut headers = transactions.headers.clone();
    let demo_cols: Vec<usize> = (0..demographics.headers.len())
        .filter(|&i| i != demo_key)
        .collect();
    let prod_cols: Vec<usize> = (0..products.headers.len())
        .filter(|&i| i != prod_key)
        .collect();
    headers.extend(demo_cols.iter().map(|&i| demographics.headers[i].clone()));
    headers.extend(prod_cols.iter().map(|&i| products.headers[i].clone()));

    let mut rows = Vec::new();
    for row in &transactions.rows {
        let (Some(demo), Some(prod)) = (
            demo_rows.get(row[txn_household].as_str()),
            prod_rows.get(row[txn_product].as_str()),
        ) else {
            continue;
        };
        let mut merged = row.clone();
        merged.extend(demo_cols.iter().map(|&i| demo[i].clone()));
        merged.extend(prod_cols.iter().map(|&i| prod[i].clone()));
        rows.push(merged);
    }
    Ok(RawTable { headers, rows })
}

pub(crate) fn require_kind(dataset: &Dataset, column: &str, expected: ColumnKind) -> Result<()> {
    let actual = dataset.schema().kind_of(column)?;
    if actual != expected {
        return Err(Error::KindMismatch {
            column: column.to_string(),
            expected,
            actual,
        });
    }
    Ok(())
}

/// Canonical per-row key over a set of columns, used for grouping.
pub(crate) fn row_keys(dataset: &Dataset, cols: &[usize]) -> Vec<Vec<String>> {
    (0..dataset.row_count())
        .map(|row| cols.iter().map(|&c| dataset.cell_text(c, row)).collect())
        .collect()
}

#[allow(unused)]
fn column_kind_name(column: &Column) -> &'static str {
    match column {
        Column::Numeric(_) => "numeric",
        Column::Categorical(_) => "categorical",
    }
}

//! Deterministic group-by aggregation (groups emitted in first-appearance
//! order).

use std::collections::HashMap;

use crate::data::{Column, ColumnKind, ColumnSchema, Dataset, TableSchema};
use crate::error::{Error, Result};
use crate::preprocess::{require_kind, row_keys};

/// How one output column is computed from the rows of a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    /// Sum of a numeric column.
    Sum,
    /// Mean of a numeric column.
    Mean,
    /// First value in input order, any kind.
    First,
}

/// Group `dataset` by `key_cols` and compute one output column per
/// `(source, aggregation, output name)` triple. The output has one row per
/// distinct key tuple; key columns come first, then the aggregated columns in
/// the order given.
pub fn aggregate(
    dataset: &Dataset,
    key_cols: &[String],
    outputs: &[(String, Aggregation, String)],
) -> Result<Dataset> {
    let key_idx: Vec<usize> = key_cols
        .iter()
        .map(|c| dataset.schema().index_of(c))
        .collect::<Result<_>>()?;
    for (source, agg, _) in outputs {
        match agg {
            Aggregation::Sum | Aggregation::Mean => {
                require_kind(dataset, source, ColumnKind::Numeric)?
            }
            Aggregation::First => {
                dataset.schema().index_of(source)?;
            }
        }
    }

    // Group row indices by key tuple, keeping first-appearance order.
    let keys = row_keys(dataset, &key_idx);
    let mut order: Vec<Vec<usize>> = Vec::new();
    let mut lookup: HashMap<Vec<String>, usize> = HashMap::new();
    for (row, key) in keys.into_iter().enumerate() {
        match lookup.get(&key) {
            Some(&g) => order[g].push(row),
            None => {
                lookup.insert(key, order.len());
                order.push(vec![row]);
            }
        }
    }

    let mut schema_cols = Vec::new();
    let mut columns = Vec::new();
    for (&idx, name) in key_idx.iter().zip(key_cols) {
        let decl = &dataset.schema().columns[idx];
        schema_cols.push(ColumnSchema {
            name: name.clone(),
            kind: decl.kind,
            alias: decl.alias.clone(),
        });
        let firsts: Vec<usize> = order.iter().map(|g| g[0]).collect();
        columns.push(dataset.columns()[idx].clone_rows(&firsts));
    }

    for (source, agg, out_name) in outputs {
        let src_idx = dataset.schema().index_of(source)?;
        let src = &dataset.columns()[src_idx];
        match agg {
            Aggregation::Sum | Aggregation::Mean => {
                let Column::Numeric(values) = src else {
                    unreachable!("kind checked above")
                };
                let agg_values: Vec<f64> = order
                    .iter()
                    .map(|group| {
                        let sum: f64 = group.iter().map(|&r| values[r]).sum();
                        match agg {
                            Aggregation::Sum => sum,
                            Aggregation::Mean => sum / group.len() as f64,
                            Aggregation::First => unreachable!(),
                        }
                    })
                    .collect();
                schema_cols.push(ColumnSchema::numeric(out_name));
                columns.push(Column::Numeric(agg_values));
            }
            Aggregation::First => {
                let firsts: Vec<usize> = order.iter().map(|g| g[0]).collect();
                let decl = &dataset.schema().columns[src_idx];
                schema_cols.push(ColumnSchema {
                    name: out_name.clone(),
                    kind: decl.kind,
                    alias: None,
                });
                columns.push(src.clone_rows(&firsts));
            }
        }
    }

    Dataset::new(TableSchema::new(schema_cols)?, columns)
}

/// One row per distinct `key_cols` tuple; `sum_cols` are summed, `first_cols`
/// take the first value in input order. Key columns are typically
/// `[household, product, week]`.
pub fn aggregate_weekly(
    transactions: &Dataset,
    key_cols: &[String],
    sum_cols: &[String],
    first_cols: &[String],
) -> Result<Dataset> {
    let mut outputs = Vec::new();
    for c in sum_cols {
        outputs.push((c.clone(), Aggregation::Sum, c.clone()));
    }
    for c in first_cols {
        if key_cols.contains(c) {
            return Err(Error::NameCollision(c.clone()));
        }
        outputs.push((c.clone(), Aggregation::First, c.clone()));
    }
    aggregate(transactions, key_cols, &outputs)
}

impl Column {
    fn clone_rows(&self, rows: &[usize]) -> Column {
        match self {
            Column::Numeric(v) => Column::Numeric(rows.iter().map(|&i| v[i]).collect()),
            Column::Categorical(v) => {
                Column::Categorical(rows.iter().map(|&i| v[i].clone()).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::ColumnSchema;

    fn weekly_input() -> Dataset {
        Dataset::new(
            TableSchema::new(vec![
                ColumnSchema::categorical("household_id"),
                ColumnSchema::categorical("product_id"),
                ColumnSchema::numeric("week"),
                ColumnSchema::numeric("quantity"),
                ColumnSchema::categorical("age"),
            ])
            .unwrap(),
            vec![
                Column::Categorical(vec!["h1".into(), "h1".into(), "h2".into()]),
                Column::Categorical(vec!["p".into(), "p".into(), "p".into()]),
                Column::Numeric(vec![1.0, 1.0, 1.0]),
                Column::Numeric(vec![1.0, 2.0, 5.0]),
                Column::Categorical(vec!["a".into(), "a".into(), "b".into()]),
            ],
        )
        .unwrap()
    }

    fn keys() -> Vec<String> {
        vec!["household_id".into(), "product_id".into(), "week".into()]
    }

    #[test]
    fn same_key_rows_are_summed() {
        let out = aggregate_weekly(
            &weekly_input(),
            &keys(),
            &["quantity".into()],
            &["age".into()],
        )
        .unwrap();
        assert_eq!(out.row_count(), 2);
        assert_eq!(out.numeric("quantity").unwrap(), &[3.0, 5.0]);
        assert_eq!(out.categorical("age").unwrap(), &["a", "b"]);
    }

    #[test]
    fn distinct_keys_are_identity_up_to_column_selection() {
        let ds = weekly_input().take_rows(&[0, 2]);
        let out = aggregate_weekly(&ds, &keys(), &["quantity".into()], &["age".into()]).unwrap();
        assert_eq!(out.row_count(), 2);
        assert_eq!(out.numeric("quantity").unwrap(), &[1.0, 5.0]);
    }

    #[test]
    fn sums_are_conserved() {
        let ds = weekly_input();
        let out = aggregate_weekly(&ds, &keys(), &["quantity".into()], &[]).unwrap();
        let before: f64 = ds.numeric("quantity").unwrap().iter().sum();
        let after: f64 = out.numeric("quantity").unwrap().iter().sum();
        assert_eq!(before, after);
    }

    #[test]
    fn sum_of_categorical_column_is_kind_mismatch() {
        assert!(matches!(
            aggregate_weekly(&weekly_input(), &keys(), &["age".into()], &[]),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn mean_aggregation() {
        let out = aggregate(
            &weekly_input(),
            &["household_id".into()],
            &[("quantity".into(), Aggregation::Mean, "avg_quantity".into())],
        )
        .unwrap();
        assert_eq!(out.numeric("avg_quantity").unwrap(), &[1.5, 5.0]);
    }
}

//! Market baskets: one per (household, week), holding the distinct products
//! bought in that visit.

use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::data::Dataset;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basket {
    /// (household, week) in canonical text form.
    pub key: (String, String),
    pub items: BTreeSet<String>,
}

/// Groups transactions into baskets keyed by (household, week). Baskets are
/// emitted in first-appearance order; items are deduplicated.
pub fn build_baskets(
    transactions: &Dataset,
    household_col: &str,
    week_col: &str,
    product_col: &str,
) -> Result<Vec<Basket>> {
    let household = transactions.schema().index_of(household_col)?;
    let week = transactions.schema().index_of(week_col)?;
    let product = transactions.schema().index_of(product_col)?;

    let mut baskets: Vec<Basket> = Vec::new();
    let mut lookup: HashMap<(String, String), usize> = HashMap::new();
    for row in 0..transactions.row_count() {
        let key = (
            transactions.cell_text(household, row),
            transactions.cell_text(week, row),
        );
        let item = transactions.cell_text(product, row);
        match lookup.get(&key) {
            Some(&slot) => {
                baskets[slot].items.insert(item);
            }
            None => {
                lookup.insert(key.clone(), baskets.len());
                let mut items = BTreeSet::new();
                items.insert(item);
                baskets.push(Basket { key, items });
            }
        }
    }
    Ok(baskets)
}

//! Seeded three-way split into train (T), holdout (H), and eval (E).

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};

const RATIO_SUM_TOLERANCE: f64 = 1e-12;

/// Split configuration: (train, holdout, eval) ratios, RNG seed, and an
/// optional grouping column that keeps correlated rows (e.g. one household's
/// transactions) inside a single part.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpec {
    pub ratios: [f64; 3],
    pub seed: u64,
    pub group_by: Option<String>,
}

impl SplitSpec {
    pub fn new(ratios: [f64; 3], seed: u64) -> Result<Self> {
        let spec = SplitSpec {
            ratios,
            seed,
            group_by: None,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn with_group_by(mut self, column: &str) -> Self {
        self.group_by = Some(column.to_string());
        self
    }

    fn check(&self) -> Result<()> {
        if self.ratios.iter().any(|&r| r < 0.0) {
            return Err(Error::InvalidRatios("ratios must be non-negative".into()));
        }
        let sum: f64 = self.ratios.iter().sum();
        if (sum - 1.0).abs() > RATIO_SUM_TOLERANCE {
            return Err(Error::InvalidRatios(format!(
                "ratios must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }
}

/// The three disjoint parts of a split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitBundle {
    pub train: Dataset,
    pub holdout: Dataset,
    pub eval: Dataset,
}

/// Partition `dataset` per `spec`. Deterministic given `(dataset, spec)`.
///
/// Row-level: target sizes are `floor(ratio * n)` with the remainder assigned
/// to T, then H, then E. With `group_by` set, whole groups go to one part and
/// sizes approximate the ratios at group granularity. Rows keep their input
/// order within each part.
pub fn split(dataset: &Dataset, spec: &SplitSpec) -> Result<SplitBundle> {
    spec.check()?;
    let n = dataset.row_count();
    if spec.ratios.iter().all(|&r| r > 0.0) && n < 3 && n > 0 {
        return Err(Error::InvalidRatios(format!(
            "three positive ratios need at least 3 rows, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let assignment = match &spec.group_by {
        None => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let sizes = part_sizes(n, &spec.ratios);
            let mut parts = [Vec::new(), Vec::new(), Vec::new()];
            let mut cursor = 0;
            for (part, &size) in parts.iter_mut().zip(&sizes) {
                part.extend_from_slice(&order[cursor..cursor + size]);
                cursor += size;
            }
            parts
        }
        Some(column) => {
            let col_idx = dataset.schema().index_of(column)?;
            // Groups in first-appearance order, then shuffled.
            let mut group_rows: Vec<Vec<usize>> = Vec::new();
            let mut lookup: HashMap<String, usize> = HashMap::new();
            for row in 0..n {
                let key = dataset.cell_text(col_idx, row);
                match lookup.get(&key) {
                    Some(&g) => group_rows[g].push(row),
                    None => {
                        lookup.insert(key, group_rows.len());
                        group_rows.push(vec![row]);
                    }
                }
            }
            let mut order: Vec<usize> = (0..group_rows.len()).collect();
            order.shuffle(&mut rng);

            // Each group goes to the part with the largest remaining deficit
            // against its real-valued row target; ties favor T, then H.
            let targets: Vec<f64> = spec.ratios.iter().map(|r| r * n as f64).collect();
            let mut assigned = [0usize; 3];
            let mut parts = [Vec::new(), Vec::new(), Vec::new()];
            for g in order {
                let part = (0..3)
                    .filter(|&p| spec.ratios[p] > 0.0)
                    .max_by(|&a, &b| {
                        let da = targets[a] - assigned[a] as f64;
                        let db = targets[b] - assigned[b] as f64;
                        da.partial_cmp(&db).expect("finite").then(b.cmp(&a))
                    })
                    .unwrap_or(0);
                assigned[part] += group_rows[g].len();
                parts[part].extend_from_slice(&group_rows[g]);
            }
            parts
        }
    };

    let take = |rows: &Vec<usize>| {
        let mut rows = rows.clone();
        rows.sort_unstable();
        dataset.take_rows(&rows)
    };
    Ok(SplitBundle {
        train: take(&assignment[0]),
        holdout: take(&assignment[1]),
        eval: take(&assignment[2]),
    })
}

/// floor(ratio * n) per part; remainder rows go to T, then H, then E.
fn part_sizes(n: usize, ratios: &[f64; 3]) -> [usize; 3] {
    let mut sizes = [0usize; 3];
    for (s, &r) in sizes.iter_mut().zip(ratios) {
        *s = (r * n as f64).floor() as usize;
    }
    let mut remainder = n - sizes.iter().sum::<usize>();
    for s in sizes.iter_mut() {
        if remainder == 0 {
            break;
        }
        *s += 1;
        remainder -= 1;
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Column, ColumnSchema, TableSchema};

    fn dataset(n: usize) -> Dataset {
        Dataset::new(
            TableSchema::new(vec![
                ColumnSchema::numeric("x"),
                ColumnSchema::categorical("household_id"),
            ])
            .unwrap(),
            vec![
                Column::Numeric((0..n).map(|i| i as f64).collect()),
                Column::Categorical((0..n).map(|i| format!("h{}", i % 7)).collect()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn exact_ratios_give_exact_sizes() {
        let bundle = split(&dataset(10), &SplitSpec::new([0.4, 0.4, 0.2], 7).unwrap()).unwrap();
        assert_eq!(bundle.train.row_count(), 4);
        assert_eq!(bundle.holdout.row_count(), 4);
        assert_eq!(bundle.eval.row_count(), 2);
    }

    #[test]
    fn remainder_goes_to_train_then_holdout() {
        // n=11 with (0.4,0.4,0.2): floors (4,4,2), remainder 1 -> T
        let bundle = split(&dataset(11), &SplitSpec::new([0.4, 0.4, 0.2], 7).unwrap()).unwrap();
        assert_eq!(bundle.train.row_count(), 5);
        assert_eq!(bundle.holdout.row_count(), 4);
        assert_eq!(bundle.eval.row_count(), 2);
    }

    #[test]
    fn degenerate_ratios_put_everything_in_train() {
        let bundle = split(&dataset(10), &SplitSpec::new([1.0, 0.0, 0.0], 7).unwrap()).unwrap();
        assert_eq!(bundle.train.row_count(), 10);
        assert_eq!(bundle.holdout.row_count(), 0);
        assert_eq!(bundle.eval.row_count(), 0);
    }

    #[test]
    fn same_seed_reproduces_the_partition() {
        let ds = dataset(100);
        let spec = SplitSpec::new([0.4, 0.4, 0.2], 99).unwrap();
        assert_eq!(split(&ds, &spec).unwrap(), split(&ds, &spec).unwrap());
    }

    #[test]
    fn different_seeds_differ_on_large_input() {
        let ds = dataset(1000);
        let a = split(&ds, &SplitSpec::new([0.4, 0.4, 0.2], 1).unwrap()).unwrap();
        let b = split(&ds, &SplitSpec::new([0.4, 0.4, 0.2], 2).unwrap()).unwrap();
        assert_ne!(a.train, b.train);
    }

    #[test]
    fn split_is_a_partition() {
        let ds = dataset(53);
        let bundle = split(&ds, &SplitSpec::new([0.5, 0.3, 0.2], 11).unwrap()).unwrap();
        let mut values: Vec<f64> = Vec::new();
        for part in [&bundle.train, &bundle.holdout, &bundle.eval] {
            values.extend_from_slice(part.numeric("x").unwrap());
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected: Vec<f64> = (0..53).map(|i| i as f64).collect();
        assert_eq!(values, expected);
    }

    #[test]
    fn grouped_split_keeps_groups_whole() {
        let ds = dataset(100);
        let spec = SplitSpec::new([0.4, 0.4, 0.2], 3)
            .unwrap()
            .with_group_by("household_id");
        let bundle = split(&ds, &spec).unwrap();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for (part_id, part) in [&bundle.train, &bundle.holdout, &bundle.eval]
            .iter()
            .enumerate()
        {
            for h in part.categorical("household_id").unwrap() {
                if let Some(&prev) = seen.get(h) {
                    assert_eq!(prev, part_id, "group {h} straddles parts");
                } else {
                    seen.insert(h.clone(), part_id);
                }
            }
        }
        let total = bundle.train.row_count() + bundle.holdout.row_count() + bundle.eval.row_count();
        assert_eq!(total, 100);
    }

    #[test]
    fn invalid_ratios_are_rejected() {
        assert!(matches!(
            SplitSpec::new([0.5, 0.4, 0.2], 1),
            Err(Error::InvalidRatios(_))
        ));
        assert!(matches!(
            SplitSpec::new([-0.1, 0.9, 0.2], 1),
            Err(Error::InvalidRatios(_))
        ));
    }

    #[test]
    fn unknown_group_column_is_rejected() {
        let spec = SplitSpec::new([0.4, 0.4, 0.2], 1)
            .unwrap()
            .with_group_by("nope");
        assert!(matches!(
            split(&dataset(10), &spec),
            Err(Error::UnknownColumn(_))
        ));
    }
}

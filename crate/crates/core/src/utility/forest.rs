//! A small deterministic bagged-tree classifier: CART-style trees with Gini
//! splits, trained on bootstrap resamples drawn from a seeded stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{CategoryIndex, ColumnKind, Dataset, TableSchema};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    #[serde(default = "default_n_trees")]
    pub n_trees: usize,
    #[serde(default = "default_max_depth")]
    pub max_depth: usize,
    #[serde(default = "default_min_leaf")]
    pub min_leaf: usize,
}

fn default_n_trees() -> usize {
    25
}

fn default_max_depth() -> usize {
    8
}

fn default_min_leaf() -> usize {
    5
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            n_trees: default_n_trees(),
            max_depth: default_max_depth(),
            min_leaf: default_min_leaf(),
        }
    }
}

/// Maps mixed-kind dataset columns to a numeric feature matrix. Categorical
/// columns become one-of-K indicators over the training category set; labels
/// unseen in training encode as all zeros.
#[derive(Debug, Clone)]
struct FeatureEncoder {
    schema: TableSchema,
    categories: Vec<Option<CategoryIndex>>,
}

impl FeatureEncoder {
    fn fit(train: &Dataset) -> Result<Self> {
        let mut categories = Vec::new();
        for column in &train.schema().columns {
            match column.kind {
                ColumnKind::Numeric => categories.push(None),
                ColumnKind::Categorical => {
                    let labels = train.categorical(&column.name)?;
                    categories.push(Some(CategoryIndex::from_labels(
                        &column.name,
                        labels.iter().cloned(),
                    )));
                }
            }
        }
        Ok(FeatureEncoder {
            schema: train.schema().clone(),
            categories,
        })
    }

    /// Column-major encoded matrix: `features[f][row]`.
    fn encode(&self, data: &Dataset) -> Result<Vec<Vec<f64>>> {
        if data.schema() != &self.schema {
            return Err(Error::SchemaMismatch(
                "feature columns differ from the model's training schema".to_string(),
            ));
        }
        let mut features: Vec<Vec<f64>> = Vec::new();
        for (column, index) in self.schema.columns.iter().zip(&self.categories) {
            match index {
                None => features.push(data.numeric(&column.name)?.to_vec()),
                Some(index) => {
                    let labels = data.categorical(&column.name)?;
                    let mut indicators = vec![vec![0.0; labels.len()]; index.labels().len()];
                    for (row, label) in labels.iter().enumerate() {
                        if let Some(pos) = index.position(label) {
                            indicators[pos][row] = 1.0;
                        }
                    }
                    features.extend(indicators);
                }
            }
        }
        Ok(features)
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        vote: bool,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    fn predict(&self, features: &[Vec<f64>], row: usize) -> bool {
        match self {
            Node::Leaf { vote } => *vote,
            Node::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if features[*feature][row] <= *threshold {
                    left.predict(features, row)
                } else {
                    right.predict(features, row)
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainedModel {
    params: TreeParams,
    encoder: FeatureEncoder,
    trees: Vec<Node>,
    /// Seed each tree's bootstrap stream was derived from.
    tree_seeds: Vec<u64>,
    /// Which dataset the model was fitted on (for report rows).
    pub tag: String,
}

impl TrainedModel {
    pub fn params(&self) -> TreeParams {
        self.params
    }

    pub fn tree_seeds(&self) -> &[u64] {
        &self.tree_seeds
    }

    pub fn with_tag(mut self, tag: &str) -> Self {
        self.tag = tag.to_string();
        self
    }
}

/// Trains `params.n_trees` trees, each on a bootstrap resample of the
/// training rows. Tree seeds are drawn up front from a ChaCha stream seeded
/// with `seed`, so results do not depend on training order.
pub fn train_bagged_trees(
    features: &Dataset,
    labels: &[bool],
    params: TreeParams,
    seed: u64,
) -> Result<TrainedModel> {
    let n = features.row_count();
    if n < 2 {
        return Err(Error::EmptyInput("training set needs at least two rows"));
    }
    if labels.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: labels.len(),
        });
    }
    if labels.iter().all(|l| *l) || labels.iter().all(|l| !*l) {
        return Err(Error::SingleClassTraining);
    }

    let encoder = FeatureEncoder::fit(features)?;
    let matrix = encoder.encode(features)?;

    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    let tree_seeds: Vec<u64> = (0..params.n_trees).map(|_| seeder.random()).collect();

    let trees = tree_seeds
        .iter()
        .map(|&tree_seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(tree_seed);
            let sample: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            grow_tree(&matrix, labels, sample, params, 0)
        })
        .collect();

    Ok(TrainedModel {
        params,
        encoder,
        trees,
        tree_seeds,
        tag: String::new(),
    })
}

/// Per-row fraction of trees voting positive.
pub fn predict_proba(model: &TrainedModel, features: &Dataset) -> Result<Vec<f64>> {
    let matrix = model.encoder.encode(features)?;
    let n_trees = model.trees.len() as f64;
    let scores = (0..features.row_count())
        .map(|row| {
            let votes = model
                .trees
                .iter()
                .filter(|tree| tree.predict(&matrix, row))
                .count();
            votes as f64 / n_trees
        })
        .collect();
    Ok(scores)
}

fn grow_tree(
    matrix: &[Vec<f64>],
    labels: &[bool],
    rows: Vec<usize>,
    params: TreeParams,
    depth: usize,
) -> Node {
    let positives = rows.iter().filter(|&&r| labels[r]).count();
    // Majority vote; exact ties go negative.
    let vote = positives * 2 > rows.len();

    if depth >= params.max_depth
        || positives == 0
        || positives == rows.len()
        || rows.len() < 2 * params.min_leaf
    {
        return Node::Leaf { vote };
    }

    match best_split(matrix, labels, &rows, params.min_leaf) {
        None => Node::Leaf { vote },
        Some((feature, threshold)) => {
            let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
                .into_iter()
                .partition(|&r| matrix[feature][r] <= threshold);
            let left = grow_tree(matrix, labels, left_rows, params, depth + 1);
            let right = grow_tree(matrix, labels, right_rows, params, depth + 1);
            Node::Split {
                feature,
                threshold,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
    }
}

/// Exhaustive Gini search over (feature, midpoint threshold) candidates.
/// Ties break toward the lower feature index, then the lower threshold, so
/// training is order-deterministic.
fn best_split(
    matrix: &[Vec<f64>],
    labels: &[bool],
    rows: &[usize],
    min_leaf: usize,
) -> Option<(usize, f64)> {
    let total = rows.len() as f64;
    let total_pos = rows.iter().filter(|&&r| labels[r]).count() as f64;
    let parent_gini = gini(total_pos, total);

    let mut best: Option<(f64, usize, f64)> = None;
    for (feature, column) in matrix.iter().enumerate() {
        // Sort this node's rows by feature value; scan split points between
        // distinct consecutive values, tracking left-side counts.
        let mut ordered: Vec<usize> = rows.to_vec();
        ordered.sort_by(|&a, &b| column[a].total_cmp(&column[b]));

        let mut left_n = 0.0;
        let mut left_pos = 0.0;
        for window in 0..ordered.len() - 1 {
            let row = ordered[window];
            left_n += 1.0;
            if labels[row] {
                left_pos += 1.0;
            }
            let here = column[row];
            let next = column[ordered[window + 1]];
            if here == next {
                continue;
            }
            let left_count = window + 1;
            let right_count = ordered.len() - left_count;
            if left_count < min_leaf || right_count < min_leaf {
                continue;
            }
            let right_n = total - left_n;
            let right_pos = total_pos - left_pos;
            let weighted = (left_n / total) * gini(left_pos, left_n)
                + (right_n / total) * gini(right_pos, right_n);
            if weighted + 1e-12 >= parent_gini {
                continue; // no real impurity decrease
            }
            let threshold = 0.5 * (here + next);
            let candidate = (weighted, feature, threshold);
            best = match best {
                None => Some(candidate),
                Some(current) => {
                    if candidate.0 < current.0 - 1e-12 {
                        Some(candidate)
                    } else {
                        Some(current)
                    }
                }
            };
        }
    }
    best.map(|(_, feature, threshold)| (feature, threshold))
}

fn gini(positives: f64, count: f64) -> f64 {
    if count == 0.0 {
        return 0.0;
    }
    let p = positives / count;
    2.0 * p * (1.0 - p)
}

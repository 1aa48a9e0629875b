//! Fixture synthesizers with known failure modes: a verbatim copy (maximal
//! privacy leak), a jittered copy (near-copy), independent marginal
//! resampling (good marginals, destroyed joints), and a light Gaussian
//! copula (balanced).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::data::{Column, ColumnKind, Dataset};
use crate::error::{Error, Result};
use crate::fidelity::pearson_corr;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SynthesisMethod {
    /// Training rows verbatim (resampled with replacement when the requested
    /// row count differs).
    Copy,
    /// Copy plus zero-mean uniform noise of half-width `noise_scale` times
    /// the column range on numeric cells; categorical cells flip to a
    /// uniformly random other label with probability `noise_scale`.
    NoisyCopy { noise_scale: f64 },
    /// Each column resampled independently from its own training values.
    IndependentMarginals,
    /// Numeric columns drawn through a Gaussian copula fitted with
    /// normal-scores correlation; categorical columns resampled
    /// independently.
    CopulaLite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesizerSpec {
    #[serde(flatten)]
    pub method: SynthesisMethod,
    pub seed: u64,
    /// Output row count; defaults to the training row count.
    #[serde(default)]
    pub rows: Option<usize>,
}

/// Generates a synthetic dataset from `train` with the requested method,
/// seed, and row count. All randomness comes from one ChaCha stream seeded
/// with `spec.seed`, drawn in a fixed order, so output is reproducible byte
/// for byte.
pub fn synthesize(train: &Dataset, spec: &SynthesizerSpec) -> Result<Dataset> {
    if train.row_count() == 0 {
        return Err(Error::EmptyInput("training dataset has no rows"));
    }
    let rows = spec.rows.unwrap_or(train.row_count());
    if rows == 0 {
        return Err(Error::InvalidSpec(
            "output row count must be at least 1".to_string(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match &spec.method {
        SynthesisMethod::Copy => Ok(copy_rows(train, rows, &mut rng)),
        SynthesisMethod::NoisyCopy { noise_scale } => {
            if *noise_scale < 0.0 || !noise_scale.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "noise_scale must be a non-negative number, got {noise_scale}"
                )));
            }
            noisy_copy(train, rows, *noise_scale, &mut rng)
        }
        SynthesisMethod::IndependentMarginals => independent_marginals(train, rows, &mut rng),
        SynthesisMethod::CopulaLite => copula_lite(train, rows, &mut rng),
    }
}

fn copy_rows(train: &Dataset, rows: usize, rng: &mut ChaCha8Rng) -> Dataset {
    if rows == train.row_count() {
        return train.clone();
    }
    let indices: Vec<usize> = (0..rows)
        .map(|_| rng.random_range(0..train.row_count()))
        .collect();
    train.take_rows(&indices)
}

fn noisy_copy(
    train: &Dataset,
    rows: usize,
    noise_scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Dataset> {
    let base = copy_rows(train, rows, rng);
    let mut columns = Vec::with_capacity(base.schema().columns.len());
    for column in &train.schema().columns {
        match column.kind {
            ColumnKind::Numeric => {
                let train_values = train.numeric(&column.name)?;
                let lo = train_values.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = train_values
                    .iter()
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max);
                let half_width = noise_scale * (hi - lo);
                let noisy = base
                    .numeric(&column.name)?
                    .iter()
                    .map(|v| {
                        if half_width > 0.0 {
                            v + rng.random_range(-half_width..=half_width)
                        } else {
                            *v
                        }
                    })
                    .collect();
                columns.push(Column::Numeric(noisy));
            }
            ColumnKind::Categorical => {
                let mut labels: Vec<String> = train.categorical(&column.name)?.to_vec();
                labels.sort();
                labels.dedup();
                let flipped = base
                    .categorical(&column.name)?
                    .iter()
                    .map(|label| {
                        let flip: f64 = rng.random();
                        if flip >= noise_scale {
                            return label.clone();
                        }
                        let others: Vec<&String> = labels.iter().filter(|l| *l != label).collect();
                        if others.is_empty() {
                            label.clone()
                        } else {
                            others[rng.random_range(0..others.len())].clone()
                        }
                    })
                    .collect();
                columns.push(Column::Categorical(flipped));
            }
        }
    }
    Dataset::new(train.schema().clone(), columns)
}

fn independent_marginals(train: &Dataset, rows: usize, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let n = train.row_count();
    let mut columns = Vec::with_capacity(train.schema().columns.len());
    for column in &train.schema().columns {
        match column.kind {
            ColumnKind::Numeric => {
                let values = train.numeric(&column.name)?;
                columns.push(Column::Numeric(
                    (0..rows).map(|_| values[rng.random_range(0..n)]).collect(),
                ));
            }
            ColumnKind::Categorical => {
                let values = train.categorical(&column.name)?;
                columns.push(Column::Categorical(
                    (0..rows)
                        .map(|_| values[rng.random_range(0..n)].clone())
                        .collect(),
                ));
            }
        }
    }
    Dataset::new(train.schema().clone(), columns)
}

fn copula_lite(train: &Dataset, rows: usize, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let numeric_names = train.schema().numeric_names();
    if numeric_names.len() < 2 {
        return Err(Error::InvalidSpec(
            "copula_lite needs at least two numeric columns".to_string(),
        ));
    }
    let n = train.row_count();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");

    // Fit: normal-scores transform per column, then its Pearson matrix.
    let mut scores = Vec::with_capacity(numeric_names.len());
    let mut sorted_values = Vec::with_capacity(numeric_names.len());
    for name in &numeric_names {
        let values = train.numeric(name)?;
        scores.push(normal_scores(values, &normal));
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted_values.push(sorted);
    }
    let k = scores.len();
    let mut correlation = vec![vec![0.0; k]; k];
    for i in 0..k {
        correlation[i][i] = 1.0;
        for j in (i + 1)..k {
            let r = pearson_corr(&scores[i], &scores[j])?.value;
            correlation[i][j] = r;
            correlation[j][i] = r;
        }
    }
    let chol = cholesky_with_jitter(&correlation)?;

    // Sample: correlated normals row by row, mapped through each column's
    // empirical inverse CDF so marginal quantiles come from training values.
    let mut numeric_out: Vec<Vec<f64>> = vec![Vec::with_capacity(rows); k];
    for _ in 0..rows {
        let draws: Vec<f64> = (0..k).map(|_| standard_normal(rng, &normal)).collect();
        for j in 0..k {
            let w: f64 = (0..=j).map(|p| chol[j][p] * draws[p]).sum();
            let u = normal.cdf(w);
            let idx = ((u * n as f64).floor() as usize).min(n - 1);
            numeric_out[j].push(sorted_values[j][idx]);
        }
    }

    let mut numeric_iter = numeric_out.into_iter();
    let mut columns = Vec::with_capacity(train.schema().columns.len());
    for column in &train.schema().columns {
        match column.kind {
            ColumnKind::Numeric => columns.push(Column::Numeric(
                numeric_iter.next().expect("one per column"),
            )),
            ColumnKind::Categorical => {
                let values = train.categorical(&column.name)?;
                columns.push(Column::Categorical(
                    (0..rows)
                        .map(|_| values[rng.random_range(0..n)].clone())
                        .collect(),
                ));
            }
        }
    }
    Dataset::new(train.schema().clone(), columns)
}

/// Van der Waerden scores: rank (average ties), map rank/(n+1) through the
/// standard normal quantile function.
fn normal_scores(values: &[f64], normal: &Normal) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut scores = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let avg_rank = (i + 1 + j) as f64 / 2.0;
        let score = normal.inverse_cdf(avg_rank / (n as f64 + 1.0));
        for &row in &order[i..j] {
            scores[row] = score;
        }
        i = j;
    }
    scores
}

fn standard_normal(rng: &mut ChaCha8Rng, normal: &Normal) -> f64 {
    let u: f64 = rng.random();
    normal.inverse_cdf(u.clamp(1e-12, 1.0 - 1e-12))
}

/// Lower-triangular Cholesky factor, retried with growing diagonal jitter
/// when the matrix is only positive semi-definite (exactly collinear
/// columns). A correlation matrix plus unit jitter is always positive
/// definite, so the loop terminates.
fn cholesky_with_jitter(matrix: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut jitter = 0.0;
    for _ in 0..12 {
        let mut candidate = matrix.to_vec();
        if jitter > 0.0 {
            for (i, row) in candidate.iter_mut().enumerate() {
                row[i] += jitter;
            }
        }
        if let Some(l) = cholesky(&candidate) {
            return Ok(l);
        }
        jitter = if jitter == 0.0 { 1e-10 } else { jitter * 10.0 };
    }
    Err(Error::InvalidSpec(
        "normal-scores correlation matrix is not positive definite".to_string(),
    ))
}

fn cholesky(matrix: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let k = matrix.len();
    let mut l = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let dot: f64 = l[i].iter().zip(&l[j]).take(j).map(|(a, b)| a * b).sum();
            let sum = matrix[i][j] - dot;
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Some(l)
}

//! Per-column distribution distances.

use serde::{Deserialize, Serialize};

use crate::data::CategoryIndex;
use crate::error::{Error, Result};

/// 1-Wasserstein distance between two empirical distributions.
///
/// Computed as the integral of |CDF_x - CDF_y| over the merged sample grid,
/// which for equal sample sizes coincides with the mean absolute difference
/// of the sorted samples.
pub fn wasserstein_1d(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::EmptyInput("first sample vector"));
    }
    if y.is_empty() {
        return Err(Error::EmptyInput("second sample vector"));
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);

    let mut grid = Vec::with_capacity(xs.len() + ys.len());
    grid.extend_from_slice(&xs);
    grid.extend_from_slice(&ys);
    grid.sort_by(f64::total_cmp);

    let nx = xs.len() as f64;
    let ny = ys.len() as f64;
    // Counts of samples <= the left endpoint of the current segment. Both
    // cursors only move forward, so the whole pass is linear.
    let mut ix = 0;
    let mut iy = 0;
    let mut total = 0.0;
    for pair in grid.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        while ix < xs.len() && xs[ix] <= a {
            ix += 1;
        }
        while iy < ys.len() && ys[iy] <= a {
            iy += 1;
        }
        total += (ix as f64 / nx - iy as f64 / ny).abs() * (b - a);
    }
    Ok(total)
}

/// Jensen-Shannon distance between two label-count vectors aligned to the
/// same category index. Base-2 logarithms keep the result in [0, 1]; the
/// distance (not the divergence) is returned.
pub fn jensen_shannon_distance(p: &[f64], q: &[f64], index: &CategoryIndex) -> Result<f64> {
    let width = index.labels().len();
    if p.len() != width {
        return Err(Error::IndexMismatch {
            expected: width,
            got: p.len(),
        });
    }
    if q.len() != width {
        return Err(Error::IndexMismatch {
            expected: width,
            got: q.len(),
        });
    }
    let p_total: f64 = p.iter().sum();
    let q_total: f64 = q.iter().sum();
    if width == 0 || p_total <= 0.0 {
        return Err(Error::EmptyInput("first count vector"));
    }
    if q_total <= 0.0 {
        return Err(Error::EmptyInput("second count vector"));
    }

    let mut divergence = 0.0;
    for i in 0..width {
        let pi = p[i] / p_total;
        let qi = q[i] / q_total;
        let mi = 0.5 * (pi + qi);
        divergence += 0.5 * rel_term(pi, mi) + 0.5 * rel_term(qi, mi);
    }
    // Tiny negatives from rounding would poison the sqrt.
    Ok(divergence.max(0.0).sqrt().min(1.0))
}

// a * log2(a / m) with the 0 log 0 convention.
fn rel_term(a: f64, m: f64) -> f64 {
    if a <= 0.0 {
        0.0
    } else {
        a * (a / m).log2()
    }
}

/// Shared-bin histograms of two numeric columns plus their per-bin
/// difference, the payload behind marginal-drift plots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramDiff {
    /// `bins + 1` edges spanning the union range of both columns.
    pub edges: Vec<f64>,
    pub train_freq: Vec<f64>,
    pub other_freq: Vec<f64>,
    /// `other_freq - train_freq`, per bin.
    pub diff: Vec<f64>,
}

pub fn histogram_diff(train_col: &[f64], other_col: &[f64], bins: usize) -> Result<HistogramDiff> {
    if train_col.is_empty() {
        return Err(Error::EmptyInput("train column"));
    }
    if other_col.is_empty() {
        return Err(Error::EmptyInput("comparison column"));
    }
    if bins == 0 {
        return Err(Error::ZeroBins);
    }

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in train_col.iter().chain(other_col.iter()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        // Degenerate range: widen symmetrically so every value lands in a bin.
        lo -= 0.5;
        hi += 0.5;
    }

    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let train_freq = bin_frequencies(train_col, lo, hi, bins);
    let other_freq = bin_frequencies(other_col, lo, hi, bins);
    let diff = other_freq
        .iter()
        .zip(&train_freq)
        .map(|(o, t)| o - t)
        .collect();

    Ok(HistogramDiff {
        edges,
        train_freq,
        other_freq,
        diff,
    })
}

fn bin_frequencies(values: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let mut counts = vec![0.0; bins];
    let scale = bins as f64 / (hi - lo);
    for &v in values {
        let mut b = ((v - lo) * scale) as usize;
        if b >= bins {
            b = bins - 1; // the top edge is inclusive
        }
        counts[b] += 1.0;
    }
    let n = values.len() as f64;
    for c in &mut counts {
        *c /= n;
    }
    counts
}

/// Freedman-Diaconis bin count for a sample, clamped to [1, 1000]. Falls
/// back to 50 bins when the interquartile range is zero.
pub fn freedman_diaconis_bins(values: &[f64]) -> Result<usize> {
    if values.is_empty() {
        return Err(Error::EmptyInput("sample vector"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let range = sorted[sorted.len() - 1] - sorted[0];
    if iqr <= 0.0 || range <= 0.0 {
        return Ok(50);
    }
    let width = 2.0 * iqr / (values.len() as f64).cbrt();
    Ok(((range / width).ceil() as usize).clamp(1, 1000))
}

// Linear-interpolation quantile of an ascending slice.
pub(crate) fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lower = pos.floor() as usize;
    let upper = pos.ceil() as usize;
    let frac = pos - lower as f64;
    sorted[lower] + (sorted[upper] - sorted[lower]) * frac
}

//! Markdown rendering for evaluation reports. Output is a pure function of
//! the report value, so equal reports render to identical bytes.

use std::fmt::Write;

use crate::data::format_number;
use crate::fidelity::FidelityReport;
use crate::privacy::PrivacyReport;
use crate::utility::{AssociationReport, Conviction, UtilityReport};

use super::{EvaluationReport, StageResult, StageStatus};

/// Which end of a column is worth highlighting.
#[derive(Clone, Copy, PartialEq)]
enum Best {
    Lowest,
    Highest,
    None,
}

struct Table {
    headers: Vec<String>,
    best: Vec<Best>,
    rows: Vec<Vec<Cell>>,
}

enum Cell {
    Text(String),
    Value(f64),
    Missing,
}

impl Table {
    fn new(headers: Vec<String>, best: Vec<Best>) -> Self {
        debug_assert_eq!(headers.len(), best.len());
        Table {
            headers,
            best,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn render(&self, out: &mut String) {
        let mut best_values = vec![None::<f64>; self.headers.len()];
        for (column, direction) in self.best.iter().enumerate() {
            if *direction == Best::None {
                continue;
            }
            for row in &self.rows {
                if let Cell::Value(v) = row[column] {
                    best_values[column] = Some(match (best_values[column], direction) {
                        (None, _) => v,
                        (Some(b), Best::Lowest) => b.min(v),
                        (Some(b), Best::Highest) => b.max(v),
                        (Some(b), Best::None) => b,
                    });
                }
            }
        }

        let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
        out.push_str(&line(&self.headers));
        out.push_str(&line(&vec!["---".to_string(); self.headers.len()]));
        for row in &self.rows {
            let rendered: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(column, cell)| match cell {
                    Cell::Text(text) => text.clone(),
                    Cell::Missing => "-".to_string(),
                    Cell::Value(v) => {
                        let text = format_number(*v);
                        if best_values[column] == Some(*v) && self.rows.len() > 1 {
                            format!("**{text}**")
                        } else {
                            text
                        }
                    }
                })
                .collect();
            out.push_str(&line(&rendered));
        }
    }
}

fn opt_cell(value: Option<f64>) -> Cell {
    match value {
        Some(v) => Cell::Value(v),
        None => Cell::Missing,
    }
}

fn stage_note<T>(out: &mut String, stage: &StageResult<T>) -> bool {
    match stage.status {
        StageStatus::Ok => true,
        StageStatus::Failed => {
            let detail = stage.detail.as_deref().unwrap_or("unknown error");
            let _ = writeln!(out, "_Stage failed: {detail}_\n");
            false
        }
        StageStatus::Skipped => {
            let detail = stage.detail.as_deref().unwrap_or("not configured");
            let _ = writeln!(out, "_Stage skipped: {detail}_\n");
            false
        }
    }
}

/// Renders the full report as Markdown. Deterministic: contains no
/// timestamps or environment details beyond what the report itself records.
pub fn render_markdown(report: &EvaluationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Synthetic data evaluation\n");
    let _ = writeln!(
        out,
        "Report schema {} generated by synteval {} with seed {}.\n",
        report.spec_version, report.metadata.tool_version, report.metadata.seed
    );

    render_datasets(&mut out, report);
    render_fidelity(&mut out, report);
    render_utility(&mut out, report);
    render_associations(&mut out, report);
    render_privacy(&mut out, report);
    render_warnings(&mut out, report);

    while out.ends_with("\n\n") {
        out.pop();
    }
    out
}

fn render_datasets(out: &mut String, report: &EvaluationReport) {
    let _ = writeln!(out, "## Datasets\n");
    let mut table = Table::new(
        ["Dataset", "Rows", "Columns", "FNV-1a"]
            .map(String::from)
            .to_vec(),
        vec![Best::None; 4],
    );
    for fp in &report.metadata.datasets {
        table.push(vec![
            Cell::Text(fp.name.clone()),
            Cell::Text(fp.rows.to_string()),
            Cell::Text(fp.columns.to_string()),
            Cell::Text(format!("`{}`", fp.content_hash)),
        ]);
    }
    table.render(out);
    out.push('\n');
}

fn render_fidelity(out: &mut String, report: &EvaluationReport) {
    let _ = writeln!(out, "## Fidelity\n");
    if !stage_note(out, &report.fidelity) {
        return;
    }
    let comparison = report
        .fidelity
        .report
        .as_ref()
        .expect("ok stage has report");

    let sources: Vec<(&str, &FidelityReport)> = {
        let mut rows = vec![("holdout", &comparison.holdout)];
        if let Some(synthetic) = &comparison.synthetic {
            rows.push(("synthetic", synthetic));
        }
        rows
    };

    if !comparison.holdout.numeric.is_empty() {
        let _ = writeln!(
            out,
            "### Numeric marginals (Wasserstein distance to train)\n"
        );
        let names: Vec<&str> = comparison
            .holdout
            .numeric
            .iter()
            .map(|c| c.column.as_str())
            .collect();
        let mut headers = vec!["Source".to_string()];
        headers.extend(names.iter().map(|n| n.to_string()));
        headers.push("Mean".to_string());
        let mut table = Table::new(headers, vec![Best::Lowest; names.len() + 2]);
        for (name, fidelity) in &sources {
            let mut row = vec![Cell::Text(name.to_string())];
            row.extend(fidelity.numeric.iter().map(|c| Cell::Value(c.distance)));
            row.push(opt_cell(fidelity.numeric_mean));
            table.push(row);
        }
        table.render(out);
        out.push('\n');
    }

    if !comparison.holdout.categorical.is_empty() {
        let _ = writeln!(
            out,
            "### Categorical marginals (Jensen-Shannon distance to train)\n"
        );
        let names: Vec<&str> = comparison
            .holdout
            .categorical
            .iter()
            .map(|c| c.column.as_str())
            .collect();
        let mut headers = vec!["Source".to_string()];
        headers.extend(names.iter().map(|n| n.to_string()));
        headers.push("Mean".to_string());
        let mut table = Table::new(headers, vec![Best::Lowest; names.len() + 2]);
        for (name, fidelity) in &sources {
            let mut row = vec![Cell::Text(name.to_string())];
            row.extend(fidelity.categorical.iter().map(|c| Cell::Value(c.distance)));
            row.push(opt_cell(fidelity.categorical_mean));
            table.push(row);
        }
        table.render(out);
        out.push('\n');
    }

    if !comparison.holdout.derived.is_empty() {
        let _ = writeln!(
            out,
            "### Derived features (Wasserstein distance to train)\n"
        );
        let names: Vec<&str> = comparison
            .holdout
            .derived
            .iter()
            .map(|c| c.column.as_str())
            .collect();
        let mut headers = vec!["Source".to_string()];
        headers.extend(names.iter().map(|n| n.to_string()));
        let mut table = Table::new(headers, vec![Best::Lowest; names.len() + 1]);
        for (name, fidelity) in &sources {
            let mut row = vec![Cell::Text(name.to_string())];
            row.extend(fidelity.derived.iter().map(|c| Cell::Value(c.distance)));
            table.push(row);
        }
        table.render(out);
        out.push('\n');
    }

    let _ = writeln!(
        out,
        "### Association structure (matrix L2 distance to train)\n"
    );
    let mut table = Table::new(
        [
            "Source",
            "Numeric-numeric",
            "Categorical-categorical",
            "Numeric-categorical",
        ]
        .map(String::from)
        .to_vec(),
        vec![Best::None, Best::Lowest, Best::Lowest, Best::Lowest],
    );
    for (name, fidelity) in &sources {
        table.push(vec![
            Cell::Text(name.to_string()),
            opt_cell(fidelity.joint.num_num),
            opt_cell(fidelity.joint.cat_cat),
            opt_cell(fidelity.joint.num_cat),
        ]);
    }
    table.render(out);
    out.push('\n');
}

fn render_utility(out: &mut String, report: &EvaluationReport) {
    let _ = writeln!(out, "## Utility\n");
    if !stage_note(out, &report.utility) {
        return;
    }
    let utility: &UtilityReport = report.utility.report.as_ref().expect("ok stage has report");

    let mut table = Table::new(
        [
            "Trained on",
            "Accuracy",
            "Precision",
            "Recall",
            "F1",
            "ROC AUC",
        ]
        .map(String::from)
        .to_vec(),
        vec![
            Best::None,
            Best::Highest,
            Best::Highest,
            Best::Highest,
            Best::Highest,
            Best::Highest,
        ],
    );
    let mut failures = Vec::new();
    for row in &utility.rows {
        match &row.metrics {
            Some(m) => table.push(vec![
                Cell::Text(row.source.clone()),
                Cell::Value(m.accuracy),
                Cell::Value(m.precision),
                Cell::Value(m.recall),
                Cell::Value(m.f1),
                opt_cell(m.roc_auc),
            ]),
            None => {
                table.push(vec![
                    Cell::Text(row.source.clone()),
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                ]);
                if let Some(error) = &row.error {
                    failures.push(format!("{}: {error}", row.source));
                }
            }
        }
    }
    table.render(out);
    out.push('\n');
    let _ = writeln!(
        out,
        "Evaluation rows: {}; positive rate {}.\n",
        utility.eval_rows,
        format_number(utility.positive_rate)
    );
    for failure in failures {
        let _ = writeln!(out, "- model not trained on {failure}");
    }
    if !utility.rows.iter().all(|r| r.metrics.is_some()) {
        out.push('\n');
    }
}

fn render_associations(out: &mut String, report: &EvaluationReport) {
    let _ = writeln!(out, "## Association rules\n");
    if !stage_note(out, &report.associations) {
        return;
    }
    let associations: &AssociationReport = report
        .associations
        .report
        .as_ref()
        .expect("ok stage has report");

    let _ = writeln!(
        out,
        "Minimum support {}, minimum confidence {}.\n",
        format_number(associations.min_support),
        format_number(associations.min_confidence)
    );
    let mut table = Table::new(
        [
            "Source",
            "Baskets",
            "Frequent itemsets",
            "Top rule",
            "Support",
            "Confidence",
            "Lift",
            "Conviction",
        ]
        .map(String::from)
        .to_vec(),
        vec![Best::None; 8],
    );
    for row in &associations.rows {
        match &row.top_rule {
            Some(rule) => table.push(vec![
                Cell::Text(row.source.clone()),
                Cell::Text(row.baskets.to_string()),
                Cell::Text(row.frequent_itemsets.to_string()),
                Cell::Text(format!("{} => {}", rule.antecedent, rule.consequent)),
                Cell::Value(rule.support_ab),
                Cell::Value(rule.confidence),
                Cell::Value(rule.lift),
                Cell::Text(match rule.conviction {
                    Conviction::Finite(v) => format_number(v),
                    Conviction::Infinite => "inf".to_string(),
                }),
            ]),
            None => table.push(vec![
                Cell::Text(row.source.clone()),
                Cell::Text(row.baskets.to_string()),
                Cell::Text(row.frequent_itemsets.to_string()),
                Cell::Text("none".to_string()),
                Cell::Missing,
                Cell::Missing,
                Cell::Missing,
                Cell::Missing,
            ]),
        }
    }
    table.render(out);
    out.push('\n');
}

fn render_privacy(out: &mut String, report: &EvaluationReport) {
    let _ = writeln!(out, "## Privacy\n");
    if !stage_note(out, &report.privacy) {
        return;
    }
    let privacy: &PrivacyReport = report.privacy.report.as_ref().expect("ok stage has report");

    let mut table = Table::new(
        [
            "Source",
            "DCR median",
            "DCR 5th pct",
            "DCR normalized",
            "CCR",
        ]
        .map(String::from)
        .to_vec(),
        vec![Best::None; 5],
    );
    table.push(vec![
        Cell::Text("holdout".to_string()),
        Cell::Value(privacy.dcr_holdout_baseline),
        Cell::Missing,
        Cell::Text(if privacy.dcr_normalized.is_some() {
            "1".to_string()
        } else {
            "-".to_string()
        }),
        Cell::Missing,
    ]);
    table.push(vec![
        Cell::Text("synthetic".to_string()),
        Cell::Value(privacy.dcr_raw_median),
        Cell::Value(privacy.dcr_p05),
        opt_cell(privacy.dcr_normalized),
        Cell::Value(privacy.ccr),
    ]);
    table.render(out);
    out.push('\n');
    let _ = writeln!(
        out,
        "DCR normalized is the synthetic median distance-to-closest-train-record \
         divided by the holdout median; CCR is the share of synthetic rows closer \
         to train than to holdout.\n"
    );
}

fn render_warnings(out: &mut String, report: &EvaluationReport) {
    if report.warnings.is_empty() {
        return;
    }
    let _ = writeln!(out, "## Warnings\n");
    for warning in &report.warnings {
        let _ = writeln!(out, "- {warning}");
    }
    out.push('\n');
}

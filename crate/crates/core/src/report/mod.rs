//! Unified evaluation report: runs every stage, records per-stage success,
//! failure, or skip, and serializes a deterministic payload.

mod markdown;

pub use markdown::render_markdown;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::fidelity::{fidelity_report, FidelityOptions, FidelityReport};
use crate::preprocess::DerivedFeatureSpec;
use crate::privacy::{privacy_report, DistanceConfig, PrivacyReport};
use crate::utility::{
    association_report, utility_report, AssociationReport, BasketColumns, ClassificationTask,
    TreeParams, UtilityReport,
};

/// Version tag for the report JSON layout (not the tool version).
pub const REPORT_SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationConfig {
    pub baskets: BasketColumns,
    #[serde(default = "default_min_support")]
    pub min_support: f64,
    #[serde(default = "default_min_confidence")]
    pub min_confidence: f64,
}

fn default_min_support() -> f64 {
    0.01
}

fn default_min_confidence() -> f64 {
    0.1
}

/// Everything the evaluation pipeline needs besides the datasets. Optional
/// sections switch their stage off.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EvaluationConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub fidelity: FidelityOptions,
    /// Derived numeric features compared alongside the schema columns.
    #[serde(default)]
    pub derived: Vec<DerivedFeatureSpec>,
    /// Classification task; utility is skipped when absent.
    #[serde(default)]
    pub task: Option<ClassificationTask>,
    #[serde(default)]
    pub trees: TreeParams,
    /// Basket analysis settings; associations are skipped when absent.
    #[serde(default)]
    pub associations: Option<AssociationConfig>,
}

impl EvaluationConfig {
    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Ok,
    Failed,
    Skipped,
}

/// Outcome of one pipeline stage. Failures carry the error text; skips carry
/// the reason; either way the other stages still report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageResult<T> {
    pub status: StageStatus,
    pub report: Option<T>,
    pub detail: Option<String>,
}

impl<T> StageResult<T> {
    fn run(stage: &'static str, body: impl FnOnce() -> Result<T>) -> Self {
        match body() {
            Ok(report) => StageResult {
                status: StageStatus::Ok,
                report: Some(report),
                detail: None,
            },
            Err(source) => StageResult {
                status: StageStatus::Failed,
                report: None,
                detail: Some(
                    Error::Stage {
                        stage,
                        source: Box::new(source),
                    }
                    .to_string(),
                ),
            },
        }
    }

    fn skipped(reason: &str) -> Self {
        StageResult {
            status: StageStatus::Skipped,
            report: None,
            detail: Some(reason.to_string()),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == StageStatus::Failed
    }
}

/// Fidelity of the synthetic data next to the holdout benchmark row, both
/// measured against the training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityComparison {
    pub holdout: FidelityReport,
    pub synthetic: Option<FidelityReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFingerprint {
    pub name: String,
    pub rows: usize,
    pub columns: usize,
    /// FNV-1a 64 over the canonical CSV bytes, hex encoded.
    pub content_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub tool_version: String,
    pub seed: u64,
    pub datasets: Vec<DatasetFingerprint>,
    /// Echo of the full configuration for reproducibility.
    pub config: EvaluationConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub spec_version: String,
    pub metadata: ReportMetadata,
    pub fidelity: StageResult<FidelityComparison>,
    pub utility: StageResult<UtilityReport>,
    pub associations: StageResult<AssociationReport>,
    pub privacy: StageResult<PrivacyReport>,
    pub warnings: Vec<String>,
}

impl EvaluationReport {
    pub fn any_stage_failed(&self) -> bool {
        self.fidelity.failed()
            || self.utility.failed()
            || self.associations.failed()
            || self.privacy.failed()
    }

    /// Pretty JSON body with a trailing newline. Contains no timestamps, so
    /// identical inputs yield byte-identical output.
    pub fn render_json(&self) -> String {
        let mut body =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        body.push('\n');
        body
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format {
            path: "<report json>".to_string(),
            message: e.to_string(),
        })
    }
}

/// 64-bit FNV-1a content hash (fast and stable; not cryptographic).
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for byte in bytes {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

pub fn dataset_fingerprint(name: &str, dataset: &Dataset) -> DatasetFingerprint {
    DatasetFingerprint {
        name: name.to_string(),
        rows: dataset.row_count(),
        columns: dataset.schema().columns.len(),
        content_hash: format!("{:016x}", fnv1a64(dataset.to_csv_string().as_bytes())),
    }
}

/// Runs every evaluation stage over the four datasets. Stages with missing
/// inputs or config are marked skipped; stage errors are recorded on the
/// stage and never abort the others.
pub fn evaluate_all(
    train: &Dataset,
    holdout: &Dataset,
    eval: Option<&Dataset>,
    synthetic: Option<&Dataset>,
    config: &EvaluationConfig,
) -> EvaluationReport {
    let mut datasets = vec![
        dataset_fingerprint("train", train),
        dataset_fingerprint("holdout", holdout),
    ];
    if let Some(eval) = eval {
        datasets.push(dataset_fingerprint("eval", eval));
    }
    if let Some(synthetic) = synthetic {
        datasets.push(dataset_fingerprint("synthetic", synthetic));
    }
    let metadata = ReportMetadata {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        datasets,
        config: config.clone(),
    };

    let fidelity = StageResult::run("fidelity", || {
        Ok(FidelityComparison {
            holdout: fidelity_report(train, holdout, &config.derived, config.fidelity)?,
            synthetic: synthetic
                .map(|s| fidelity_report(train, s, &config.derived, config.fidelity))
                .transpose()?,
        })
    });

    let utility = match (&config.task, eval, synthetic) {
        (Some(task), Some(eval), Some(synthetic)) => StageResult::run("utility", || {
            utility_report(
                train,
                holdout,
                synthetic,
                eval,
                task,
                config.trees,
                config.seed,
            )
        }),
        (None, _, _) => StageResult::skipped("no classification task configured"),
        (_, None, _) => StageResult::skipped("missing evaluation dataset"),
        (_, _, None) => StageResult::skipped("missing synthetic dataset"),
    };

    let associations = match &config.associations {
        None => StageResult::skipped("no basket analysis configured"),
        Some(assoc) => StageResult::run("associations", || {
            let mut named = vec![
                ("train".to_string(), train.clone()),
                ("holdout".to_string(), holdout.clone()),
            ];
            if let Some(synthetic) = synthetic {
                named.push(("synthetic".to_string(), synthetic.clone()));
            }
            association_report(
                &named,
                &assoc.baskets,
                assoc.min_support,
                assoc.min_confidence,
            )
        }),
    };

    let privacy = match synthetic {
        None => StageResult::skipped("missing synthetic dataset"),
        Some(synthetic) => StageResult::run("privacy", || {
            let distance_config = DistanceConfig::fit(train)?;
            privacy_report(synthetic, train, holdout, &distance_config)
        }),
    };

    let warnings = collect_warnings(&fidelity, &utility, &privacy);

    EvaluationReport {
        spec_version: REPORT_SCHEMA_VERSION.to_string(),
        metadata,
        fidelity,
        utility,
        associations,
        privacy,
        warnings,
    }
}

fn collect_warnings(
    fidelity: &StageResult<FidelityComparison>,
    utility: &StageResult<UtilityReport>,
    privacy: &StageResult<PrivacyReport>,
) -> Vec<String> {
    let mut warnings = Vec::new();
    if let Some(comparison) = &fidelity.report {
        for entry in &comparison.holdout.degenerate {
            warnings.push(format!("fidelity(holdout): degenerate {entry}"));
        }
        if let Some(synthetic) = &comparison.synthetic {
            for entry in &synthetic.degenerate {
                warnings.push(format!("fidelity(synthetic): degenerate {entry}"));
            }
        }
    }
    if let Some(report) = &utility.report {
        for row in &report.rows {
            if let Some(error) = &row.error {
                warnings.push(format!("utility({}): {error}", row.source));
            }
            if let Some(metrics) = &row.metrics {
                if metrics.roc_auc.is_none() {
                    warnings.push(format!(
                        "utility({}): ROC AUC undefined (single-class evaluation labels)",
                        row.source
                    ));
                }
            }
        }
    }
    if let Some(report) = &privacy.report {
        for column in &report.zero_range_columns {
            warnings.push(format!(
                "privacy: numeric column `{column}` has zero training range and adds no distance"
            ));
        }
        if report.dcr_normalized.is_none() {
            warnings.push(
                "privacy: holdout DCR baseline is zero; normalized DCR unavailable".to_string(),
            );
        }
    }
    warnings
}

//! Classification task configuration: how to turn a dataset into feature
//! rows and a binary label.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::preprocess::{aggregate, Aggregation};

/// Binary label rule: positive iff the named numeric column is strictly
/// greater than the threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRule {
    pub column: String,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_threshold() -> f64 {
    10.0
}

/// Aggregation applied while assembling one classification row per entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssemblyOp {
    Sum,
    Mean,
    First,
}

impl From<AssemblyOp> for Aggregation {
    fn from(op: AssemblyOp) -> Aggregation {
        match op {
            AssemblyOp::Sum => Aggregation::Sum,
            AssemblyOp::Mean => Aggregation::Mean,
            AssemblyOp::First => Aggregation::First,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssemblyOutput {
    pub source: String,
    pub op: AssemblyOp,
    pub name: String,
}

/// Optional pre-step that rolls transaction rows up to one row per entity
/// (for example, per household: summed quantity, mean unit price).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskAssembly {
    pub group_by: Vec<String>,
    pub outputs: Vec<AssemblyOutput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationTask {
    /// Optional roll-up applied to every dataset before labeling.
    #[serde(default)]
    pub assemble: Option<TaskAssembly>,
    /// Feature columns used by the classifier, after assembly.
    pub features: Vec<String>,
    pub label: LabelRule,
    #[serde(default = "default_label_column")]
    pub label_column: String,
    #[serde(default = "default_positive")]
    pub positive_label: String,
    #[serde(default = "default_negative")]
    pub negative_label: String,
}

fn default_label_column() -> String {
    "label".to_string()
}

fn default_positive() -> String {
    "1".to_string()
}

fn default_negative() -> String {
    "0".to_string()
}

impl ClassificationTask {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    /// Applies the assembly step if configured, otherwise passes through.
    pub fn apply_assembly(&self, dataset: &Dataset) -> Result<Dataset> {
        match &self.assemble {
            None => Ok(dataset.clone()),
            Some(assembly) => {
                let outputs: Vec<(String, Aggregation, String)> = assembly
                    .outputs
                    .iter()
                    .map(|o| (o.source.clone(), o.op.into(), o.name.clone()))
                    .collect();
                aggregate(dataset, &assembly.group_by, &outputs)
            }
        }
    }

    /// Assembled feature matrix plus binary labels for one dataset.
    pub fn rows(&self, dataset: &Dataset) -> Result<(Dataset, Vec<bool>)> {
        let assembled = self.apply_assembly(dataset)?;
        let labels = binary_labels(&assembled, &self.label)?;
        let features = assembled.select(&self.features)?;
        Ok((features, labels))
    }
}

/// Evaluates the label rule over the (already assembled) dataset.
pub fn binary_labels(dataset: &Dataset, rule: &LabelRule) -> Result<Vec<bool>> {
    let values = dataset.numeric(&rule.column)?;
    Ok(values.iter().map(|v| *v > rule.threshold).collect())
}

/// Appends the task's label column (categorical, positive/negative labels).
pub fn make_labels(dataset: &Dataset, task: &ClassificationTask) -> Result<Dataset> {
    let labels = binary_labels(dataset, &task.label)?;
    let text: Vec<String> = labels
        .iter()
        .map(|is_pos| {
            if *is_pos {
                task.positive_label.clone()
            } else {
                task.negative_label.clone()
            }
        })
        .collect();
    dataset.with_categorical_column(&task.label_column, text)
}

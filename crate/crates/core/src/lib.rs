//! Evaluation toolkit for synthetic tabular retail data.
//!
//! The crate measures how well a synthetic table stands in for the real
//! transactions it was modeled on, along three axes:
//!
//! * **fidelity**: marginal and pairwise-association distances between the
//!   synthetic table and the training table, with a real holdout split as
//!   the benchmark for every number;
//! * **utility**: whether models fit on synthetic rows (classifiers,
//!   frequent-itemset mining) behave like models fit on real rows;
//! * **privacy**: distance-to-closest-record summaries that flag synthetic
//!   rows sitting suspiciously close to their training neighbors.
//!
//! [`report::evaluate_all`] runs the whole pipeline over a train / holdout /
//! evaluation split plus a synthetic table and produces a deterministic
//! [`report::EvaluationReport`]; the individual stages are usable on their
//! own. [`baselines`] provides reference synthesizers (verbatim copy, noisy
//! copy, independent marginals, a Gaussian-copula sampler) that calibrate
//! the metric scales end to end.
//!
//! All randomness flows through explicitly seeded generators and all maps
//! iterate in sorted order, so every artifact is reproducible byte for byte.

pub mod baselines;
pub mod data;
pub mod error;
pub mod fidelity;
pub mod preprocess;
pub mod privacy;
pub mod report;
pub mod utility;

pub use data::{Column, ColumnKind, ColumnSchema, Dataset, TableSchema};
pub use error::{Error, Result};
pub use report::{evaluate_all, render_markdown, EvaluationConfig, EvaluationReport};

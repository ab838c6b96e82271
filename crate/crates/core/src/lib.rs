//! Divisive clustering of categorical data by mutual-information significance,
//! with per-cluster divergence profiles and benchmark evaluation.

pub mod engine;
pub mod error;
pub mod eval;
pub mod info;
pub mod ingest;
pub mod cli;
pub mod summarize;

pub use engine::{
    assign, cluster, Algorithm, ClusterMode, ClusteringResult, EngineConfig, EngineWarning, ResultDocument,
    SplitRecord,
};
pub use error::{Error, Result};
pub use eval::{kmodes_cluster, purity, run_benchmark, BenchmarkReport};
pub use ingest::{load_delimited, AttributeColumn, CategoricalDataset, ClassLabels, IngestOptions};
pub use summarize::{render_report, summarize_cluster, summarize_result, ClusterSummary, ReportOptions};

//! File-based front end for `electolex-core`.
//!
//! Reads a candidates CSV and a JSON-lines tweet archive, runs the analysis
//! and writes `report.json` plus the CSV tables behind the plots. The
//! `electolex` binary wraps [`pipeline::run_pipeline`].

pub mod config;
pub mod ingest;
pub mod pipeline;
pub mod report;

pub use config::{validate_config, ConfigError, RunConfig};
pub use pipeline::{analyze, run_pipeline, write_outputs, Analysis, PipelineError};
pub use report::AnalysisReport;

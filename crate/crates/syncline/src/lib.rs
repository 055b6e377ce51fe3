//! Std companion to `syncline-core`: JSON catalogs, report tables, CSV/SVG
//! output, a parallel simulation runner and the `syncline` command line.

pub mod catalog_file;
pub mod cli;
pub mod output;
pub mod parallel;
pub mod report;
pub mod svg;

pub use syncline_core as core;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("invalid catalog at {path}: {message}")]
    Catalog { path: String, message: String },
    #[error(transparent)]
    Model(#[from] syncline_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = AppError> = std::result::Result<T, E>;

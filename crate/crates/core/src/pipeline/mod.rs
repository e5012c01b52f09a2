//! Corpus layout, batch extraction and per-figure output files.

mod annotate;
mod config;
mod csv;
mod extract;
mod project;
mod run;

use std::io;
use std::path::Path;

use thiserror::Error;

pub use annotate::{annotate_svg, strip_overlay, Overlay, OVERLAY_ID};
pub use config::{Column, ConfigError, OverlayColors, PipelineConfig};
pub use csv::{csv_bytes, format_number, write_csv, write_csv_columns};
pub(crate) use csv::read_numeric_csv;
pub use extract::{extract_figure, extract_svg, ExtractionReport, ExtractionStatus, FigureOutcome};
pub use project::{
    enumerate_figures, make_project, output_paths, CTree, CorpusProject, FigureRef, OutputPaths,
    DEFAULT_FIGURE_FILTER,
};
pub use run::{run_project, run_project_with_jobs, ProjectSummary, SummaryEntry, SUMMARY_FILE};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("bad file filter: {0}")]
    BadFilter(String),
    #[error("template refers to group {group} but the filter has {available} capture group(s)")]
    TemplateGroupOutOfRange { group: usize, available: usize },
    #[error("destination {destination} would be written by {}", sources.join(", "))]
    DestinationCollision { destination: String, sources: Vec<String> },
    #[error("{path}: {message}")]
    BadCsv { path: String, message: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl PipelineError {
    pub(crate) fn io(path: &Path, e: io::Error) -> Self {
        PipelineError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}

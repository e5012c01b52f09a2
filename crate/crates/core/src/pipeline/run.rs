use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::csv::csv_bytes;
use super::extract::extract_svg;
use super::project::{enumerate_figures, output_paths, CorpusProject, FigureRef};
use super::{ExtractionReport, ExtractionStatus, PipelineConfig, PipelineError};

pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    /// Source SVG, relative to the project root, with `/` separators.
    pub source: String,
    pub report: ExtractionReport,
}

/// Project-level aggregate written to `summary.json` in the output root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectSummary {
    pub n_figures: usize,
    pub n_ok: usize,
    pub status_counts: BTreeMap<ExtractionStatus, usize>,
    pub figures: Vec<SummaryEntry>,
}

impl ProjectSummary {
    pub fn from_entries(figures: Vec<SummaryEntry>) -> Self {
        let mut status_counts = BTreeMap::new();
        for f in &figures {
            *status_counts.entry(f.report.status).or_insert(0) += 1;
        }
        Self {
            n_figures: figures.len(),
            n_ok: status_counts.get(&ExtractionStatus::Ok).copied().unwrap_or(0),
            status_counts,
            figures,
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| PipelineError::io(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| PipelineError::io(path, e))
}

fn to_json(value: &impl Serialize) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report types serialize");
    bytes.push(b'\n');
    bytes
}

fn process_figure(figure: &FigureRef, config: &PipelineConfig, output_root: &Path) -> SummaryEntry {
    let (points, annotated, mut report) = match fs::read(&figure.svg_path) {
        Ok(bytes) => {
            let out = extract_svg(&bytes, config);
            (out.points, Some(out.annotated_svg), out.report)
        }
        Err(e) => {
            let mut report = extract_svg(b"", config).report;
            report.message = Some(format!("cannot read {}: {e}", figure.relative_path.display()));
            (Vec::new(), None, report)
        }
    };
    report.tree_id = figure.tree_id.clone();
    report.figure_index = figure.index;

    let paths = output_paths(figure, output_root);
    let mut writes = vec![(&paths.csv, csv_bytes(&points, &config.columns))];
    if let Some(svg) = annotated {
        writes.push((&paths.annotated_svg, svg));
    }
    for (path, bytes) in writes {
        if let Err(e) = write_file(path, &bytes) {
            report.warnings.push(format!("output not written: {e}"));
        }
    }
    if let Err(e) = write_file(&paths.report, &to_json(&report)) {
        report.warnings.push(format!("output not written: {e}"));
    }
    SummaryEntry {
        source: figure.relative_path.to_string_lossy().replace('\\', "/"),
        report,
    }
}

/// Extracts every figure selected by `figure_filter` sequentially.
pub fn run_project(
    project: &CorpusProject,
    figure_filter: &str,
    config: &PipelineConfig,
    output_root: &Path,
) -> Result<Vec<ExtractionReport>, PipelineError> {
    run_project_with_jobs(project, figure_filter, config, output_root, 1)
}

/// Like [`run_project`], with up to `jobs` figures in flight at once.
/// Reports come back in enumeration order whatever the job count.
pub fn run_project_with_jobs(
    project: &CorpusProject,
    figure_filter: &str,
    config: &PipelineConfig,
    output_root: &Path,
    jobs: usize,
) -> Result<Vec<ExtractionReport>, PipelineError> {
    let figures = enumerate_figures(project, figure_filter)?;
    let entries: Vec<SummaryEntry> = if jobs > 1 && figures.len() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| PipelineError::Io {
                path: output_root.display().to_string(),
                message: format!("cannot start workers: {e}"),
            })?;
        pool.install(|| {
            figures
                .par_iter()
                .map(|f| process_figure(f, config, output_root))
                .collect()
        })
    } else {
        figures.iter().map(|f| process_figure(f, config, output_root)).collect()
    };
    let reports = entries.iter().map(|e| e.report.clone()).collect();
    let summary = ProjectSummary::from_entries(entries);
    write_file(&output_root.join(SUMMARY_FILE), &to_json(&summary))?;
    Ok(reports)
}

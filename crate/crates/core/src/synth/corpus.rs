use std::fs;
use std::path::{Path, PathBuf};

use super::{evaluate, generate_scatter_svg, EvalInput, Evaluation, SynthError, SyntheticSpec};
use crate::pipeline::{
    enumerate_figures, format_number, output_paths, read_numeric_csv, CorpusProject, PipelineError,
};

pub const TRUTH_FILE: &str = "truth.csv";
pub const SPEC_FILE: &str = "spec.json";

fn sibling(svg_path: &Path, suffix: &str, plain: &str) -> PathBuf {
    let stem = svg_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = if stem == "figure" { plain.to_string() } else { format!("{stem}_{suffix}") };
    svg_path.with_file_name(name)
}

/// Truth file for a figure: `truth.csv` beside `figure.svg`, `S_truth.csv`
/// beside `S.svg`.
pub fn truth_path(svg_path: &Path) -> PathBuf {
    sibling(svg_path, TRUTH_FILE, TRUTH_FILE)
}

fn spec_path(svg_path: &Path) -> PathBuf {
    sibling(svg_path, SPEC_FILE, SPEC_FILE)
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), SynthError> {
    fs::write(path, bytes).map_err(|e| PipelineError::io(path, e).into())
}

/// Writes `<root>/<tree_id>/figures/figure<index>/figure.svg` together with
/// its `truth.csv` and `spec.json`. Returns the SVG path.
pub fn write_synthetic_figure(
    root: &Path,
    tree_id: &str,
    index: u32,
    spec: &SyntheticSpec,
) -> Result<PathBuf, SynthError> {
    spec.validate()?;
    let dir = root.join(tree_id).join("figures").join(format!("figure{index}"));
    fs::create_dir_all(&dir).map_err(|e| PipelineError::io(&dir, e))?;
    let (svg, truth) = generate_scatter_svg(spec);
    let svg_path = dir.join("figure.svg");
    write(&svg_path, &svg)?;
    let mut csv = String::from("x,y\n");
    for (x, y) in &truth {
        csv.push_str(&format!("{},{}\n", format_number(*x), format_number(*y)));
    }
    write(&truth_path(&svg_path), csv.as_bytes())?;
    let mut json = serde_json::to_vec_pretty(spec).expect("spec serializes");
    json.push(b'\n');
    write(&spec_path(&svg_path), &json)?;
    Ok(svg_path)
}

fn read_pairs(path: &Path) -> Result<Vec<(f64, f64)>, SynthError> {
    Ok(read_numeric_csv(path, &["x", "y"])?.into_iter().map(|r| (r[0], r[1])).collect())
}

/// Scores the CSV outputs under `output_root` against the truth files
/// beside each selected figure. A missing output CSV counts as no data;
/// a missing truth file is an error. When a `spec.json` sits beside the
/// figure, its ranges give the axis spans.
pub fn evaluate_project(
    project: &CorpusProject,
    figure_filter: &str,
    output_root: &Path,
    tolerance: f64,
) -> Result<Evaluation, SynthError> {
    let mut inputs = Vec::new();
    for figure in enumerate_figures(project, figure_filter)? {
        let figure_id = format!("{}/figure{}", figure.tree_id, figure.index);
        let truth_file = truth_path(&figure.svg_path);
        let truth = if truth_file.is_file() {
            Some(read_pairs(&truth_file)?)
        } else {
            return Err(SynthError::MissingTruth { figure_id });
        };
        let csv = output_paths(&figure, output_root).csv;
        let extracted = if csv.is_file() { read_pairs(&csv)? } else { Vec::new() };
        let spec: Option<SyntheticSpec> = fs::read(spec_path(&figure.svg_path))
            .ok()
            .and_then(|bytes| serde_json::from_slice(&bytes).ok());
        inputs.push(EvalInput {
            figure_id,
            extracted,
            truth,
            x_span: spec.as_ref().map(|s| s.x_range.1 - s.x_range.0),
            y_span: spec.as_ref().map(|s| s.y_range.1 - s.y_range.0),
        });
    }
    evaluate(&inputs, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{run_project, PipelineConfig, DEFAULT_FIGURE_FILTER};
    use crate::synth::AxisStyle;
    use tempfile::TempDir;

    #[test]
    fn generated_project_round_trip() {
        let tmp = TempDir::new().unwrap();
        for (i, style) in [AxisStyle::Standard, AxisStyle::ReversedY, AxisStyle::RasterBody].into_iter().enumerate() {
            let spec = SyntheticSpec::random_with_style(40 + i as u64, style);
            write_synthetic_figure(tmp.path(), "synthetic", i as u32 + 1, &spec).unwrap();
        }
        let project = CorpusProject::scan(tmp.path()).unwrap();
        let out = tmp.path().join("out");
        let reports = run_project(&project, DEFAULT_FIGURE_FILTER, &PipelineConfig::default(), &out).unwrap();
        let statuses: Vec<String> = reports.iter().map(|r| r.status.to_string()).collect();
        assert_eq!(statuses, ["ok", "ok", "raster_body"]);
        assert!(reports[1].y_reversed);
        let eval = evaluate_project(&project, DEFAULT_FIGURE_FILTER, &out, 0.005).unwrap();
        assert_eq!(eval.aggregate.total, 3);
        assert_eq!(eval.aggregate.both_correct, 2);
        assert!(!eval.records[2].data_extracted);
    }

    #[test]
    fn missing_truth_is_reported() {
        let tmp = TempDir::new().unwrap();
        let svg = write_synthetic_figure(tmp.path(), "t", 1, &SyntheticSpec::default()).unwrap();
        fs::remove_file(truth_path(&svg)).unwrap();
        let project = CorpusProject::scan(tmp.path()).unwrap();
        assert!(matches!(
            evaluate_project(&project, crate::pipeline::DEFAULT_FIGURE_FILTER, tmp.path(), 0.005),
            Err(SynthError::MissingTruth { .. })
        ));
    }
}

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::annotate::{annotate_svg, Overlay};
use super::{PipelineConfig, PipelineError};
use crate::axis::{
    calibrate_axis_with, detect_plot_box_with, detect_ticks_with, match_ticks_to_labels_with, parse_numeric_label,
    AxisCalibration, AxisError, AxisSide, TickLabel,
};
use crate::points::{detect_raster_body_with, map_to_data, select_data_glyphs_with, DataPoint};
use crate::svg::{compose_text_runs_with, parse_svg_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractionStatus {
    Ok,
    NoAxes,
    NonlinearScale,
    TooFewTicks,
    RasterBody,
    NoDataGlyphs,
    ParseError,
}

impl ExtractionStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExtractionStatus::Ok => "ok",
            ExtractionStatus::NoAxes => "no_axes",
            ExtractionStatus::NonlinearScale => "nonlinear_scale",
            ExtractionStatus::TooFewTicks => "too_few_ticks",
            ExtractionStatus::RasterBody => "raster_body",
            ExtractionStatus::NoDataGlyphs => "no_data_glyphs",
            ExtractionStatus::ParseError => "parse_error",
        }
    }
}

impl std::fmt::Display for ExtractionStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<&AxisError> for ExtractionStatus {
    fn from(e: &AxisError) -> Self {
        match e {
            AxisError::NoAxesFound => ExtractionStatus::NoAxes,
            AxisError::NonlinearScale { .. } => ExtractionStatus::NonlinearScale,
            AxisError::InsufficientMatches { .. }
            | AxisError::TooFewTicks { .. }
            | AxisError::CollocatedTicks { .. }
            | AxisError::ConstantLabels { .. } => ExtractionStatus::TooFewTicks,
        }
    }
}

/// Machine-readable outcome of one figure, written as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub tree_id: String,
    pub figure_index: u32,
    pub status: ExtractionStatus,
    pub n_points: usize,
    pub x_reversed: bool,
    pub y_reversed: bool,
    /// RMS calibration residual in data units; `null` when not calibrated.
    pub x_residual: Option<f64>,
    pub y_residual: Option<f64>,
    pub x_calibration: Option<AxisCalibration>,
    pub y_calibration: Option<AxisCalibration>,
    pub message: Option<String>,
    pub warnings: Vec<String>,
}

impl ExtractionReport {
    fn new(status: ExtractionStatus) -> Self {
        Self {
            tree_id: String::new(),
            figure_index: 0,
            status,
            n_points: 0,
            x_reversed: false,
            y_reversed: false,
            x_residual: None,
            y_residual: None,
            x_calibration: None,
            y_calibration: None,
            message: None,
            warnings: Vec::new(),
        }
    }

    fn set_calibration(&mut self, cal: &AxisCalibration) {
        match cal.side {
            AxisSide::XAxis => {
                self.x_reversed = cal.reversed;
                self.x_residual = Some(cal.rms_residual);
                self.x_calibration = Some(*cal);
            }
            AxisSide::YAxis => {
                self.y_reversed = cal.reversed;
                self.y_residual = Some(cal.rms_residual);
                self.y_calibration = Some(*cal);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct FigureOutcome {
    pub points: Vec<DataPoint>,
    pub annotated_svg: Vec<u8>,
    pub report: ExtractionReport,
}

/// Runs the whole extraction chain on SVG bytes. Never fails: stage errors
/// end up in the report status, with an empty point list.
pub fn extract_svg(source: &[u8], config: &PipelineConfig) -> FigureOutcome {
    let mut overlay = Overlay::default();
    let (points, mut report) = run_stages(source, config, &mut overlay);
    report.n_points = points.len();
    let annotated_svg = annotate_svg(source, &overlay, &config.overlay);
    FigureOutcome {
        points,
        annotated_svg,
        report,
    }
}

/// Reads and extracts one SVG file.
pub fn extract_figure(svg_path: &Path, config: &PipelineConfig) -> Result<FigureOutcome, PipelineError> {
    let bytes = fs::read(svg_path).map_err(|e| PipelineError::io(svg_path, e))?;
    Ok(extract_svg(&bytes, config))
}

fn fail(status: ExtractionStatus, message: String, warnings: Vec<String>) -> (Vec<DataPoint>, ExtractionReport) {
    let mut report = ExtractionReport::new(status);
    report.message = Some(message);
    report.warnings = warnings;
    (Vec::new(), report)
}

fn run_stages(source: &[u8], config: &PipelineConfig, overlay: &mut Overlay) -> (Vec<DataPoint>, ExtractionReport) {
    let doc = match parse_svg_with(source, &config.svg) {
        Ok(doc) => doc,
        Err(e) => return fail(ExtractionStatus::ParseError, e.to_string(), Vec::new()),
    };
    let warnings = doc.warnings.clone();

    let runs = compose_text_runs_with(&doc.texts, config.text_baseline_fraction, config.text_gap_fraction);
    let labels: Vec<TickLabel> = runs.iter().filter_map(parse_numeric_label).collect();

    let plot_box = match detect_plot_box_with(&doc, &config.axis) {
        Ok(b) => b,
        Err(e) => return fail((&e).into(), e.to_string(), warnings),
    };
    overlay.plot_box = Some(plot_box.clone());

    let ticks = detect_ticks_with(&doc, &plot_box, &config.axis);
    overlay.ticks = ticks.clone();

    let mut report = ExtractionReport::new(ExtractionStatus::Ok);
    report.warnings = warnings;
    let mut calibrations = Vec::with_capacity(2);
    for side in [AxisSide::XAxis, AxisSide::YAxis] {
        let pairs = match match_ticks_to_labels_with(&ticks, &labels, &plot_box, side, &config.axis) {
            Ok(p) => p,
            Err(e) => {
                report.status = (&e).into();
                report.message = Some(e.to_string());
                return (Vec::new(), report);
            }
        };
        overlay.labels.extend(pairs.iter().map(|(_, l)| l.clone()));
        match calibrate_axis_with(&pairs, side, config.axis.residual_fraction) {
            Ok(cal) => {
                report.set_calibration(&cal);
                calibrations.push(cal);
            }
            Err(e) => {
                report.status = (&e).into();
                report.message = Some(e.to_string());
                return (Vec::new(), report);
            }
        }
    }

    if detect_raster_body_with(&doc, &plot_box, config.points.raster_overlap_fraction) {
        report.status = ExtractionStatus::RasterBody;
        report.message = Some("plot body is an embedded raster image".to_string());
        return (Vec::new(), report);
    }

    let cluster = match select_data_glyphs_with(&doc, &plot_box, config.points.radius_tolerance) {
        Ok(c) => c,
        Err(e) => {
            report.status = ExtractionStatus::NoDataGlyphs;
            report.message = Some(e.to_string());
            return (Vec::new(), report);
        }
    };
    overlay.glyphs = cluster.members.clone();
    let points = map_to_data(&cluster, &calibrations[0], &calibrations[1]);
    (points, report)
}

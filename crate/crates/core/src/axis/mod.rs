//! Plot-box, tick and tick-label detection plus linear axis calibration.
//!
//! Only the left and bottom axes are calibrated. Right and top frame lines
//! may exist but never carry the scale.

mod calibrate;
mod labels;
mod plot_box;
mod ticks;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::svg::{Point, Rect, SegmentGlyph};

pub use calibrate::{calibrate_axis, calibrate_axis_with};
pub use labels::{label_reference, match_ticks_to_labels, match_ticks_to_labels_with, parse_numeric_label};
pub use plot_box::{detect_plot_box, detect_plot_box_with};
pub use ticks::{detect_ticks, detect_ticks_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisSide {
    XAxis,
    YAxis,
}

impl std::fmt::Display for AxisSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AxisSide::XAxis => "x axis",
            AxisSide::YAxis => "y axis",
        })
    }
}

/// Heuristic thresholds for axis detection, all in device units unless
/// noted otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisConfig {
    /// Maximum deviation (degrees) from horizontal/vertical/perpendicular.
    pub angle_tolerance_deg: f64,
    pub min_axis_length: f64,
    /// Maximum distance between the two axes' corner endpoints.
    pub corner_tolerance: f64,
    /// Maximum gap between a tick and the axis line.
    pub tick_touch_tolerance: f64,
    pub min_tick_length: f64,
    /// Maximum tick length as a fraction of the parallel plot-box side.
    pub max_tick_fraction: f64,
    /// Label search window: this many median tick lengths ...
    pub label_tick_factor: f64,
    /// ... plus this many glyph heights away from the axis line.
    pub label_glyph_factor: f64,
    /// Maximum tick–label offset along the axis, as a fraction of the
    /// median tick spacing.
    pub label_spacing_fraction: f64,
    /// Maximum RMS calibration residual as a fraction of the tick-value span.
    pub residual_fraction: f64,
}

impl Default for AxisConfig {
    fn default() -> Self {
        Self {
            angle_tolerance_deg: 2.0,
            min_axis_length: 10.0,
            corner_tolerance: 3.0,
            tick_touch_tolerance: 1.0,
            min_tick_length: 0.5,
            max_tick_fraction: 0.15,
            label_tick_factor: 3.0,
            label_glyph_factor: 2.0,
            label_spacing_fraction: 0.5,
            residual_fraction: 0.01,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AxisError {
    #[error("no left/bottom axis pair found")]
    NoAxesFound,
    #[error("{side}: only {found} tick/label pair(s) matched")]
    InsufficientMatches { side: AxisSide, found: usize },
    #[error("{side}: fewer than two ticks to calibrate")]
    TooFewTicks { side: AxisSide },
    #[error("{side}: all ticks share one position")]
    CollocatedTicks { side: AxisSide },
    #[error("{side}: all tick labels carry the same value")]
    ConstantLabels { side: AxisSide },
    #[error("{side}: scale is not linear (rms residual {rms:.4} over value span {span:.4})")]
    NonlinearScale { side: AxisSide, rms: f64, span: f64 },
}

/// The chosen left/bottom axis pair.
///
/// Both axes are stored starting at the shared corner: `left_axis.p2` is
/// its upper end and `bottom_axis.p2` its right end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotBox {
    pub left_axis: SegmentGlyph,
    pub bottom_axis: SegmentGlyph,
    pub interior: Rect,
    pub score: f64,
}

impl PlotBox {
    /// Origin corner: x of the left axis, y of the bottom axis.
    pub fn corner(&self) -> Point {
        Point::new(self.interior.min_x, self.interior.max_y)
    }

    pub fn axis(&self, side: AxisSide) -> &SegmentGlyph {
        match side {
            AxisSide::XAxis => &self.bottom_axis,
            AxisSide::YAxis => &self.left_axis,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TickMark {
    /// Device x for x-axis ticks, device y for y-axis ticks.
    pub position: f64,
    pub side: AxisSide,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickLabel {
    pub value: f64,
    pub anchor: Point,
    pub raw: String,
    pub glyph_height: f64,
}

/// Linear device-to-data map `value = intercept + slope × position`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisCalibration {
    pub side: AxisSide,
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub n_ticks: usize,
    /// Values decrease rightward (x) or upward (y).
    pub reversed: bool,
}

impl AxisCalibration {
    pub fn to_data(&self, position: f64) -> f64 {
        self.intercept + self.slope * position
    }
}

pub(crate) fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    })
}

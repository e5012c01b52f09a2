//! Synthetic scatter figures with known truth, and scoring of extraction
//! output against that truth.

mod corpus;
mod evaluate;
mod generate;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pipeline::PipelineError;

pub use corpus::{evaluate_project, truth_path, write_synthetic_figure, SPEC_FILE, TRUTH_FILE};
pub use evaluate::{
    aggregate, evaluate, evaluate_figure, match_axis, table_csv, Aggregate, EvalInput, EvalRecord, Evaluation,
    DEFAULT_TOLERANCE,
};
pub use generate::{format_tick_value, generate_scatter_svg, nice_ticks};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("no truth available for figure {figure_id}")]
    MissingTruth { figure_id: String },
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisStyle {
    Standard,
    ReversedX,
    ReversedY,
    LogX,
    RasterBody,
}

/// Parameters of one generated figure. Ranges are `(min, max)` in data
/// units, canvas is `(width, height)` in device units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_points: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub n_ticks_x: usize,
    pub n_ticks_y: usize,
    pub marker_radius: f64,
    pub canvas: (f64, f64),
    pub axis_style: AxisStyle,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_points: 10,
            x_range: (0.0, 1.0),
            y_range: (0.0, 1.0),
            n_ticks_x: 5,
            n_ticks_y: 5,
            marker_radius: 2.5,
            canvas: (480.0, 360.0),
            axis_style: AxisStyle::Standard,
            seed: 0,
        }
    }
}

fn random_range(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let span = 10f64.powf(rng.gen_range(-1.0..3.0)) * rng.gen_range(1.0..9.0);
    let min = span * rng.gen_range(-1.5..1.5);
    let min = (min / span * 100.0).round() / 100.0 * span;
    (min, min + span)
}

impl SyntheticSpec {
    /// Varied standard-style spec drawn from `seed`: 4 to 50 points, 2 to 9
    /// ticks per axis, ranges over several orders of magnitude.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x_range = random_range(&mut rng);
        let y_range = random_range(&mut rng);
        Self {
            n_points: rng.gen_range(4..=50),
            x_range,
            y_range,
            n_ticks_x: rng.gen_range(2..=9),
            n_ticks_y: rng.gen_range(2..=9),
            marker_radius: (rng.gen_range(1.5..4.0) * 4.0_f64).round() / 4.0,
            canvas: (rng.gen_range(40..=80) as f64 * 10.0, rng.gen_range(30..=60) as f64 * 10.0),
            axis_style: AxisStyle::Standard,
            seed,
        }
    }

    pub fn random_with_style(seed: u64, style: AxisStyle) -> Self {
        let mut spec = Self::random(seed);
        spec.axis_style = style;
        if style == AxisStyle::LogX {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let first: i32 = rng.gen_range(-1..=1);
            spec.n_ticks_x = spec.n_ticks_x.clamp(3, 5);
            spec.x_range = (10f64.powi(first), 10f64.powi(first + spec.n_ticks_x as i32 - 1));
        }
        spec
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: &str| Err(SynthError::InvalidSpec(m.to_string()));
        let ordered = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 < r.1;
        if self.n_points == 0 {
            return bad("n_points must be at least 1");
        }
        if !ordered(self.x_range) || !ordered(self.y_range) {
            return bad("ranges need finite min < max");
        }
        if self.n_ticks_x < 2 || self.n_ticks_y < 2 {
            return bad("each axis needs at least 2 ticks");
        }
        if !(self.marker_radius > 0.0 && self.marker_radius.is_finite()) {
            return bad("marker_radius must be positive");
        }
        if !(self.canvas.0 >= 200.0 && self.canvas.1 >= 160.0 && self.canvas.0.is_finite() && self.canvas.1.is_finite()) {
            return bad("canvas must be at least 200 x 160");
        }
        if self.axis_style == AxisStyle::LogX && self.x_range.0 <= 0.0 {
            return bad("log_x needs a positive x range");
        }
        Ok(())
    }
}

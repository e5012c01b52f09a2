//! Flat `key = value` configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Every key is
//! optional; omitted keys keep their defaults. Unknown keys are an error so
//! typos do not silently fall back to defaults.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axis::AxisConfig;
use crate::points::PointConfig;
use crate::svg::SvgOptions;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value `{value}` for `{key}`")]
    BadValue { line: usize, key: String, value: String },
    #[error("`{key}` must be strictly positive")]
    NotPositive { key: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    X,
    Y,
    DeviceRadius,
}

impl Column {
    pub fn name(&self) -> &'static str {
        match self {
            Column::X => "x",
            Column::Y => "y",
            Column::DeviceRadius => "device_radius",
        }
    }

    pub const ALL: [Column; 3] = [Column::X, Column::Y, Column::DeviceRadius];
}

impl FromStr for Column {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Column::ALL.into_iter().find(|c| c.name() == s).ok_or(())
    }
}

/// Stroke colours of the diagnostic overlay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayColors {
    pub plot_box: String,
    pub ticks: String,
    pub labels: String,
    pub glyphs: String,
}

impl Default for OverlayColors {
    fn default() -> Self {
        Self {
            plot_box: "#1f77b4".into(),
            ticks: "#ff7f0e".into(),
            labels: "#2ca02c".into(),
            glyphs: "#d62728".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub svg: SvgOptions,
    pub text_baseline_fraction: f64,
    pub text_gap_fraction: f64,
    pub axis: AxisConfig,
    pub points: PointConfig,
    pub columns: Vec<Column>,
    pub overlay: OverlayColors,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            svg: SvgOptions::default(),
            text_baseline_fraction: 0.2,
            text_gap_fraction: 0.6,
            axis: AxisConfig::default(),
            points: PointConfig::default(),
            columns: Column::ALL.to_vec(),
            overlay: OverlayColors::default(),
            seed: 0,
        }
    }
}

macro_rules! numeric_keys {
    ($($key:literal => $($field:ident).+),* $(,)?) => {
        fn numeric_field<'a>(cfg: &'a mut PipelineConfig, key: &str) -> Option<&'a mut f64> {
            match key {
                $($key => Some(&mut cfg.$($field).+),)*
                _ => None,
            }
        }

        fn numeric_entries(cfg: &PipelineConfig) -> Vec<(&'static str, f64)> {
            vec![$(($key, cfg.$($field).+)),*]
        }
    };
}

numeric_keys! {
    "ellipse_tolerance" => svg.ellipse_tolerance,
    "curve_tolerance" => svg.curve_tolerance,
    "canvas_extent_factor" => svg.canvas_extent_factor,
    "default_font_size" => svg.default_font_size,
    "text_baseline_fraction" => text_baseline_fraction,
    "text_gap_fraction" => text_gap_fraction,
    "angle_tolerance_deg" => axis.angle_tolerance_deg,
    "min_axis_length" => axis.min_axis_length,
    "corner_tolerance" => axis.corner_tolerance,
    "tick_touch_tolerance" => axis.tick_touch_tolerance,
    "min_tick_length" => axis.min_tick_length,
    "max_tick_fraction" => axis.max_tick_fraction,
    "label_tick_factor" => axis.label_tick_factor,
    "label_glyph_factor" => axis.label_glyph_factor,
    "label_spacing_fraction" => axis.label_spacing_fraction,
    "residual_fraction" => axis.residual_fraction,
    "radius_tolerance" => points.radius_tolerance,
    "raster_overlap_fraction" => points.raster_overlap_fraction,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        text.parse()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (key, value) in numeric_entries(self) {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConfigError::NotPositive { key: key.to_string() });
            }
        }
        if self.columns.is_empty() {
            return Err(ConfigError::NotPositive {
                key: "columns".to_string(),
            });
        }
        Ok(())
    }

    /// Renders every key with its current value, in the accepted syntax.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        for (key, value) in numeric_entries(self) {
            let _ = writeln!(out, "{key} = {value}");
        }
        let cols: Vec<&str> = self.columns.iter().map(Column::name).collect();
        let _ = writeln!(out, "columns = {}", cols.join(","));
        let _ = writeln!(out, "overlay_box_color = {}", self.overlay.plot_box);
        let _ = writeln!(out, "overlay_tick_color = {}", self.overlay.ticks);
        let _ = writeln!(out, "overlay_label_color = {}", self.overlay.labels);
        let _ = writeln!(out, "overlay_glyph_color = {}", self.overlay.glyphs);
        let _ = writeln!(out, "seed = {}", self.seed);
        out
    }
}

impl FromStr for PipelineConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = PipelineConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::BadValue {
                line,
                key: key.to_string(),
                value: value.to_string(),
            };
            if let Some(slot) = numeric_field(&mut cfg, key) {
                *slot = value.parse().map_err(|_| bad())?;
                continue;
            }
            match key {
                "columns" => {
                    cfg.columns = value
                        .split(',')
                        .map(|c| c.trim().parse::<Column>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad())?;
                }
                "overlay_box_color" => cfg.overlay.plot_box = value.to_string(),
                "overlay_tick_color" => cfg.overlay.ticks = value.to_string(),
                "overlay_label_color" => cfg.overlay.labels = value.to_string(),
                "overlay_glyph_color" => cfg.overlay.glyphs = value.to_string(),
                "seed" => cfg.seed = value.parse().map_err(|_| bad())?,
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

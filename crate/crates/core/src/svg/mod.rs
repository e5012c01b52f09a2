//! Flat, device-space model of an SVG figure.
//!
//! [`parse_svg`] walks the XML tree once, composes every ancestor
//! `transform`, and emits circles, straight segments, raster images and
//! text runs with coordinates already in root user space. Anything the
//! model cannot represent is reported in [`FigureDocument::warnings`]
//! instead of failing the whole parse.

mod geometry;
mod parse;
mod path;
mod text;
mod write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use geometry::{AffineTransform, Point, Rect};
pub use parse::{parse_svg, parse_svg_with};
pub use path::{flatten_path, flatten_path_with, FlattenedPath};
pub use text::{compose_text_runs, compose_text_runs_with, estimated_width, GLYPH_ADVANCE_EM};

/// Errors that abort parsing of a whole document.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SvgError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("root element is <{0}>, not <svg>")]
    NotSvg(String),
    #[error("degenerate transform `{transform}` on <{element}>")]
    DegenerateTransform { element: String, transform: String },
    #[error("path syntax error: {0}")]
    PathSyntax(String),
}

/// Tolerances used while building the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvgOptions {
    /// Maximum `|rx − ry| / max(rx, ry)` for an ellipse to count as a circle.
    pub ellipse_tolerance: f64,
    /// Maximum distance (device units) of a curve's control points from its
    /// chord for the curve to be replaced by that chord.
    pub curve_tolerance: f64,
    /// Primitives must fit inside the canvas scaled by this factor.
    pub canvas_extent_factor: f64,
    /// Font size assumed when none is declared.
    pub default_font_size: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            ellipse_tolerance: 0.05,
            curve_tolerance: 0.25,
            canvas_extent_factor: 10.0,
            default_font_size: 12.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleGlyph {
    pub id: String,
    pub center: Point,
    pub radius: f64,
    /// Raw `style`/`stroke` text, carried along but never interpreted.
    pub stroke_style: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentGlyph {
    pub id: String,
    pub p1: Point,
    pub p2: Point,
}

impl SegmentGlyph {
    pub fn new(id: impl Into<String>, p1: Point, p2: Point) -> Self {
        Self {
            id: id.into(),
            p1,
            p2,
        }
    }

    pub fn length(&self) -> f64 {
        self.p1.distance(&self.p2)
    }

    /// Direction angle in degrees, folded into `[0, 180)`.
    pub fn angle_deg(&self) -> f64 {
        let a = (self.p2.y - self.p1.y)
            .atan2(self.p2.x - self.p1.x)
            .to_degrees();
        let folded = a.rem_euclid(180.0);
        if folded >= 180.0 {
            0.0
        } else {
            folded
        }
    }

    /// Deviation from horizontal in degrees (0 for a horizontal segment).
    pub fn horizontal_deviation_deg(&self) -> f64 {
        let a = self.angle_deg();
        a.min(180.0 - a)
    }

    /// Deviation from vertical in degrees (0 for a vertical segment).
    pub fn vertical_deviation_deg(&self) -> f64 {
        (self.angle_deg() - 90.0).abs()
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(self.p1.x, self.p1.y, self.p2.x, self.p2.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RasterGlyph {
    pub id: String,
    pub bounds: Rect,
}

/// A piece of text positioned at its baseline-left anchor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextRun {
    pub id: String,
    pub anchor: Point,
    pub content: String,
    pub glyph_height: f64,
}

impl TextRun {
    pub fn new(id: impl Into<String>, anchor: Point, content: impl Into<String>, glyph_height: f64) -> Self {
        Self {
            id: id.into(),
            anchor,
            content: content.into(),
            glyph_height,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FigureDocument {
    pub circles: Vec<CircleGlyph>,
    pub segments: Vec<SegmentGlyph>,
    pub rasters: Vec<RasterGlyph>,
    pub texts: Vec<TextRun>,
    pub canvas: Rect,
    pub warnings: Vec<String>,
}

impl FigureDocument {
    pub fn primitive_count(&self) -> usize {
        self.circles.len() + self.segments.len() + self.rasters.len() + self.texts.len()
    }

    /// Serializes the model back to a minimal SVG document. Parsing the
    /// output reproduces the same circles, segments, rasters and texts.
    pub fn to_svg(&self) -> String {
        write::document_to_svg(self)
    }
}

use std::cmp::Ordering;

use super::{AxisConfig, AxisError, PlotBox};
use crate::svg::{FigureDocument, Point, Rect, SegmentGlyph};

pub fn detect_plot_box(doc: &FigureDocument) -> Result<PlotBox, AxisError> {
    detect_plot_box_with(doc, &AxisConfig::default())
}

/// A vertical candidate oriented bottom → top.
fn as_vertical(s: &SegmentGlyph) -> SegmentGlyph {
    if s.p1.y >= s.p2.y {
        s.clone()
    } else {
        SegmentGlyph::new(s.id.clone(), s.p2, s.p1)
    }
}

/// A horizontal candidate oriented left → right.
fn as_horizontal(s: &SegmentGlyph) -> SegmentGlyph {
    if s.p1.x <= s.p2.x {
        s.clone()
    } else {
        SegmentGlyph::new(s.id.clone(), s.p2, s.p1)
    }
}

struct Candidate {
    left: SegmentGlyph,
    bottom: SegmentGlyph,
    score: f64,
    corner: Point,
    total_length: f64,
}

/// Picks the left/bottom axis pair with the highest score
/// `(len_v / max_len_v) × (len_h / max_len_h) / (1 + corner_gap)`.
///
/// A pair qualifies only when the vertical's lower end meets the
/// horizontal's left end, so right and top frame lines never win.
pub fn detect_plot_box_with(doc: &FigureDocument, config: &AxisConfig) -> Result<PlotBox, AxisError> {
    let verticals: Vec<SegmentGlyph> = doc
        .segments
        .iter()
        .filter(|s| s.length() >= config.min_axis_length && s.vertical_deviation_deg() <= config.angle_tolerance_deg)
        .map(as_vertical)
        .collect();
    let horizontals: Vec<SegmentGlyph> = doc
        .segments
        .iter()
        .filter(|s| {
            s.length() >= config.min_axis_length && s.horizontal_deviation_deg() <= config.angle_tolerance_deg
        })
        .map(as_horizontal)
        .collect();

    let max_v = verticals.iter().map(SegmentGlyph::length).fold(0.0, f64::max);
    let max_h = horizontals.iter().map(SegmentGlyph::length).fold(0.0, f64::max);

    let mut best: Option<Candidate> = None;
    for v in &verticals {
        for h in &horizontals {
            let gap = v.p1.distance(&h.p1);
            if gap > config.corner_tolerance {
                continue;
            }
            let score = (v.length() / max_v) * (h.length() / max_h) / (1.0 + gap);
            let cand = Candidate {
                corner: Point::new(v.p1.x, h.p1.y),
                total_length: v.length() + h.length(),
                left: v.clone(),
                bottom: h.clone(),
                score,
            };
            if best.as_ref().is_none_or(|b| better(&cand, b)) {
                best = Some(cand);
            }
        }
    }

    let best = best.ok_or(AxisError::NoAxesFound)?;
    let interior = Rect::new(best.corner.x, best.left.p2.y, best.bottom.p2.x, best.corner.y);
    if !interior.has_area() {
        return Err(AxisError::NoAxesFound);
    }
    Ok(PlotBox {
        left_axis: best.left,
        bottom_axis: best.bottom,
        interior,
        score: best.score,
    })
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    let tol = 1e-12 * a.score.abs().max(b.score.abs());
    if (a.score - b.score).abs() > tol {
        return a.score > b.score;
    }
    // Lower-left-most corner, then longer axes.
    match a.corner.y.total_cmp(&b.corner.y) {
        Ordering::Greater => return true,
        Ordering::Less => return false,
        Ordering::Equal => {}
    }
    match a.corner.x.total_cmp(&b.corner.x) {
        Ordering::Less => return true,
        Ordering::Greater => return false,
        Ordering::Equal => {}
    }
    a.total_length > b.total_length
}

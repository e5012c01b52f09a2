//! Path data to straight segments.
//!
//! Only straight geometry survives: a curve is kept as its chord when every
//! control point lies within the curve tolerance of that chord, otherwise
//! the whole curve is dropped with a warning.

use svgtypes::{SimplePathSegment, SimplifyingPathParser};

use super::{AffineTransform, Point, SegmentGlyph, SvgError, SvgOptions};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlattenedPath {
    pub segments: Vec<SegmentGlyph>,
    pub warnings: Vec<String>,
}

/// Flattens `path_data` with the default curve tolerance. Segment ids are
/// `seg0`, `seg1`, ...
pub fn flatten_path(path_data: &str, transform: &AffineTransform) -> Result<FlattenedPath, SvgError> {
    flatten_path_with(path_data, transform, SvgOptions::default().curve_tolerance, "seg")
}

pub fn flatten_path_with(
    path_data: &str,
    transform: &AffineTransform,
    curve_tolerance: f64,
    id_prefix: &str,
) -> Result<FlattenedPath, SvgError> {
    let mut out = FlattenedPath::default();
    let mut start = Point::default();
    let mut current = Point::default();
    let mut next_id = 0usize;

    let mut push = |out: &mut FlattenedPath, a: Point, b: Point| {
        let p1 = transform.apply(a);
        let p2 = transform.apply(b);
        if p1 != p2 {
            out.segments
                .push(SegmentGlyph::new(format!("{id_prefix}{next_id}"), p1, p2));
            next_id += 1;
        }
    };

    for seg in SimplifyingPathParser::from(path_data) {
        let seg = seg.map_err(|e| SvgError::PathSyntax(e.to_string()))?;
        match seg {
            SimplePathSegment::MoveTo { x, y } => {
                current = Point::new(x, y);
                start = current;
            }
            SimplePathSegment::LineTo { x, y } => {
                let p = Point::new(x, y);
                push(&mut out, current, p);
                current = p;
            }
            SimplePathSegment::ClosePath => {
                push(&mut out, current, start);
                current = start;
            }
            SimplePathSegment::CurveTo {
                x1,
                y1,
                x2,
                y2,
                x,
                y,
            } => {
                let end = Point::new(x, y);
                let controls = [Point::new(x1, y1), Point::new(x2, y2)];
                flatten_curve(&mut out, transform, current, &controls, end, curve_tolerance, &mut push);
                current = end;
            }
            SimplePathSegment::Quadratic { x1, y1, x, y } => {
                let end = Point::new(x, y);
                let controls = [Point::new(x1, y1)];
                flatten_curve(&mut out, transform, current, &controls, end, curve_tolerance, &mut push);
                current = end;
            }
        }
    }
    Ok(out)
}

fn flatten_curve(
    out: &mut FlattenedPath,
    transform: &AffineTransform,
    from: Point,
    controls: &[Point],
    to: Point,
    tolerance: f64,
    push: &mut impl FnMut(&mut FlattenedPath, Point, Point),
) {
    let a = transform.apply(from);
    let b = transform.apply(to);
    let deviation = controls
        .iter()
        .map(|c| point_segment_distance(transform.apply(*c), a, b))
        .fold(0.0, f64::max);
    if deviation <= tolerance {
        push(out, from, to);
    } else {
        out.warnings.push(format!(
            "curve from ({:.3}, {:.3}) to ({:.3}, {:.3}) deviates {:.3} from its chord; skipped",
            a.x, a.y, b.x, b.y, deviation
        ));
    }
}

/// Euclidean distance from `p` to the closed segment `a`–`b`.
pub(crate) fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(&a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(&Point::new(a.x + t * dx, a.y + t * dy))
}

use super::{AxisConfig, AxisSide, PlotBox, TickMark};
use crate::svg::{FigureDocument, Point, SegmentGlyph};

pub fn detect_ticks(doc: &FigureDocument, plot_box: &PlotBox) -> Vec<TickMark> {
    detect_ticks_with(doc, plot_box, &AxisConfig::default())
}

/// Ticks on both calibrated axes, ordered by side then position.
///
/// Ticks closer together than half the touch tolerance are merged (the
/// longer one is kept); converters sometimes draw inner and outer ticks as
/// two segments.
pub fn detect_ticks_with(doc: &FigureDocument, plot_box: &PlotBox, config: &AxisConfig) -> Vec<TickMark> {
    let mut ticks = Vec::new();
    for side in [AxisSide::XAxis, AxisSide::YAxis] {
        let axis = plot_box.axis(side);
        let parallel_side = match side {
            AxisSide::XAxis => plot_box.interior.height(),
            AxisSide::YAxis => plot_box.interior.width(),
        };
        let max_len = config.max_tick_fraction * parallel_side;
        let mut found: Vec<TickMark> = doc
            .segments
            .iter()
            .filter(|s| !(s.id == axis.id && same_line(s, axis)))
            .filter_map(|s| tick_on_axis(s, axis, side, config, max_len))
            .collect();
        found.sort_by(|a, b| a.position.total_cmp(&b.position));

        let merge = config.tick_touch_tolerance / 2.0;
        let mut merged: Vec<TickMark> = Vec::with_capacity(found.len());
        for t in found {
            match merged.last_mut() {
                Some(prev) if (t.position - prev.position).abs() <= merge => {
                    if t.length > prev.length {
                        *prev = t;
                    }
                }
                _ => merged.push(t),
            }
        }
        ticks.extend(merged);
    }
    ticks
}

fn same_line(a: &SegmentGlyph, b: &SegmentGlyph) -> bool {
    (a.p1 == b.p1 && a.p2 == b.p2) || (a.p1 == b.p2 && a.p2 == b.p1)
}

fn tick_on_axis(
    s: &SegmentGlyph,
    axis: &SegmentGlyph,
    side: AxisSide,
    config: &AxisConfig,
    max_len: f64,
) -> Option<TickMark> {
    let len = s.length();
    if len < config.min_tick_length || len > max_len {
        return None;
    }
    let relative = (s.angle_deg() - axis.angle_deg()).rem_euclid(180.0);
    if (relative - 90.0).abs() > config.angle_tolerance_deg {
        return None;
    }

    let axis_len = axis.length();
    let ux = (axis.p2.x - axis.p1.x) / axis_len;
    let uy = (axis.p2.y - axis.p1.y) / axis_len;
    // Signed perpendicular offsets of the candidate's endpoints.
    let offset = |p: Point| (p.x - axis.p1.x) * -uy + (p.y - axis.p1.y) * ux;
    let t1 = offset(s.p1);
    let t2 = offset(s.p2);

    let touch = if t1.signum() != t2.signum() && t1 != 0.0 && t2 != 0.0 {
        let k = t1 / (t1 - t2);
        Point::new(s.p1.x + k * (s.p2.x - s.p1.x), s.p1.y + k * (s.p2.y - s.p1.y))
    } else if t1.abs().min(t2.abs()) <= config.tick_touch_tolerance {
        if t1.abs() <= t2.abs() {
            s.p1
        } else {
            s.p2
        }
    } else {
        return None;
    };

    let along = (touch.x - axis.p1.x) * ux + (touch.y - axis.p1.y) * uy;
    if along < -config.tick_touch_tolerance || along > axis_len + config.tick_touch_tolerance {
        return None;
    }
    let foot = Point::new(axis.p1.x + along * ux, axis.p1.y + along * uy);
    let position = match side {
        AxisSide::XAxis => foot.x,
        AxisSide::YAxis => foot.y,
    };
    Some(TickMark {
        position,
        side,
        length: len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axis::detect_plot_box;
    use crate::svg::Rect;

    fn seg(id: &str, x1: f64, y1: f64, x2: f64, y2: f64) -> SegmentGlyph {
        SegmentGlyph::new(id, Point::new(x1, y1), Point::new(x2, y2))
    }

    fn frame(extra: Vec<SegmentGlyph>) -> (FigureDocument, PlotBox) {
        let mut segments = vec![seg("v", 50.0, 400.0, 50.0, 50.0), seg("h", 50.0, 400.0, 500.0, 400.0)];
        segments.extend(extra);
        let doc = FigureDocument {
            segments,
            canvas: Rect::new(0.0, 0.0, 600.0, 500.0),
            ..Default::default()
        };
        let b = detect_plot_box(&doc).unwrap();
        (doc, b)
    }

    /// The tick predicate restated for an axis at y = 400 spanning x 50..500
    /// with a 350-unit tall box.
    fn x_tick_oracle(s: &SegmentGlyph) -> Option<f64> {
        let vertical = (s.p1.x - s.p2.x).abs() <= (s.p1.y - s.p2.y).abs() * 2f64.to_radians().tan();
        let (lo, hi) = (s.p1.y.min(s.p2.y), s.p1.y.max(s.p2.y));
        let gap = if lo <= 400.0 && hi >= 400.0 { 0.0 } else { (lo - 400.0).abs().min((hi - 400.0).abs()) };
        let len = s.length();
        (vertical && gap <= 1.0 && (0.5..=0.15 * 350.0).contains(&len)).then_some(s.p1.x)
    }

    fn x_positions(ticks: &[TickMark]) -> Vec<f64> {
        ticks.iter().filter(|t| t.side == AxisSide::XAxis).map(|t| t.position).collect()
    }

    #[test]
    fn three_stubs() {
        let (doc, b) = frame(vec![
            seg("t3", 250.0, 400.0, 250.0, 404.0),
            seg("t1", 50.0, 400.0, 50.0, 404.0),
            seg("t2", 150.0, 400.0, 150.0, 404.0),
        ]);
        let ticks = detect_ticks(&doc, &b);
        assert_eq!(x_positions(&ticks), vec![50.0, 150.0, 250.0]);
        assert!(ticks.iter().all(|t| t.length == 4.0));
    }

    #[test]
    fn detached_stub_excluded() {
        let stub = seg("far", 150.0, 405.0, 150.0, 409.0);
        assert_eq!(x_tick_oracle(&stub), None);
        let (doc, b) = frame(vec![stub]);
        assert!(x_positions(&detect_ticks(&doc, &b)).is_empty());
    }

    #[test]
    fn gridline_excluded_by_length() {
        let grid = seg("grid", 150.0, 265.0, 150.0, 405.0);
        assert_eq!(grid.length(), 0.4 * 350.0);
        assert_eq!(x_tick_oracle(&grid), None);
        let (doc, b) = frame(vec![grid]);
        assert!(x_positions(&detect_ticks(&doc, &b)).is_empty());
    }

    #[test]
    fn crossing_tick_position_is_intersection() {
        let cross = seg("c", 300.0, 397.0, 300.0, 403.0);
        assert_eq!(x_tick_oracle(&cross), Some(300.0));
        let (doc, b) = frame(vec![cross]);
        assert_eq!(x_positions(&detect_ticks(&doc, &b)), vec![300.0]);
    }

    #[test]
    fn y_ticks_and_duplicates() {
        let (doc, b) = frame(vec![
            seg("y1", 46.0, 300.0, 50.0, 300.0),
            seg("y1in", 50.0, 300.0, 53.0, 300.0),
            seg("y2", 46.0, 200.0, 50.0, 200.0),
        ]);
        let ys: Vec<_> = detect_ticks(&doc, &b)
            .into_iter()
            .filter(|t| t.side == AxisSide::YAxis)
            .collect();
        assert_eq!(ys.len(), 2);
        assert_eq!(ys[0].position, 200.0);
        assert_eq!(ys[1].length, 4.0);
    }
}

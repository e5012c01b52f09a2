use std::sync::LazyLock;

use regex::Regex;

use super::{median, AxisConfig, AxisError, AxisSide, PlotBox, TickLabel, TickMark};
use crate::svg::{estimated_width, TextRun};

static NUMBER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^[-\u{2212}]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+\u{2212}]?[0-9]+)?$").expect("valid regex")
});

/// Interprets a composed text run as a numeric tick label.
///
/// Accepts an optional `-` or U+2212 sign, digits with at most one decimal
/// point, an optional exponent, and an optional trailing `%` (value divided
/// by 100). Anything else, including axis titles, yields `None`.
pub fn parse_numeric_label(run: &TextRun) -> Option<TickLabel> {
    let mut text = run.content.trim();
    let mut percent = false;
    if let Some(stripped) = text.strip_suffix('%') {
        text = stripped.trim_end();
        percent = true;
    }
    if !NUMBER.is_match(text) {
        return None;
    }
    let normalized = text.replace('\u{2212}', "-");
    let mut value: f64 = normalized.parse().ok()?;
    if percent {
        value /= 100.0;
    }
    value.is_finite().then(|| TickLabel {
        value,
        anchor: run.anchor,
        raw: run.content.trim().to_string(),
        glyph_height: run.glyph_height,
    })
}

/// Where a label sits relative to an axis: its centre coordinate along the
/// axis, and its gap from the axis line on the label side. `None` when the
/// label is on the wrong side (inside the plot or beyond the axis).
///
/// Label extents are estimated from glyph height: digits are assumed
/// `0.5·h` wide and `0.7·h` tall above the baseline.
pub fn label_reference(label: &TickLabel, side: AxisSide, plot_box: &PlotBox) -> Option<(f64, f64)> {
    let h = label.glyph_height;
    let width = estimated_width(&label.raw, h);
    let corner = plot_box.corner();
    match side {
        AxisSide::XAxis => {
            let center_y = label.anchor.y - 0.35 * h;
            if center_y <= corner.y {
                return None;
            }
            let top = label.anchor.y - 0.7 * h;
            Some((label.anchor.x + width / 2.0, (top - corner.y).max(0.0)))
        }
        AxisSide::YAxis => {
            let center_x = label.anchor.x + width / 2.0;
            if center_x >= corner.x {
                return None;
            }
            let right = label.anchor.x + width;
            Some((label.anchor.y - 0.35 * h, (corner.x - right).max(0.0)))
        }
    }
}

pub fn match_ticks_to_labels(
    ticks: &[TickMark],
    labels: &[TickLabel],
    plot_box: &PlotBox,
    side: AxisSide,
) -> Result<Vec<(TickMark, TickLabel)>, AxisError> {
    match_ticks_to_labels_with(ticks, labels, plot_box, side, &AxisConfig::default())
}

/// Pairs the ticks of one axis with numeric labels.
///
/// Candidate pairs are accepted greedily in ascending along-axis distance;
/// on equal distance the leftward (x) or upward (y) label wins. Each tick
/// and label is used at most once. Pairs further apart than
/// `label_spacing_fraction` of the median tick spacing are rejected.
pub fn match_ticks_to_labels_with(
    ticks: &[TickMark],
    labels: &[TickLabel],
    plot_box: &PlotBox,
    side: AxisSide,
    config: &AxisConfig,
) -> Result<Vec<(TickMark, TickLabel)>, AxisError> {
    let mut ticks: Vec<TickMark> = ticks.iter().filter(|t| t.side == side).copied().collect();
    ticks.sort_by(|a, b| a.position.total_cmp(&b.position));
    if ticks.len() < 2 {
        return Err(AxisError::InsufficientMatches { side, found: 0 });
    }

    let mut spacings: Vec<f64> = ticks.windows(2).map(|w| w[1].position - w[0].position).collect();
    let spacing = median(&mut spacings).unwrap_or(0.0);
    let mut lengths: Vec<f64> = ticks.iter().map(|t| t.length).collect();
    let tick_len = median(&mut lengths).unwrap_or(0.0);
    let max_along = config.label_spacing_fraction * spacing;

    let placed: Vec<(usize, f64)> = labels
        .iter()
        .enumerate()
        .filter_map(|(j, label)| {
            let (along, perp) = label_reference(label, side, plot_box)?;
            let window = config.label_tick_factor * tick_len + config.label_glyph_factor * label.glyph_height;
            (perp <= window).then_some((j, along))
        })
        .collect();

    let mut candidates: Vec<(f64, f64, usize, usize)> = Vec::new();
    for (i, tick) in ticks.iter().enumerate() {
        for &(j, along) in &placed {
            let d = (along - tick.position).abs();
            if d <= max_along {
                candidates.push((d, along, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });

    let mut tick_used = vec![false; ticks.len()];
    let mut label_used = vec![false; labels.len()];
    let mut pairs = Vec::new();
    for (_, _, i, j) in candidates {
        if tick_used[i] || label_used[j] {
            continue;
        }
        tick_used[i] = true;
        label_used[j] = true;
        pairs.push((ticks[i], labels[j].clone()));
    }
    pairs.sort_by(|a, b| a.0.position.total_cmp(&b.0.position));

    if pairs.len() < 2 {
        return Err(AxisError::InsufficientMatches {
            side,
            found: pairs.len(),
        });
    }
    Ok(pairs)
}

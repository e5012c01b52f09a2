use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AxisStyle, SyntheticSpec};
use crate::svg::GLYPH_ADVANCE_EM;

const MANTISSAS: [f64; 4] = [1.0, 2.0, 2.5, 5.0];

/// 1×1 transparent PNG used as the raster plot body.
const PIXEL_PNG: &str = "iVBORw0KGgoAAAANSUhEUgAAAAEAAAABCAYAAAAfFcSJAAAADUlEQVR42mNkYPhfDwAChwGA60e6kgAAAABJRU5ErkJggg==";

/// Renders `value` with `decimals` fractional digits, never as `-0`.
pub fn format_tick_value(value: f64, decimals: usize) -> String {
    let s = format!("{value:.decimals$}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Evenly spaced round tick values covering `[min, max]`, with their label
/// text. Steps are 1, 2, 2.5 or 5 times a power of ten, and each returned
/// value is the parse of its own label. Returns `n` ticks when a round step
/// allows it, otherwise the smallest larger count that does.
pub fn nice_ticks(min: f64, max: f64, n: usize) -> Vec<(f64, String)> {
    let span = max - min;
    let mut n = n.max(2);
    loop {
        let raw = span / (n - 1) as f64;
        let mut exp = raw.log10().floor() as i32;
        let mut mi = MANTISSAS.iter().position(|m| m * 10f64.powi(exp) >= raw * (1.0 - 1e-12)).unwrap_or(4);
        loop {
            if mi == MANTISSAS.len() {
                mi = 0;
                exp += 1;
            }
            let step = MANTISSAS[mi] * 10f64.powi(exp);
            if step > 10.0 * span {
                break;
            }
            let first = (min / step + 1e-9).floor();
            let last = first + (n - 1) as f64;
            if last * step >= max - 1e-9 * step {
                let decimals = (-exp).max(0) as usize + usize::from(mi == 2 && exp <= 0);
                return (0..n)
                    .map(|k| {
                        let label = format_tick_value((first + k as f64) * step, decimals);
                        (label.parse().expect("formatted number"), label)
                    })
                    .collect();
            }
            mi += 1;
        }
        n += 1;
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn label_width(label: &str, h: f64) -> f64 {
    label.chars().count() as f64 * GLYPH_ADVANCE_EM * h
}

/// Maps data values onto a device interval, optionally logarithmically.
struct AxisMap {
    lo: f64,
    hi: f64,
    start: f64,
    end: f64,
    log: bool,
}

impl AxisMap {
    fn new(first: f64, last: f64, pad: f64, start: f64, end: f64, log: bool) -> Self {
        let (a, b) = if log { (first.log10(), last.log10()) } else { (first, last) };
        let margin = pad * (b - a);
        Self {
            lo: a - margin,
            hi: b + margin,
            start,
            end,
            log,
        }
    }

    fn device(&self, value: f64) -> f64 {
        let v = if self.log { value.log10() } else { value };
        self.start + (v - self.lo) / (self.hi - self.lo) * (self.end - self.start)
    }
}

struct Style {
    font: f64,
    tick_len: f64,
    inward_ticks: bool,
    frame: bool,
    per_glyph: bool,
    middle_anchor: bool,
    unicode_minus: bool,
    gridlines: bool,
    legend: bool,
    ellipses: bool,
    filled: bool,
    font_on_group: bool,
    pad: f64,
    offset: Option<(f64, f64)>,
    duplicate: bool,
}

impl Style {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        Self {
            font: *[8.0, 10.0, 12.0].choose(rng).expect("non-empty"),
            tick_len: *[3.0, 4.0, 5.0, 6.0].choose(rng).expect("non-empty"),
            inward_ticks: rng.gen_bool(0.2),
            frame: rng.gen_bool(0.35),
            per_glyph: rng.gen_bool(0.3),
            middle_anchor: rng.gen_bool(0.5),
            unicode_minus: rng.gen_bool(0.3),
            gridlines: rng.gen_bool(0.25),
            legend: rng.gen_bool(0.3),
            ellipses: rng.gen_bool(0.15),
            filled: rng.gen_bool(0.5),
            font_on_group: rng.gen_bool(0.3),
            pad: *[0.0, 0.03, 0.06].choose(rng).expect("non-empty"),
            offset: rng.gen_bool(0.3).then(|| (rng.gen_range(5..40) as f64, rng.gen_range(5..40) as f64)),
            duplicate: rng.gen_bool(0.3),
        }
    }
}

fn log_ticks(min: f64, max: f64, n: usize) -> Vec<(f64, String)> {
    let first = min.log10().floor() as i32;
    let last = (max.log10().ceil() as i32).max(first + n as i32 - 1).max(first + 2);
    (first..=last)
        .map(|k| {
            let label = format_tick_value(10f64.powi(k), (-k).max(0) as usize);
            (label.parse().expect("formatted number"), label)
        })
        .collect()
}

fn draw_points(spec: &SyntheticSpec, rng: &mut ChaCha8Rng, duplicate: bool) -> Vec<(f64, f64)> {
    let (x0, x1) = spec.x_range;
    let (y0, y1) = spec.y_range;
    let mut truth: Vec<(f64, f64)> = (0..spec.n_points)
        .map(|_| {
            let x = if spec.axis_style == AxisStyle::LogX {
                10f64.powf(rng.gen_range(x0.log10()..=x1.log10()))
            } else {
                rng.gen_range(x0..=x1)
            };
            (x.clamp(x0, x1), rng.gen_range(y0..=y1))
        })
        .collect();
    if duplicate && truth.len() >= 2 {
        let last = truth.len() - 1;
        truth[last] = truth[0];
    }
    truth
}

/// Builds a scatter figure from `spec`. Returns the SVG bytes and the
/// plotted data values. Identical specs give identical bytes.
pub fn generate_scatter_svg(spec: &SyntheticSpec) -> (Vec<u8>, Vec<(f64, f64)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let style = Style::draw(&mut rng);
    let truth = draw_points(spec, &mut rng, style.duplicate);

    let log_x = spec.axis_style == AxisStyle::LogX;
    let x_ticks = if log_x {
        log_ticks(spec.x_range.0, spec.x_range.1, spec.n_ticks_x)
    } else {
        nice_ticks(spec.x_range.0, spec.x_range.1, spec.n_ticks_x)
    };
    let y_ticks = nice_ticks(spec.y_range.0, spec.y_range.1, spec.n_ticks_y);
    let minus = |s: &str| {
        if style.unicode_minus {
            s.replace('-', "\u{2212}")
        } else {
            s.to_string()
        }
    };

    let (width, height) = spec.canvas;
    let max_label = |ticks: &[(f64, String)]| ticks.iter().map(|t| t.1.chars().count()).max().unwrap_or(1) as f64;
    let x_chars = max_label(&x_ticks);
    let y_chars = max_label(&y_ticks);

    // Shrink the font until neighbouring labels keep a visible gap.
    let mut h = style.font;
    let tl = style.tick_len;
    let layout = |h: f64| {
        let left = (12.0 + y_chars * GLYPH_ADVANCE_EM * h + tl + 3.0).max(40.0);
        let bottom = tl + 3.0 + h + 2.0 * h + 12.0;
        let top = 2.0 * h + 16.0;
        let right = 20.0;
        (left, width - right, top, height - bottom)
    };
    let fits = |h: f64| {
        let (l, r, t, b) = layout(h);
        let sx = (r - l) / (x_ticks.len() as f64 - 1.0) / (1.0 + 2.0 * style.pad);
        let sy = (b - t) / (y_ticks.len() as f64 - 1.0) / (1.0 + 2.0 * style.pad);
        sx >= x_chars * GLYPH_ADVANCE_EM * h + 1.5 * h && sy >= 1.5 * h
    };
    while h > 3.0 && !fits(h) {
        h -= 1.0;
    }
    let (left, right, top, bottom) = layout(h);

    let reversed_x = spec.axis_style == AxisStyle::ReversedX;
    let reversed_y = spec.axis_style == AxisStyle::ReversedY;
    let (xs, xe) = if reversed_x { (right, left) } else { (left, right) };
    let (ys, ye) = if reversed_y { (top, bottom) } else { (bottom, top) };
    let xmap = AxisMap::new(x_ticks[0].0, x_ticks[x_ticks.len() - 1].0, style.pad, xs, xe, log_x);
    let ymap = AxisMap::new(y_ticks[0].0, y_ticks[y_ticks.len() - 1].0, style.pad, ys, ye, false);

    let (dx, dy) = style.offset.unwrap_or((0.0, 0.0));
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" width="{w}" height="{hh}" viewBox="0 0 {w} {hh}">
<title>synthetic scatter {seed}</title>"#,
        w = num(width + dx),
        hh = num(height + dy),
        seed = spec.seed
    );
    if style.offset.is_some() {
        let _ = writeln!(s, r#"<g transform="translate({},{})">"#, num(dx), num(dy));
    }
    let font_attr = if style.font_on_group {
        let _ = writeln!(s, r#"<g font-size="{}" font-family="sans-serif">"#, num(h));
        String::new()
    } else {
        format!(r#" font-size="{}""#, num(h))
    };

    if style.gridlines {
        let _ = writeln!(s, r##"<g stroke="#dddddd" stroke-width="0.5">"##);
        for (v, _) in &x_ticks {
            let x = xmap.device(*v);
            if (x - left).abs() > 0.5 && (x - right).abs() > 0.5 {
                let _ = writeln!(s, r#"<line x1="{x}" y1="{b}" x2="{x}" y2="{t}"/>"#, x = num(x), b = num(bottom), t = num(top));
            }
        }
        for (v, _) in &y_ticks {
            let y = ymap.device(*v);
            if (y - top).abs() > 0.5 && (y - bottom).abs() > 0.5 {
                let _ = writeln!(s, r#"<line x1="{l}" y1="{y}" x2="{r}" y2="{y}"/>"#, l = num(left), r = num(right), y = num(y));
            }
        }
        s.push_str("</g>\n");
    }

    if style.frame {
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            num(left),
            num(top),
            num(right - left),
            num(bottom - top)
        );
    } else {
        let _ = writeln!(
            s,
            r#"<path d="M {l} {t} L {l} {b} L {r} {b}" fill="none" stroke="black"/>"#,
            l = num(left),
            t = num(top),
            b = num(bottom),
            r = num(right)
        );
    }

    let tick_dir = if style.inward_ticks { -1.0 } else { 1.0 };
    s.push_str("<g stroke=\"black\">\n");
    for (v, _) in &x_ticks {
        let x = num(xmap.device(*v));
        let _ = writeln!(s, r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}"/>"#, num(bottom), num(bottom + tick_dir * tl));
    }
    for (v, _) in &y_ticks {
        let y = num(ymap.device(*v));
        let _ = writeln!(s, r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}"/>"#, num(left - tick_dir * tl), num(left));
    }
    s.push_str("</g>\n");

    let label_gap = if style.inward_ticks { 3.0 } else { tl + 3.0 };
    let x_baseline = bottom + label_gap + 0.7 * h;
    for (v, label) in &x_ticks {
        let cx = xmap.device(*v);
        let text = minus(label);
        let w = label_width(label, h);
        if style.per_glyph {
            let xs: Vec<String> = (0..text.chars().count())
                .map(|i| num(cx - w / 2.0 + i as f64 * GLYPH_ADVANCE_EM * h))
                .collect();
            let _ = writeln!(s, r#"<text x="{}" y="{}"{font_attr}>{text}</text>"#, xs.join(" "), num(x_baseline));
        } else if style.middle_anchor {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle"{font_attr}>{text}</text>"#,
                num(cx),
                num(x_baseline)
            );
        } else {
            let _ = writeln!(s, r#"<text x="{}" y="{}"{font_attr}>{text}</text>"#, num(cx - w / 2.0), num(x_baseline));
        }
    }
    let y_right = left - label_gap;
    for (v, label) in &y_ticks {
        let baseline = ymap.device(*v) + 0.35 * h;
        let text = minus(label);
        if style.middle_anchor {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="end"{font_attr}>{text}</text>"#,
                num(y_right),
                num(baseline)
            );
        } else {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}"{font_attr}>{text}</text>"#,
                num(y_right - label_width(label, h)),
                num(baseline)
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle"{font_attr}>Effect size</text>"#,
        num((left + right) / 2.0),
        num(x_baseline + 2.0 * h)
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}"{font_attr}>Standard error</text>"#, num(left - 10.0), num(top - 8.0));

    let r = spec.marker_radius;
    let (fill, stroke) = if style.filled { ("black", "none") } else { ("none", "black") };
    if style.legend {
        let ly = top - 8.0 - 0.35 * h;
        let lx = right - 12.0 * GLYPH_ADVANCE_EM * h - 3.0 * r;
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}" stroke="{stroke}"/>"#, num(lx), num(ly), num(r));
        let _ = writeln!(s, r#"<text x="{}" y="{}"{font_attr}>Studies</text>"#, num(lx + 2.0 * r), num(top - 8.0));
    }

    if spec.axis_style == AxisStyle::RasterBody {
        let _ = writeln!(
            s,
            r#"<image x="{}" y="{}" width="{}" height="{}" preserveAspectRatio="none" xlink:href="data:image/png;base64,{PIXEL_PNG}"/>"#,
            num(left),
            num(top),
            num(right - left),
            num(bottom - top)
        );
    } else {
        let _ = writeln!(s, r#"<g fill="{fill}" stroke="{stroke}" stroke-width="0.75">"#);
        for &(x, y) in &truth {
            let (cx, cy) = (num(xmap.device(x)), num(ymap.device(y)));
            if style.ellipses {
                let _ = writeln!(s, r#"<ellipse cx="{cx}" cy="{cy}" rx="{r}" ry="{r}"/>"#, r = num(r));
            } else {
                let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="{r}"/>"#, r = num(r));
            }
        }
        s.push_str("</g>\n");
    }

    if style.font_on_group {
        s.push_str("</g>\n");
    }
    if style.offset.is_some() {
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    (s.into_bytes(), truth)
}

//! Diagnostic overlay appended to the source SVG.
//!
//! The original bytes are kept verbatim; a single `<g id="figdata-overlay">`
//! is inserted just before the root element's closing tag.

use std::fmt::Write as _;

use super::OverlayColors;
use crate::axis::{AxisSide, PlotBox, TickLabel, TickMark};
use crate::svg::{estimated_width, AffineTransform, CircleGlyph};

pub const OVERLAY_ID: &str = "figdata-overlay";

/// Everything detected for one figure, in device units.
#[derive(Debug, Clone, Default)]
pub struct Overlay {
    pub plot_box: Option<PlotBox>,
    pub ticks: Vec<TickMark>,
    pub labels: Vec<TickLabel>,
    pub glyphs: Vec<CircleGlyph>,
}

fn overlay_markup(overlay: &Overlay, colors: &OverlayColors, root_transform: Option<AffineTransform>) -> String {
    let mut s = String::new();
    let wrap = root_transform.and_then(|t| t.inverse());
    match wrap {
        Some(inv) => {
            let _ = write!(s, r#"<g id="{OVERLAY_ID}" fill="none" transform="{}">"#, inv.to_svg());
        }
        None => {
            let _ = write!(s, r#"<g id="{OVERLAY_ID}" fill="none">"#);
        }
    }

    if let Some(b) = &overlay.plot_box {
        let r = &b.interior;
        let _ = write!(
            s,
            r#"<rect class="plot-box" x="{}" y="{}" width="{}" height="{}" stroke="{}" stroke-width="1.5" stroke-dasharray="6 3"/>"#,
            r.min_x,
            r.min_y,
            r.width(),
            r.height(),
            colors.plot_box
        );
        let corner = b.corner();
        for t in &overlay.ticks {
            let half = t.length.max(2.0);
            let (x1, y1, x2, y2) = match t.side {
                AxisSide::XAxis => (t.position, corner.y - half, t.position, corner.y + half),
                AxisSide::YAxis => (corner.x - half, t.position, corner.x + half, t.position),
            };
            let _ = write!(
                s,
                r#"<line class="tick" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{}" stroke-width="1"/>"#,
                colors.ticks
            );
        }
    }
    for l in &overlay.labels {
        let h = l.glyph_height;
        let _ = write!(
            s,
            r#"<rect class="label" x="{}" y="{}" width="{}" height="{}" stroke="{}" stroke-width="0.75" stroke-dasharray="2 2"/>"#,
            l.anchor.x,
            l.anchor.y - 0.8 * h,
            estimated_width(&l.raw, h),
            h,
            colors.labels
        );
    }
    for c in &overlay.glyphs {
        let _ = write!(
            s,
            r#"<circle class="glyph" cx="{}" cy="{}" r="{}" stroke="{}" stroke-width="0.75"/>"#,
            c.center.x,
            c.center.y,
            c.radius + 1.5,
            colors.glyphs
        );
    }
    s.push_str("</g>");
    s
}

/// Returns the source SVG with the overlay inserted. Input that cannot be
/// parsed as XML is returned unchanged.
pub fn annotate_svg(source: &[u8], overlay: &Overlay, colors: &OverlayColors) -> Vec<u8> {
    let Ok(text) = std::str::from_utf8(source) else {
        return source.to_vec();
    };
    let Ok(doc) = roxmltree::Document::parse_with_options(
        text,
        roxmltree::ParsingOptions {
            allow_dtd: true,
            ..Default::default()
        },
    ) else {
        return source.to_vec();
    };
    let root = doc.root_element();
    let range = root.range();
    let element = &text[range.clone()];
    let root_transform = root.attribute("transform").and_then(AffineTransform::parse);
    let markup = overlay_markup(overlay, colors, root_transform);

    let mut out = String::with_capacity(text.len() + markup.len() + 32);
    if element.ends_with("/>") {
        let tag_end = element[1..]
            .find(|c: char| c.is_whitespace() || c == '/' || c == '>')
            .map_or(element.len(), |i| i + 1);
        let qualified = &element[1..tag_end];
        out.push_str(&text[..range.end - 2]);
        out.push('>');
        out.push_str(&markup);
        let _ = write!(out, "</{qualified}>");
        out.push_str(&text[range.end..]);
    } else {
        let close = range.start + element.rfind("</").unwrap_or(element.len());
        out.push_str(&text[..close]);
        out.push_str(&markup);
        out.push_str(&text[close..]);
    }
    out.into_bytes()
}

/// Removes the overlay group, recovering the original bytes of a document
/// produced by [`annotate_svg`] from a non-self-closing root.
pub fn strip_overlay(annotated: &str) -> Option<String> {
    let start = annotated.find(&format!(r#"<g id="{OVERLAY_ID}""#))?;
    let end = start + annotated[start..].find("</g>")? + "</g>".len();
    let mut out = annotated[..start].to_string();
    out.push_str(&annotated[end..]);
    Some(out)
}

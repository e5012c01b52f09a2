use std::fmt::Write as _;

use super::FigureDocument;

pub(crate) fn escape_xml(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub(super) fn document_to_svg(doc: &FigureDocument) -> String {
    let c = &doc.canvas;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        c.min_x,
        c.min_y,
        c.width(),
        c.height()
    );
    for seg in &doc.segments {
        let _ = writeln!(
            s,
            r#"  <line id="{}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            escape_xml(&seg.id),
            seg.p1.x,
            seg.p1.y,
            seg.p2.x,
            seg.p2.y
        );
    }
    for r in &doc.rasters {
        let b = &r.bounds;
        let _ = writeln!(
            s,
            r#"  <image id="{}" x="{}" y="{}" width="{}" height="{}"/>"#,
            escape_xml(&r.id),
            b.min_x,
            b.min_y,
            b.width(),
            b.height()
        );
    }
    for circle in &doc.circles {
        let _ = writeln!(
            s,
            r#"  <circle id="{}" cx="{}" cy="{}" r="{}" style="{}"/>"#,
            escape_xml(&circle.id),
            circle.center.x,
            circle.center.y,
            circle.radius,
            escape_xml(&circle.stroke_style)
        );
    }
    for t in &doc.texts {
        let _ = writeln!(
            s,
            r#"  <text id="{}" x="{}" y="{}" font-size="{}">{}</text>"#,
            escape_xml(&t.id),
            t.anchor.x,
            t.anchor.y,
            t.glyph_height,
            escape_xml(&t.content)
        );
    }
    s.push_str("</svg>\n");
    s
}

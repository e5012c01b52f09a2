use std::collections::VecDeque;
use std::str::FromStr;

use roxmltree::{Document, Node, ParsingOptions};

use super::path::flatten_path_with;
use super::text::GLYPH_ADVANCE_EM;
use super::{
    AffineTransform, CircleGlyph, FigureDocument, Point, RasterGlyph, Rect, SegmentGlyph, SvgError,
    SvgOptions, TextRun,
};

const SVG_NS: &str = "http://www.w3.org/2000/svg";

/// Parses an SVG document with default tolerances.
pub fn parse_svg(bytes: &[u8]) -> Result<FigureDocument, SvgError> {
    parse_svg_with(bytes, &SvgOptions::default())
}

pub fn parse_svg_with(bytes: &[u8], options: &SvgOptions) -> Result<FigureDocument, SvgError> {
    let text = std::str::from_utf8(bytes).map_err(|e| SvgError::MalformedXml(e.to_string()))?;
    let xml = Document::parse_with_options(
        text,
        ParsingOptions {
            allow_dtd: true,
            ..ParsingOptions::default()
        },
    )
    .map_err(|e| SvgError::MalformedXml(e.to_string()))?;

    let root = xml.root_element();
    if root.tag_name().name() != "svg" || !in_svg_namespace(root) {
        return Err(SvgError::NotSvg(root.tag_name().name().to_string()));
    }

    let mut builder = Builder {
        options: *options,
        doc: FigureDocument::default(),
        counter: 0,
    };
    builder.visit(root, &AffineTransform::IDENTITY, true)?;

    let mut doc = builder.doc;
    doc.canvas = match declared_canvas(root) {
        Some(c) => c,
        None => content_bounds(&doc).unwrap_or_default(),
    };
    discard_far_geometry(&mut doc, options.canvas_extent_factor);
    Ok(doc)
}

fn in_svg_namespace(node: Node) -> bool {
    match node.tag_name().namespace() {
        None => true,
        Some(ns) => ns == SVG_NS,
    }
}

struct Builder {
    options: SvgOptions,
    doc: FigureDocument,
    counter: usize,
}

impl Builder {
    fn element_id(&mut self, node: Node, name: &str) -> String {
        self.counter += 1;
        match node.attribute("id") {
            Some(id) if !id.is_empty() => id.to_string(),
            _ => format!("{name}{}", self.counter),
        }
    }

    fn warn(&mut self, msg: String) {
        self.doc.warnings.push(msg);
    }

    fn visit(&mut self, node: Node, parent: &AffineTransform, is_root: bool) -> Result<(), SvgError> {
        if !node.is_element() || !in_svg_namespace(node) {
            return Ok(());
        }
        let name = node.tag_name().name();

        let mut ctm = *parent;
        if let Some(attr) = node.attribute("transform") {
            match AffineTransform::parse(attr) {
                Some(t) if t.is_finite() && t.determinant() != 0.0 => ctm = parent.then_apply_to(&t),
                Some(_) => {
                    return Err(SvgError::DegenerateTransform {
                        element: name.to_string(),
                        transform: attr.to_string(),
                    })
                }
                None => {
                    self.warn(format!("<{name}> has unparseable transform `{attr}`; skipped"));
                    return Ok(());
                }
            }
        }

        match name {
            "svg" => {
                if !is_root {
                    let dx = number_attr(node, "x").unwrap_or(0.0);
                    let dy = number_attr(node, "y").unwrap_or(0.0);
                    ctm = ctm.then_apply_to(&AffineTransform::translate(dx, dy));
                }
                self.visit_children(node, &ctm)
            }
            "g" | "a" | "switch" => self.visit_children(node, &ctm),
            "defs" | "symbol" | "clipPath" | "mask" | "pattern" | "marker" | "linearGradient"
            | "radialGradient" | "style" | "title" | "desc" | "metadata" | "filter" | "script" => Ok(()),
            "circle" => {
                self.circle(node, &ctm, name);
                Ok(())
            }
            "ellipse" => {
                self.ellipse(node, &ctm);
                Ok(())
            }
            "line" => {
                self.line(node, &ctm);
                Ok(())
            }
            "rect" => {
                self.rect(node, &ctm);
                Ok(())
            }
            "polyline" | "polygon" => {
                self.poly(node, &ctm, name == "polygon");
                Ok(())
            }
            "path" => {
                self.path(node, &ctm);
                Ok(())
            }
            "image" => {
                self.image(node, &ctm);
                Ok(())
            }
            "text" => {
                self.text(node, &ctm);
                Ok(())
            }
            other => {
                let id = self.element_id(node, other);
                self.warn(format!("unsupported element <{other}> ({id}); skipped"));
                Ok(())
            }
        }
    }

    fn visit_children(&mut self, node: Node, ctm: &AffineTransform) -> Result<(), SvgError> {
        for child in node.children() {
            self.visit(child, ctm, false)?;
        }
        Ok(())
    }

    fn push_circle(&mut self, node: Node, ctm: &AffineTransform, id: String, center: Point, radius: f64) {
        let (major, minor) = singular_values(ctm);
        if major > 0.0 && (major - minor) / major > self.options.ellipse_tolerance {
            self.warn(format!("circle {id} is distorted into an ellipse by its transform; skipped"));
            return;
        }
        let center = ctm.apply(center);
        let radius = radius * ctm.length_scale();
        if !center.is_finite() || !radius.is_finite() || radius <= 0.0 {
            self.warn(format!("circle {id} has non-finite geometry; skipped"));
            return;
        }
        self.doc.circles.push(CircleGlyph {
            id,
            center,
            radius,
            stroke_style: style_text(node),
        });
    }

    fn circle(&mut self, node: Node, ctm: &AffineTransform, name: &str) {
        let id = self.element_id(node, name);
        let cx = number_attr(node, "cx").unwrap_or(0.0);
        let cy = number_attr(node, "cy").unwrap_or(0.0);
        match number_attr(node, "r") {
            Some(r) if r > 0.0 && r.is_finite() => self.push_circle(node, ctm, id, Point::new(cx, cy), r),
            _ => self.warn(format!("circle {id} has no positive radius; skipped")),
        }
    }

    fn ellipse(&mut self, node: Node, ctm: &AffineTransform) {
        let id = self.element_id(node, "ellipse");
        let cx = number_attr(node, "cx").unwrap_or(0.0);
        let cy = number_attr(node, "cy").unwrap_or(0.0);
        let rx = number_attr(node, "rx").unwrap_or(0.0);
        let ry = number_attr(node, "ry").unwrap_or(0.0);
        if !(rx > 0.0 && ry > 0.0) {
            self.warn(format!("ellipse {id} has no positive radii; skipped"));
            return;
        }
        if (rx - ry).abs() / rx.max(ry) > self.options.ellipse_tolerance {
            self.warn(format!("ellipse {id} is not circular (rx={rx}, ry={ry}); skipped"));
            return;
        }
        self.push_circle(node, ctm, id, Point::new(cx, cy), (rx + ry) / 2.0);
    }

    fn line(&mut self, node: Node, ctm: &AffineTransform) {
        let id = self.element_id(node, "line");
        let p1 = ctm.apply(Point::new(
            number_attr(node, "x1").unwrap_or(0.0),
            number_attr(node, "y1").unwrap_or(0.0),
        ));
        let p2 = ctm.apply(Point::new(
            number_attr(node, "x2").unwrap_or(0.0),
            number_attr(node, "y2").unwrap_or(0.0),
        ));
        if p1 == p2 || !p1.is_finite() || !p2.is_finite() {
            self.warn(format!("line {id} has zero length; skipped"));
            return;
        }
        self.doc.segments.push(SegmentGlyph::new(id, p1, p2));
    }

    fn push_polyline(&mut self, id: &str, points: &[Point], ctm: &AffineTransform) {
        let mut k = 0;
        for w in points.windows(2) {
            let (p1, p2) = (ctm.apply(w[0]), ctm.apply(w[1]));
            if p1 != p2 {
                self.doc.segments.push(SegmentGlyph::new(format!("{id}.{k}"), p1, p2));
                k += 1;
            }
        }
    }

    fn rect(&mut self, node: Node, ctm: &AffineTransform) {
        let id = self.element_id(node, "rect");
        let x = number_attr(node, "x").unwrap_or(0.0);
        let y = number_attr(node, "y").unwrap_or(0.0);
        let w = number_attr(node, "width").unwrap_or(0.0);
        let h = number_attr(node, "height").unwrap_or(0.0);
        if !(w > 0.0 && h > 0.0) {
            self.warn(format!("rect {id} has no area; skipped"));
            return;
        }
        let corners = [
            Point::new(x, y),
            Point::new(x + w, y),
            Point::new(x + w, y + h),
            Point::new(x, y + h),
            Point::new(x, y),
        ];
        self.push_polyline(&id, &corners, ctm);
    }

    fn poly(&mut self, node: Node, ctm: &AffineTransform, closed: bool) {
        let name = if closed { "polygon" } else { "polyline" };
        let id = self.element_id(node, name);
        let mut points: Vec<Point> = svgtypes::PointsParser::from(node.attribute("points").unwrap_or(""))
            .map(|(x, y)| Point::new(x, y))
            .collect();
        if points.len() < 2 {
            self.warn(format!("{name} {id} has fewer than two points; skipped"));
            return;
        }
        if closed {
            points.push(points[0]);
        }
        self.push_polyline(&id, &points, ctm);
    }

    fn path(&mut self, node: Node, ctm: &AffineTransform) {
        let id = self.element_id(node, "path");
        let data = node.attribute("d").unwrap_or("");
        match flatten_path_with(data, ctm, self.options.curve_tolerance, &format!("{id}.")) {
            Ok(flat) => {
                if flat.segments.is_empty() && flat.warnings.is_empty() {
                    self.warn(format!("path {id} contains no drawable segment; skipped"));
                }
                self.doc.segments.extend(flat.segments);
                for w in flat.warnings {
                    self.warn(format!("path {id}: {w}"));
                }
            }
            Err(e) => self.warn(format!("path {id}: {e}; skipped")),
        }
    }

    fn image(&mut self, node: Node, ctm: &AffineTransform) {
        let id = self.element_id(node, "image");
        let x = number_attr(node, "x").unwrap_or(0.0);
        let y = number_attr(node, "y").unwrap_or(0.0);
        let w = number_attr(node, "width").unwrap_or(0.0);
        let h = number_attr(node, "height").unwrap_or(0.0);
        if !(w > 0.0 && h > 0.0) {
            self.warn(format!("image {id} has no area; skipped"));
            return;
        }
        let corners = [
            Point::new(x, y),
            Point::new(x + w, y),
            Point::new(x + w, y + h),
            Point::new(x, y + h),
        ];
        let bounds = Rect::from_points(corners.iter().map(|p| ctm.apply(*p))).unwrap_or_default();
        self.doc.rasters.push(RasterGlyph { id, bounds });
    }

    fn text(&mut self, node: Node, ctm: &AffineTransform) {
        let id = self.element_id(node, "text");
        let mut slots = Vec::new();
        let mut stack = Vec::new();
        collect_glyphs(node, &mut stack, self.options.default_font_size, &mut slots);

        let mut runs: Vec<(Point, String, f64, TextAnchor)> = Vec::new();
        let mut pen = Point::default();
        for slot in slots {
            let starts_run = runs.is_empty() || slot.x.is_some() || slot.y.is_some();
            if starts_run {
                pen = Point::new(slot.x.unwrap_or(pen.x), slot.y.unwrap_or(pen.y));
                runs.push((pen, String::new(), slot.font_size, slot.anchor));
            }
            let current = runs.last_mut().expect("run started above");
            current.1.push(slot.ch);
            current.2 = current.2.max(slot.font_size);
        }

        let mut emitted = 0;
        for (k, (origin, content, font_size, anchor)) in runs.into_iter().enumerate() {
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            // Leading spaces shift the visible start.
            let lead = content.chars().take_while(|c| c.is_whitespace()).count() as f64;
            let width = trimmed.chars().count() as f64 * GLYPH_ADVANCE_EM * font_size;
            let shift = match anchor {
                TextAnchor::Start => lead * GLYPH_ADVANCE_EM * font_size,
                TextAnchor::Middle => -width / 2.0,
                TextAnchor::End => -width,
            };
            let anchor_pt = ctm.apply(Point::new(origin.x + shift, origin.y));
            let glyph_height = font_size * ctm.length_scale();
            if !anchor_pt.is_finite() || !glyph_height.is_finite() || glyph_height <= 0.0 {
                continue;
            }
            self.doc.texts.push(TextRun {
                id: if k == 0 { id.to_string() } else { format!("{id}.{k}") },
                anchor: anchor_pt,
                content: trimmed.to_string(),
                glyph_height,
            });
            emitted += 1;
        }
        if emitted == 0 {
            self.warn(format!("text {id} has no visible content; skipped"));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum TextAnchor {
    Start,
    Middle,
    End,
}

struct GlyphSlot {
    ch: char,
    x: Option<f64>,
    y: Option<f64>,
    font_size: f64,
    anchor: TextAnchor,
}

struct PositionLists {
    xs: VecDeque<f64>,
    ys: VecDeque<f64>,
}

/// Walks `<text>`/`<tspan>` content in document order, assigning each
/// character the innermost explicit x/y that addresses it.
fn collect_glyphs(node: Node, stack: &mut Vec<PositionLists>, default_font: f64, out: &mut Vec<GlyphSlot>) {
    stack.push(PositionLists {
        xs: number_list(node.attribute("x")),
        ys: number_list(node.attribute("y")),
    });
    let font_size = inherited_property(node, "font-size")
        .and_then(parse_number)
        .filter(|v| *v > 0.0)
        .unwrap_or(default_font);
    let anchor = match inherited_property(node, "text-anchor") {
        Some("middle") => TextAnchor::Middle,
        Some("end") => TextAnchor::End,
        _ => TextAnchor::Start,
    };

    for child in node.children() {
        if child.is_text() {
            let raw = child.text().unwrap_or("");
            if raw.trim().is_empty() {
                continue;
            }
            let mut prev_space = false;
            for ch in raw.chars() {
                let ch = if ch.is_whitespace() { ' ' } else { ch };
                if ch == ' ' && prev_space {
                    continue;
                }
                prev_space = ch == ' ';
                let mut x = None;
                let mut y = None;
                for lists in stack.iter_mut() {
                    if let Some(v) = lists.xs.pop_front() {
                        x = Some(v);
                    }
                    if let Some(v) = lists.ys.pop_front() {
                        y = Some(v);
                    }
                }
                out.push(GlyphSlot {
                    ch,
                    x,
                    y,
                    font_size,
                    anchor,
                });
            }
        } else if child.is_element() && matches!(child.tag_name().name(), "tspan" | "a" | "textPath") {
            collect_glyphs(child, stack, default_font, out);
        }
    }
    stack.pop();
}

fn number_list(text: Option<&str>) -> VecDeque<f64> {
    match text {
        None => VecDeque::new(),
        Some(t) => svgtypes::NumberListParser::from(t)
            .map_while(Result::ok)
            .collect(),
    }
}

fn parse_number(text: &str) -> Option<f64> {
    svgtypes::Length::from_str(text.trim())
        .ok()
        .map(|l| l.number)
        .filter(|v| v.is_finite())
}

fn number_attr(node: Node, name: &str) -> Option<f64> {
    node.attribute(name).and_then(parse_number)
}

fn style_property<'a>(node: Node<'a, 'a>, name: &str) -> Option<&'a str> {
    let style = node.attribute("style")?;
    style.split(';').find_map(|decl| {
        let (k, v) = decl.split_once(':')?;
        (k.trim() == name).then(|| v.trim())
    })
}

fn inherited_property<'a>(node: Node<'a, 'a>, name: &str) -> Option<&'a str> {
    node.ancestors()
        .filter(|n| n.is_element())
        .find_map(|n| style_property(n, name).or_else(|| n.attribute(name)))
}

fn style_text(node: Node) -> String {
    let mut parts: Vec<String> = ["stroke", "stroke-width", "fill", "fill-opacity"]
        .iter()
        .filter_map(|k| node.attribute(*k).map(|v| format!("{k}:{v}")))
        .collect();
    if let Some(style) = node.attribute("style") {
        parts.push(style.to_string());
    }
    parts.join(";")
}

fn singular_values(t: &AffineTransform) -> (f64, f64) {
    let sum = t.a * t.a + t.b * t.b + t.c * t.c + t.d * t.d;
    let det = t.determinant();
    let disc = (sum * sum - 4.0 * det * det).max(0.0).sqrt();
    (((sum + disc) / 2.0).sqrt(), ((sum - disc) / 2.0).max(0.0).sqrt())
}

fn declared_canvas(root: Node) -> Option<Rect> {
    if let Some(vb) = root.attribute("viewBox").and_then(|v| svgtypes::ViewBox::from_str(v).ok()) {
        if vb.w > 0.0 && vb.h > 0.0 {
            return Some(Rect::new(vb.x, vb.y, vb.x + vb.w, vb.y + vb.h));
        }
    }
    let w = root
        .attribute("width")
        .and_then(|v| svgtypes::Length::from_str(v).ok())
        .filter(|l| l.unit != svgtypes::LengthUnit::Percent)?;
    let h = root
        .attribute("height")
        .and_then(|v| svgtypes::Length::from_str(v).ok())
        .filter(|l| l.unit != svgtypes::LengthUnit::Percent)?;
    (w.number > 0.0 && h.number > 0.0).then(|| Rect::new(0.0, 0.0, w.number, h.number))
}

fn content_bounds(doc: &FigureDocument) -> Option<Rect> {
    let points = doc
        .circles
        .iter()
        .flat_map(|c| {
            [
                Point::new(c.center.x - c.radius, c.center.y - c.radius),
                Point::new(c.center.x + c.radius, c.center.y + c.radius),
            ]
        })
        .chain(doc.segments.iter().flat_map(|s| [s.p1, s.p2]))
        .chain(
            doc.rasters
                .iter()
                .flat_map(|r| [Point::new(r.bounds.min_x, r.bounds.min_y), Point::new(r.bounds.max_x, r.bounds.max_y)]),
        )
        .chain(doc.texts.iter().map(|t| t.anchor));
    Rect::from_points(points)
}

fn discard_far_geometry(doc: &mut FigureDocument, factor: f64) {
    if !doc.canvas.has_area() {
        return;
    }
    let allowed = doc.canvas.scaled_about_center(factor);
    let mut dropped = Vec::new();

    doc.circles.retain(|c| {
        let keep = allowed.contains_rect(&Rect::new(
            c.center.x - c.radius,
            c.center.y - c.radius,
            c.center.x + c.radius,
            c.center.y + c.radius,
        ));
        if !keep {
            dropped.push(c.id.clone());
        }
        keep
    });
    doc.segments.retain(|s| {
        let keep = allowed.contains_rect(&s.bounds());
        if !keep {
            dropped.push(s.id.clone());
        }
        keep
    });
    doc.rasters.retain(|r| {
        let keep = allowed.contains_rect(&r.bounds);
        if !keep {
            dropped.push(r.id.clone());
        }
        keep
    });
    doc.texts.retain(|t| {
        let keep = allowed.contains(t.anchor);
        if !keep {
            dropped.push(t.id.clone());
        }
        keep
    });
    for id in dropped {
        doc.warnings
            .push(format!("{id} lies far outside the canvas; discarded"));
    }
}

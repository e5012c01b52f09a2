//! Re-assembly of per-glyph text elements into words.
//!
//! PDF-to-SVG converters usually place every glyph separately. Runs that
//! share a baseline and sit close together horizontally are chained back
//! into one run.

use std::cmp::Ordering;

use super::{Point, TextRun};

/// Assumed horizontal advance of one glyph, as a fraction of glyph height.
/// No font metrics are available, so every width estimate uses this.
pub const GLYPH_ADVANCE_EM: f64 = 0.5;

/// Estimated rendered width of `content` at `glyph_height`.
pub fn estimated_width(content: &str, glyph_height: f64) -> f64 {
    content.chars().count() as f64 * GLYPH_ADVANCE_EM * glyph_height
}

/// Chains runs with the default tolerances: baselines within 0.2 glyph
/// heights and horizontal gaps up to 0.6 glyph heights.
pub fn compose_text_runs(runs: &[TextRun]) -> Vec<TextRun> {
    compose_text_runs_with(runs, 0.2, 0.6)
}

struct Chain {
    run: TextRun,
    baseline: f64,
    last_glyph_x: f64,
}

fn last_glyph_x(run: &TextRun) -> f64 {
    let n = run.content.chars().count().max(1);
    run.anchor.x + (n - 1) as f64 * GLYPH_ADVANCE_EM * run.glyph_height
}

pub fn compose_text_runs_with(runs: &[TextRun], baseline_fraction: f64, gap_fraction: f64) -> Vec<TextRun> {
    let mut order: Vec<&TextRun> = runs.iter().filter(|r| !r.content.trim().is_empty()).collect();
    order.sort_by(|a, b| {
        a.anchor
            .x
            .total_cmp(&b.anchor.x)
            .then(a.anchor.y.total_cmp(&b.anchor.y))
            .then_with(|| a.id.cmp(&b.id))
    });

    let mut chains: Vec<Chain> = Vec::new();
    for run in order {
        let mut best: Option<(usize, f64)> = None;
        for (i, chain) in chains.iter().enumerate() {
            let h = chain.run.glyph_height.max(run.glyph_height);
            if (run.anchor.y - chain.baseline).abs() > baseline_fraction * h {
                continue;
            }
            let gap = run.anchor.x - chain.last_glyph_x;
            if gap.abs() > gap_fraction * h {
                continue;
            }
            if best.is_none_or(|(_, g)| gap.abs() < g) {
                best = Some((i, gap.abs()));
            }
        }
        match best {
            Some((i, _)) => {
                let chain = &mut chains[i];
                chain.run.content.push_str(&run.content);
                chain.run.glyph_height = chain.run.glyph_height.max(run.glyph_height);
                chain.last_glyph_x = last_glyph_x(run);
            }
            None => chains.push(Chain {
                baseline: run.anchor.y,
                last_glyph_x: last_glyph_x(run),
                run: run.clone(),
            }),
        }
    }

    let mut out: Vec<TextRun> = chains
        .into_iter()
        .map(|c| {
            let content = c.run.content.trim().to_string();
            TextRun { content, ..c.run }
        })
        .collect();
    out.sort_by(|a, b| compare_anchor(a.anchor, b.anchor));
    out
}

fn compare_anchor(a: Point, b: Point) -> Ordering {
    a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x))
}

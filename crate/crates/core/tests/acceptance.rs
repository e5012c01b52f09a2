//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use figdata_core::axis::{
    calibrate_axis, label_reference, match_ticks_to_labels, AxisError, AxisSide, PlotBox, TickLabel, TickMark,
};
use figdata_core::pipeline::{
    csv_bytes, extract_svg, run_project, run_project_with_jobs, Column, CorpusProject, ExtractionStatus,
    PipelineConfig, DEFAULT_FIGURE_FILTER,
};
use figdata_core::svg::{parse_svg, Point, Rect, SegmentGlyph};
use figdata_core::synth::{
    evaluate, evaluate_figure, generate_scatter_svg, table_csv, write_synthetic_figure, AxisStyle, EvalInput,
    SyntheticSpec, DEFAULT_TOLERANCE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if elapsed > limit {
        out.ok = false;
    }
    out.detail = format!("{}; {:.2}s (limit {}s)", out.detail, elapsed.as_secs_f64(), limit.as_secs());
    out
}

type Criterion = Box<dyn FnOnce() -> Outcome>;

fn inline_snippet() -> Outcome {
    let svg = r#"<svg xmlns="http://www.w3.org/2000/svg"><circle cx="103.71" cy="121.22" r="25.234"/></svg>"#;
    let doc = match parse_svg(svg.as_bytes()) {
        Ok(d) => d,
        Err(e) => return outcome(false, e.to_string()),
    };
    let exact = doc.circles.len() == 1
        && doc.circles[0].center.x.to_bits() == "103.71".parse::<f64>().unwrap().to_bits()
        && doc.circles[0].center.y.to_bits() == "121.22".parse::<f64>().unwrap().to_bits()
        && doc.circles[0].radius.to_bits() == "25.234".parse::<f64>().unwrap().to_bits();
    outcome(exact, format!("{} circle(s): {:?}", doc.circles.len(), doc.circles.first().map(|c| (c.center, c.radius))))
}

/// Status, count match and coordinate check of one generated figure.
fn round_trip(spec: &SyntheticSpec) -> (ExtractionStatus, bool, bool, bool) {
    let (svg, truth) = generate_scatter_svg(spec);
    let out = extract_svg(&svg, &PipelineConfig::default());
    let extracted: Vec<(f64, f64)> = out.points.iter().map(|p| (p.x, p.y)).collect();
    let rec = evaluate_figure(
        "f",
        &extracted,
        &truth,
        DEFAULT_TOLERANCE,
        Some(spec.x_range.1 - spec.x_range.0),
        Some(spec.y_range.1 - spec.y_range.0),
    );
    (
        out.report.status,
        extracted.len() == truth.len(),
        rec.x_axis_correct && rec.y_axis_correct,
        out.report.x_reversed,
    )
}

fn synthetic_round_trip() -> Outcome {
    let mut good = 0;
    let mut failures = Vec::new();
    for seed in 1..=200u64 {
        let spec = SyntheticSpec::random(seed);
        let (status, count_ok, coords_ok, _) = round_trip(&spec);
        if status == ExtractionStatus::Ok && count_ok && coords_ok {
            good += 1;
        } else {
            failures.push(format!("seed {seed}: {status}"));
        }
    }
    let detail = format!("{good}/200 exact; failures: {:?}", failures);
    outcome(good as f64 >= 0.99 * 200.0, detail)
}

fn failure_modes() -> Outcome {
    let mut problems = Vec::new();
    for seed in 1..=20u64 {
        let spec = SyntheticSpec::random_with_style(seed, AxisStyle::LogX);
        let out = extract_svg(&generate_scatter_svg(&spec).0, &PipelineConfig::default());
        if out.report.status != ExtractionStatus::NonlinearScale || !out.points.is_empty() {
            problems.push(format!("log_x seed {seed}: {}", out.report.status));
        }
        let spec = SyntheticSpec::random_with_style(seed, AxisStyle::RasterBody);
        let out = extract_svg(&generate_scatter_svg(&spec).0, &PipelineConfig::default());
        if out.report.status != ExtractionStatus::RasterBody {
            problems.push(format!("raster_body seed {seed}: {}", out.report.status));
        }
        let spec = SyntheticSpec::random_with_style(seed, AxisStyle::ReversedX);
        let (status, count_ok, coords_ok, reversed) = round_trip(&spec);
        if status != ExtractionStatus::Ok || !count_ok || !coords_ok || !reversed {
            problems.push(format!("reversed_x seed {seed}: {status} reversed={reversed}"));
        }
    }
    outcome(problems.is_empty(), format!("60 figures; problems: {problems:?}"))
}

/// Least squares through the 2×2 normal equations, solved by Cramer's rule.
fn normal_equations(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    (slope, intercept, (sse / n).sqrt())
}

fn pairs(positions: &[f64], values: &[f64], side: AxisSide) -> Vec<(TickMark, TickLabel)> {
    positions
        .iter()
        .zip(values)
        .map(|(&p, &v)| {
            (
                TickMark {
                    position: p,
                    side,
                    length: 4.0,
                },
                TickLabel {
                    value: v,
                    anchor: Point::new(0.0, 0.0),
                    raw: v.to_string(),
                    glyph_height: 8.0,
                },
            )
        })
        .collect()
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.max(f64::MIN_POSITIVE)
}

fn calibration_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = Vec::new();
    let (mut accepted, mut rejected) = (0, 0);
    for case in 0..1000 {
        let n = rng.gen_range(2..=10);
        let mut positions: Vec<f64> = (0..n).map(|_| rng.gen_range(20.0..780.0)).collect();
        positions.sort_by(f64::total_cmp);
        positions.dedup_by(|a, b| (*a - *b).abs() < 1.0);
        let slope = rng.gen_range(0.01..10.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let intercept = rng.gen_range(-500.0..500.0);
        let noise = if rng.gen_bool(0.3) { rng.gen_range(0.0..0.05) } else { 0.0 };
        let values: Vec<f64> = positions
            .iter()
            .map(|p| intercept + slope * p + noise * slope * 800.0 * rng.gen_range(-1.0..1.0))
            .collect();
        let side = if case % 2 == 0 { AxisSide::XAxis } else { AxisSide::YAxis };
        let (os, oi, orms) = normal_equations(&positions, &values);
        let span = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - values.iter().cloned().fold(f64::INFINITY, f64::min);
        match calibrate_axis(&pairs(&positions, &values, side), side) {
            Ok(cal) => {
                accepted += 1;
                let scale = span.max(oi.abs());
                if !(close(cal.slope, os, os.abs()) && close(cal.intercept, oi, scale) && orms <= 0.01 * span) {
                    mismatches.push(format!("case {case}: {:?} vs ({os}, {oi})", (cal.slope, cal.intercept)));
                }
            }
            Err(AxisError::NonlinearScale { rms, span: s, .. }) => {
                rejected += 1;
                if !(close(rms, orms, span) && orms > 0.01 * s) {
                    mismatches.push(format!("case {case}: rejected rms {rms} vs oracle {orms}"));
                }
            }
            Err(e) => mismatches.push(format!("case {case}: {e}")),
        }
    }
    let (_, _, log_rms) = normal_equations(&[0.0, 100.0, 200.0], &[1.0, 10.0, 100.0]);
    let log_ok = matches!(
        calibrate_axis(&pairs(&[0.0, 100.0, 200.0], &[1.0, 10.0, 100.0], AxisSide::XAxis), AxisSide::XAxis),
        Err(AxisError::NonlinearScale { rms, .. }) if close(rms, log_rms, 99.0)
    );
    outcome(
        mismatches.is_empty() && log_ok,
        format!(
            "{accepted} accepted, {rejected} rejected, {} mismatches {:?}; log fixture rms {log_rms:.4} rejected={log_ok}",
            mismatches.len(),
            mismatches.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn plot_box() -> PlotBox {
    PlotBox {
        left_axis: SegmentGlyph::new("v", Point::new(50.0, 400.0), Point::new(50.0, 50.0)),
        bottom_axis: SegmentGlyph::new("h", Point::new(50.0, 400.0), Point::new(500.0, 400.0)),
        interior: Rect::new(50.0, 50.0, 500.0, 400.0),
        score: 1.0,
    }
}

/// Label whose estimated centre sits at `along`, `gap` units outside the axis.
fn label_at(side: AxisSide, along: f64, gap: f64, value: f64) -> TickLabel {
    let h = 8.0;
    let anchor = match side {
        AxisSide::XAxis => Point::new(along - 2.0, 400.0 + gap + 0.7 * h),
        AxisSide::YAxis => Point::new(50.0 - gap - 4.0, along + 0.35 * h),
    };
    TickLabel {
        value,
        anchor,
        raw: "1".to_string(),
        glyph_height: h,
    }
}

/// Best injective tick-label assignment by exhaustive search: most pairs,
/// then least total distance, then smallest sum of label coordinates.
fn brute_force(ticks: &[f64], labels: &[Option<f64>], gate: f64) -> Vec<(usize, usize)> {
    type Key = (usize, f64, f64);

    struct Search<'a> {
        ticks: &'a [f64],
        labels: &'a [Option<f64>],
        gate: f64,
        used: Vec<bool>,
        current: Vec<(usize, usize)>,
        best: (Key, Vec<(usize, usize)>),
    }

    fn better(a: Key, b: Key) -> bool {
        a.0 > b.0 || (a.0 == b.0 && (a.1 < b.1 || (a.1 == b.1 && a.2 < b.2)))
    }

    impl Search<'_> {
        fn go(&mut self, i: usize, key: Key) {
            if i == self.ticks.len() {
                if better(key, self.best.0) {
                    self.best = (key, self.current.clone());
                }
                return;
            }
            self.go(i + 1, key);
            for j in 0..self.labels.len() {
                let Some(along) = self.labels[j] else { continue };
                let d = (along - self.ticks[i]).abs();
                if self.used[j] || d > self.gate {
                    continue;
                }
                self.used[j] = true;
                self.current.push((i, j));
                self.go(i + 1, (key.0 + 1, key.1 + d, key.2 + along));
                self.current.pop();
                self.used[j] = false;
            }
        }
    }

    let mut search = Search {
        ticks,
        labels,
        gate,
        used: vec![false; labels.len()],
        current: Vec::new(),
        best: ((0, f64::INFINITY, f64::INFINITY), Vec::new()),
    };
    search.go(0, (0, 0.0, 0.0));
    let mut pairs = search.best.1;
    pairs.sort();
    pairs
}

fn matching_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pb = plot_box();
    let mut mismatches = Vec::new();
    let mut total_pairs = 0;
    for case in 0..500 {
        let side = if case % 2 == 0 { AxisSide::XAxis } else { AxisSide::YAxis };
        let n_ticks = rng.gen_range(2..=6);
        let spacing = [20.0, 30.0, 40.0, 50.0][rng.gen_range(0..4)];
        let start = 60.0 + 2.0 * rng.gen_range(0..20) as f64;
        let positions: Vec<f64> = (0..n_ticks).map(|k| start + k as f64 * spacing).collect();
        let ticks: Vec<TickMark> = positions
            .iter()
            .map(|&p| TickMark {
                position: p,
                side,
                length: 4.0,
            })
            .collect();
        let n_labels = rng.gen_range(0..=8);
        let labels: Vec<TickLabel> = (0..n_labels)
            .map(|j| {
                let along = if rng.gen_bool(0.75) {
                    let t = positions[rng.gen_range(0..n_ticks)];
                    t + spacing / 20.0 * rng.gen_range(-7..=7) as f64
                } else {
                    40.0 + 0.25 * rng.gen_range(0..1200) as f64
                };
                let gap = if rng.gen_bool(0.85) { 6.0 } else { 60.0 };
                label_at(side, along, gap, j as f64)
            })
            .collect();

        let eligible: Vec<Option<f64>> = labels
            .iter()
            .map(|l| {
                let (along, perp) = label_reference(l, side, &pb)?;
                (perp <= 3.0 * 4.0 + 2.0 * l.glyph_height).then_some(along)
            })
            .collect();
        let expected = brute_force(&positions, &eligible, 0.5 * spacing);

        let got: Vec<(usize, usize)> = match match_ticks_to_labels(&ticks, &labels, &pb, side) {
            Ok(p) => {
                let mut v: Vec<(usize, usize)> = p
                    .iter()
                    .map(|(t, l)| {
                        let i = positions.iter().position(|&x| x == t.position).unwrap();
                        (i, l.value as usize)
                    })
                    .collect();
                v.sort();
                v
            }
            Err(AxisError::InsufficientMatches { .. }) if expected.len() < 2 => expected.clone(),
            Err(e) => {
                mismatches.push(format!("case {case}: {e}"));
                continue;
            }
        };
        total_pairs += expected.len();
        if got != expected {
            mismatches.push(format!("case {case}: greedy {got:?} vs brute force {expected:?}"));
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("500 instances, {total_pairs} optimal pairs, {} mismatches {:?}", mismatches.len(), mismatches.first()),
    )
}

fn evaluator_shape() -> Outcome {
    let truth22: Vec<(f64, f64)> = (0..22).map(|i| (i as f64 * 0.1, (i % 7) as f64)).collect();
    let mut overlap24 = truth22.clone();
    overlap24.push(truth22[5]);
    overlap24.push(truth22[11]);
    let truth23: Vec<(f64, f64)> = (0..23).map(|i| (i as f64, (i * i % 11) as f64 + 1.0)).collect();
    let negated: Vec<(f64, f64)> = truth23.iter().map(|&(x, y)| (x, -y)).collect();
    let csv_rows = |pts: &[(f64, f64)]| {
        let points: Vec<_> = pts
            .iter()
            .map(|&(x, y)| figdata_core::points::DataPoint {
                x,
                y,
                device_radius: 2.0,
                source_id: String::new(),
            })
            .collect();
        String::from_utf8(csv_bytes(&points, &[Column::X, Column::Y])).unwrap().lines().count() - 1
    };
    let inputs = vec![
        EvalInput {
            figure_id: "s13027-016-0058-9".into(),
            extracted: overlap24.clone(),
            truth: Some(truth22),
            ..Default::default()
        },
        EvalInput {
            figure_id: "med-2016-0052".into(),
            extracted: truth23.clone(),
            truth: Some(truth23.clone()),
            ..Default::default()
        },
        EvalInput {
            figure_id: "negated-y".into(),
            extracted: negated,
            truth: Some(truth23),
            ..Default::default()
        },
        EvalInput {
            figure_id: "empty".into(),
            extracted: vec![],
            truth: Some(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0), (4.0, 4.0)]),
            ..Default::default()
        },
    ];
    let eval = match evaluate(&inputs, DEFAULT_TOLERANCE) {
        Ok(e) => e,
        Err(e) => return outcome(false, e.to_string()),
    };
    let table = table_csv(&eval.records);
    let expected = "figure_id,data_extracted,n_extracted,n_truth,x_axis_correct,y_axis_correct\n\
s13027-016-0058-9,yes,24,22,yes,yes\n\
med-2016-0052,yes,23,23,yes,yes\n\
negated-y,yes,23,23,yes,no\n\
empty,no,0,5,no,no\n";
    let rows_ok = csv_rows(&overlap24) == eval.records[0].n_extracted;
    let agg = eval.aggregate;
    let agg_ok = agg.total == 4 && agg.both_correct == 2 && agg.both_correct_fraction == 0.5 && agg.extracted == 3;
    outcome(
        table == expected && rows_ok && agg_ok,
        format!("table matches={}, row count matches CSV={rows_ok}, aggregate={agg_ok}", table == expected),
    )
}

fn collect_outputs(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn determinism_and_isolation() -> Outcome {
    let tmp = tempfile::TempDir::new().unwrap();
    let input = tmp.path().join("project");
    let styles = [
        AxisStyle::Standard,
        AxisStyle::Standard,
        AxisStyle::RasterBody,
        AxisStyle::ReversedX,
        AxisStyle::LogX,
        AxisStyle::Standard,
    ];
    for (i, style) in styles.iter().enumerate() {
        let tree = if i < 3 { "tree-a" } else { "tree-b" };
        write_synthetic_figure(&input, tree, i as u32 + 1, &SyntheticSpec::random_with_style(100 + i as u64, *style))
            .unwrap();
    }
    let broken = input.join("tree-b/figures/figure9/figure.svg");
    fs::create_dir_all(broken.parent().unwrap()).unwrap();
    fs::write(&broken, "<svg xmlns=\"http://www.w3.org/2000/svg\"><circle").unwrap();

    let cfg = PipelineConfig::default();
    let project = CorpusProject::scan(&input).unwrap();
    let run = |name: &str, jobs: usize| {
        let out = tmp.path().join(name);
        run_project_with_jobs(&project, DEFAULT_FIGURE_FILTER, &cfg, &out, jobs).unwrap();
        collect_outputs(&out)
    };
    let first = run("run1", 1);
    let second = run("run2", 1);
    let parallel = run("run3", 4);
    let deterministic = first == second && first == parallel;

    fs::remove_dir_all(broken.parent().unwrap()).unwrap();
    let without = tmp.path().join("run4");
    let reduced = CorpusProject::scan(&input).unwrap();
    let reports = run_project(&reduced, DEFAULT_FIGURE_FILTER, &cfg, &without).unwrap();
    let isolated_outputs = collect_outputs(&without);
    let isolated = isolated_outputs
        .iter()
        .filter(|(p, _)| !p.ends_with("summary.json"))
        .all(|(p, bytes)| first.get(p) == Some(bytes));
    let failing_only_missing = first
        .keys()
        .filter(|p| !isolated_outputs.contains_key(*p))
        .all(|p| p.starts_with("tree-b/figures/figure9") || p.ends_with("summary.json"));
    outcome(
        deterministic && isolated && failing_only_missing && reports.len() == 6,
        format!(
            "{} output files; identical across runs and job counts={deterministic}; isolation={}",
            first.len(),
            isolated && failing_only_missing
        ),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("inline-snippet fidelity", Box::new(|| timed(Duration::from_secs(1), inline_snippet))),
        ("synthetic round-trip", Box::new(|| timed(Duration::from_secs(30), synthetic_round_trip))),
        ("failure-mode discrimination", Box::new(|| timed(Duration::from_secs(10), failure_modes))),
        ("calibration oracle equivalence", Box::new(calibration_oracle)),
        ("matching oracle equivalence", Box::new(matching_oracle)),
        ("evaluator shape", Box::new(evaluator_shape)),
        ("determinism & batch isolation", Box::new(determinism_and_isolation)),
    ];
    let mut all_ok = true;
    for (name, check) in criteria {
        let out = check();
        all_ok &= out.ok;
        println!("{} {name}: {}", if out.ok { "PASS" } else { "FAIL" }, out.detail);
    }
    println!("SKIP real-corpus row counts: optional, needs the published corpus-clipped folder");
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

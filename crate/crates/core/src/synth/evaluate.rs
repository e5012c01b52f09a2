use serde::{Deserialize, Serialize};

use super::SynthError;

/// Default per-axis tolerance: 0.5% of the axis span.
pub const DEFAULT_TOLERANCE: f64 = 0.005;

/// One row of the evaluation table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub figure_id: String,
    /// Whether any data row was produced.
    pub data_extracted: bool,
    /// Number of rows in the data file.
    pub n_extracted: usize,
    pub n_truth: usize,
    pub x_axis_correct: bool,
    pub y_axis_correct: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub total: usize,
    pub extracted: usize,
    pub x_correct: usize,
    pub y_correct: usize,
    pub both_correct: usize,
    pub extracted_fraction: f64,
    pub x_correct_fraction: f64,
    pub y_correct_fraction: f64,
    pub both_correct_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub records: Vec<EvalRecord>,
    pub aggregate: Aggregate,
}

/// Extraction output and truth for one figure. Spans default to the extent
/// of the truth values on each axis.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalInput {
    pub figure_id: String,
    pub extracted: Vec<(f64, f64)>,
    pub truth: Option<Vec<(f64, f64)>>,
    pub x_span: Option<f64>,
    pub y_span: Option<f64>,
}

fn extent(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    if span.is_finite() && span > 0.0 {
        span
    } else {
        1.0
    }
}

/// One-to-one matching of truth values to extracted values along a single
/// axis, greedy by normalized distance with ties broken by index. Pairs
/// further apart than `tolerance` (in normalized units) are never formed.
/// Returns, per truth value, the index of its partner.
pub fn match_axis(truth: &[f64], extracted: &[f64], span: f64, tolerance: f64) -> Vec<Option<usize>> {
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, t) in truth.iter().enumerate() {
        for (j, e) in extracted.iter().enumerate() {
            let d = (t - e).abs() / span;
            if d <= tolerance {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut partner = vec![None; truth.len()];
    let mut used = vec![false; extracted.len()];
    for (_, i, j) in candidates {
        if partner[i].is_none() && !used[j] {
            partner[i] = Some(j);
            used[j] = true;
        }
    }
    partner
}

fn axis_correct(truth: &[f64], extracted: &[f64], span: f64, tolerance: f64) -> bool {
    !extracted.is_empty() && match_axis(truth, extracted, span, tolerance).iter().all(Option::is_some)
}

/// Scores one figure. An axis is correct when every truth value on it can
/// be paired with a distinct extracted value within `tolerance × span`.
/// Surplus extracted rows do not count against correctness.
pub fn evaluate_figure(
    figure_id: &str,
    extracted: &[(f64, f64)],
    truth: &[(f64, f64)],
    tolerance: f64,
    x_span: Option<f64>,
    y_span: Option<f64>,
) -> EvalRecord {
    let x_span = x_span.unwrap_or_else(|| extent(truth.iter().map(|p| p.0)));
    let y_span = y_span.unwrap_or_else(|| extent(truth.iter().map(|p| p.1)));
    let tx: Vec<f64> = truth.iter().map(|p| p.0).collect();
    let ty: Vec<f64> = truth.iter().map(|p| p.1).collect();
    let ex: Vec<f64> = extracted.iter().map(|p| p.0).collect();
    let ey: Vec<f64> = extracted.iter().map(|p| p.1).collect();
    EvalRecord {
        figure_id: figure_id.to_string(),
        data_extracted: !extracted.is_empty(),
        n_extracted: extracted.len(),
        n_truth: truth.len(),
        x_axis_correct: axis_correct(&tx, &ex, x_span, tolerance),
        y_axis_correct: axis_correct(&ty, &ey, y_span, tolerance),
    }
}

fn fraction(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    }
}

pub fn aggregate(records: &[EvalRecord]) -> Aggregate {
    let total = records.len();
    let count = |f: &dyn Fn(&EvalRecord) -> bool| records.iter().filter(|r| f(r)).count();
    let extracted = count(&|r| r.data_extracted);
    let x_correct = count(&|r| r.x_axis_correct);
    let y_correct = count(&|r| r.y_axis_correct);
    let both_correct = count(&|r| r.x_axis_correct && r.y_axis_correct);
    Aggregate {
        total,
        extracted,
        x_correct,
        y_correct,
        both_correct,
        extracted_fraction: fraction(extracted, total),
        x_correct_fraction: fraction(x_correct, total),
        y_correct_fraction: fraction(y_correct, total),
        both_correct_fraction: fraction(both_correct, total),
    }
}

pub fn evaluate(inputs: &[EvalInput], tolerance: f64) -> Result<Evaluation, SynthError> {
    let records = inputs
        .iter()
        .map(|input| {
            let truth = input.truth.as_ref().ok_or_else(|| SynthError::MissingTruth {
                figure_id: input.figure_id.clone(),
            })?;
            Ok(evaluate_figure(
                &input.figure_id,
                &input.extracted,
                truth,
                tolerance,
                input.x_span,
                input.y_span,
            ))
        })
        .collect::<Result<Vec<_>, SynthError>>()?;
    let aggregate = aggregate(&records);
    Ok(Evaluation { records, aggregate })
}

/// The evaluation table as CSV, flags written as `yes`/`no`.
pub fn table_csv(records: &[EvalRecord]) -> String {
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut out = String::from("figure_id,data_extracted,n_extracted,n_truth,x_axis_correct,y_axis_correct\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.figure_id,
            yes_no(r.data_extracted),
            r.n_extracted,
            r.n_truth,
            yes_no(r.x_axis_correct),
            yes_no(r.y_axis_correct)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize) -> Vec<(f64, f64)> {
        (0..n).map(|i| (i as f64, 10.0 + (i * 7 % 5) as f64)).collect()
    }

    #[test]
    fn perfect_extraction() {
        let truth = grid(23);
        let r = evaluate_figure("med-2016-0052", &truth, &truth, DEFAULT_TOLERANCE, None, None);
        assert!(r.data_extracted && r.x_axis_correct && r.y_axis_correct);
        assert_eq!((r.n_extracted, r.n_truth), (23, 23));
    }

    #[test]
    fn negated_y_breaks_only_y() {
        let truth = grid(8);
        let flipped: Vec<_> = truth.iter().map(|&(x, y)| (x, -y)).collect();
        let r = evaluate_figure("f", &flipped, &truth, DEFAULT_TOLERANCE, None, None);
        assert!(r.x_axis_correct);
        assert!(!r.y_axis_correct);
    }

    #[test]
    fn empty_extraction() {
        let r = evaluate_figure("f", &[], &grid(5), DEFAULT_TOLERANCE, None, None);
        assert!(!r.data_extracted && !r.x_axis_correct && !r.y_axis_correct);
        assert_eq!(r.n_extracted, 0);
    }

    #[test]
    fn surplus_overlap_rows_still_correct() {
        let truth = grid(22);
        let mut extracted = truth.clone();
        extracted.push(truth[3]);
        extracted.push(truth[9]);
        let r = evaluate_figure("s13027-016-0058-9", &extracted, &truth, DEFAULT_TOLERANCE, None, None);
        assert_eq!((r.n_extracted, r.n_truth), (24, 22));
        assert!(r.x_axis_correct && r.y_axis_correct);
    }

    #[test]
    fn missing_truth() {
        let input = EvalInput {
            figure_id: "f".into(),
            ..Default::default()
        };
        assert!(matches!(evaluate(&[input], 0.005), Err(SynthError::MissingTruth { .. })));
    }

    #[test]
    fn table_header_and_flags() {
        let r = evaluate_figure("t/figure1", &[(0.0, 0.0)], &[(0.0, 0.0)], 0.005, None, None);
        assert_eq!(
            table_csv(&[r]),
            "figure_id,data_extracted,n_extracted,n_truth,x_axis_correct,y_axis_correct\nt/figure1,yes,1,1,yes,yes\n"
        );
    }

    #[test]
    fn aggregate_arithmetic_exhaustive() {
        // Every list of up to 4 records drawn from the 5 reachable flag combinations.
        let kinds = [(false, false, false), (true, false, false), (true, true, false), (true, false, true), (true, true, true)];
        for len in 1..=4usize {
            for code in 0..kinds.len().pow(len as u32) {
                let mut c = code;
                let records: Vec<EvalRecord> = (0..len)
                    .map(|i| {
                        let (d, x, y) = kinds[c % kinds.len()];
                        c /= kinds.len();
                        EvalRecord {
                            figure_id: i.to_string(),
                            data_extracted: d,
                            n_extracted: usize::from(d),
                            n_truth: 1,
                            x_axis_correct: x,
                            y_axis_correct: y,
                        }
                    })
                    .collect();
                let a = aggregate(&records);
                let both = records.iter().filter(|r| r.x_axis_correct && r.y_axis_correct).count();
                assert_eq!(a.total, len);
                assert_eq!(a.both_correct, both);
                assert_eq!(a.both_correct_fraction, both as f64 / len as f64);
                assert_eq!(a.extracted_fraction, a.extracted as f64 / len as f64);
                assert_eq!(a.x_correct_fraction, a.x_correct as f64 / len as f64);
                assert_eq!(a.y_correct_fraction, a.y_correct as f64 / len as f64);
            }
        }
        assert_eq!(aggregate(&[]).both_correct_fraction, 0.0);
    }

    proptest! {
        #[test]
        fn correctness_implies_extracted(
            truth in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..12),
            extracted in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 0..12),
        ) {
            let r = evaluate_figure("p", &extracted, &truth, 0.05, None, None);
            prop_assert!(!r.x_axis_correct || r.data_extracted);
            prop_assert!(!r.y_axis_correct || r.data_extracted);
        }

        #[test]
        fn permutation_invariant(truth in prop::collection::vec((0.0f64..100.0, 0.0f64..100.0), 1..10), rot in 0usize..10) {
            let mut extracted = truth.clone();
            let k = rot % extracted.len();
            extracted.rotate_left(k);
            let r = evaluate_figure("p", &extracted, &truth, DEFAULT_TOLERANCE, None, None);
            prop_assert!(r.x_axis_correct && r.y_axis_correct);
        }
    }
}

use super::{AxisCalibration, AxisConfig, AxisError, AxisSide, TickLabel, TickMark};

pub fn calibrate_axis(pairs: &[(TickMark, TickLabel)], side: AxisSide) -> Result<AxisCalibration, AxisError> {
    calibrate_axis_with(pairs, side, AxisConfig::default().residual_fraction)
}

/// Least-squares fit of `value = intercept + slope × position`.
///
/// The fit is rejected when the RMS residual exceeds `residual_fraction`
/// of the matched value span, which is how logarithmic axes surface.
pub fn calibrate_axis_with(
    pairs: &[(TickMark, TickLabel)],
    side: AxisSide,
    residual_fraction: f64,
) -> Result<AxisCalibration, AxisError> {
    if pairs.len() < 2 {
        return Err(AxisError::TooFewTicks { side });
    }
    let n = pairs.len() as f64;
    let mean_p = pairs.iter().map(|(t, _)| t.position).sum::<f64>() / n;
    let mean_v = pairs.iter().map(|(_, l)| l.value).sum::<f64>() / n;

    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (t, l) in pairs {
        let dp = t.position - mean_p;
        sxx += dp * dp;
        sxy += dp * (l.value - mean_v);
    }
    if sxx == 0.0 {
        return Err(AxisError::CollocatedTicks { side });
    }
    let slope = sxy / sxx;
    let intercept = mean_v - slope * mean_p;
    if slope == 0.0 || !slope.is_finite() {
        return Err(AxisError::ConstantLabels { side });
    }

    let sse: f64 = pairs
        .iter()
        .map(|(t, l)| {
            let r = l.value - (intercept + slope * t.position);
            r * r
        })
        .sum();
    let rms = (sse / n).sqrt();
    let (lo, hi) = pairs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, l)| (lo.min(l.value), hi.max(l.value)));
    let span = hi - lo;
    if rms > residual_fraction * span {
        return Err(AxisError::NonlinearScale { side, rms, span });
    }

    let reversed = match side {
        AxisSide::XAxis => slope < 0.0,
        // Device y grows downward, so a conventional y axis has slope < 0.
        AxisSide::YAxis => slope > 0.0,
    };
    Ok(AxisCalibration {
        side,
        slope,
        intercept,
        rms_residual: rms,
        n_ticks: pairs.len(),
        reversed,
    })
}

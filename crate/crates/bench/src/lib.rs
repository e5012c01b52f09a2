//! Fixtures for the extraction benchmarks.

use figdata_core::synth::{generate_scatter_svg, SyntheticSpec};

/// A standard synthetic figure with `n_points` markers.
pub fn figure(n_points: usize) -> Vec<u8> {
    let spec = SyntheticSpec {
        n_points,
        x_range: (-2.0, 2.0),
        y_range: (0.0, 0.8),
        canvas: (640.0, 480.0),
        seed: 42,
        ..SyntheticSpec::default()
    };
    generate_scatter_svg(&spec).0
}

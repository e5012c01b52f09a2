//! Recover plotted data from vector scatter figures.
//!
//! The extraction chain is:
//!
//! 1. [`svg`] – flatten an SVG figure into device-space circles, segments,
//!    rasters and text runs.
//! 2. [`axis`] – find the left/bottom plot box, its tick marks and numeric
//!    tick labels, and fit a linear device-to-data calibration per axis.
//! 3. [`points`] – pick the dominant marker population inside the plot box
//!    and map marker centres into data coordinates.
//! 4. [`pipeline`] – corpus directory handling, batch extraction, CSV,
//!    annotated SVG and JSON reports.
//! 5. [`synth`] – synthetic figures with known truth and the evaluator that
//!    scores extractions against it.

pub mod svg;
pub mod axis;
pub mod points;
pub mod pipeline;
pub mod synth;

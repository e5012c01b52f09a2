//! Marker selection and device-to-data remapping.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axis::{median, AxisCalibration, PlotBox};
use crate::svg::{CircleGlyph, FigureDocument};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointConfig {
    /// Relative radius tolerance for markers of "the same size".
    pub radius_tolerance: f64,
    /// Fraction of the plot interior a raster must cover to count as a
    /// bitmap plot body.
    pub raster_overlap_fraction: f64,
}

impl Default for PointConfig {
    fn default() -> Self {
        Self {
            radius_tolerance: 0.1,
            raster_overlap_fraction: 0.5,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PointError {
    #[error("no circle lies inside the plot box")]
    NoDataGlyphs,
}

/// One recovered datum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub x: f64,
    pub y: f64,
    pub device_radius: f64,
    pub source_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusCluster {
    pub representative_radius: f64,
    pub members: Vec<CircleGlyph>,
}

pub fn select_data_glyphs(doc: &FigureDocument, plot_box: &PlotBox) -> Result<RadiusCluster, PointError> {
    select_data_glyphs_with(doc, plot_box, PointConfig::default().radius_tolerance)
}

/// Returns the largest same-size population of circles inside the plot.
///
/// The interior is grown by the median circle radius so markers sitting on
/// an axis line are kept. Every radius present is tried as the cluster
/// representative; the one gathering the most circles within
/// `radius_tolerance` wins, the smaller radius on ties. Coincident circles
/// are all kept.
pub fn select_data_glyphs_with(
    doc: &FigureDocument,
    plot_box: &PlotBox,
    radius_tolerance: f64,
) -> Result<RadiusCluster, PointError> {
    let mut radii: Vec<f64> = doc.circles.iter().map(|c| c.radius).collect();
    let margin = median(&mut radii).ok_or(PointError::NoDataGlyphs)?;
    let region = plot_box.interior.expand(margin);
    let inside: Vec<&CircleGlyph> = doc.circles.iter().filter(|c| region.contains(c.center)).collect();
    if inside.is_empty() {
        return Err(PointError::NoDataGlyphs);
    }

    let mut sorted: Vec<f64> = inside.iter().map(|c| c.radius).collect();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut all: Vec<f64> = inside.iter().map(|c| c.radius).collect();
    all.sort_by(f64::total_cmp);

    let mut best = (0usize, f64::INFINITY);
    for &rep in &sorted {
        let lo = all.partition_point(|&r| r < rep && (rep - r) > radius_tolerance * rep);
        let hi = all.partition_point(|&r| r <= rep || (r - rep) <= radius_tolerance * rep);
        let count = hi - lo;
        if count > best.0 {
            best = (count, rep);
        }
    }

    let rep = best.1;
    let members = inside
        .into_iter()
        .filter(|c| (c.radius - rep).abs() <= radius_tolerance * rep)
        .cloned()
        .collect();
    Ok(RadiusCluster {
        representative_radius: rep,
        members,
    })
}

/// Maps every member to data space, ordered by device x, device y, then id.
pub fn map_to_data(cluster: &RadiusCluster, xcal: &AxisCalibration, ycal: &AxisCalibration) -> Vec<DataPoint> {
    let mut members: Vec<&CircleGlyph> = cluster.members.iter().collect();
    members.sort_by(|a, b| {
        a.center
            .x
            .total_cmp(&b.center.x)
            .then(a.center.y.total_cmp(&b.center.y))
            .then_with(|| a.id.cmp(&b.id))
    });
    members
        .into_iter()
        .map(|c| DataPoint {
            x: xcal.to_data(c.center.x),
            y: ycal.to_data(c.center.y),
            device_radius: c.radius,
            source_id: c.id.clone(),
        })
        .collect()
}

pub fn detect_raster_body(doc: &FigureDocument, plot_box: &PlotBox) -> bool {
    detect_raster_body_with(doc, plot_box, PointConfig::default().raster_overlap_fraction)
}

/// True when one raster image covers at least `fraction` of the plot
/// interior; such figures carry no recoverable vector markers.
pub fn detect_raster_body_with(doc: &FigureDocument, plot_box: &PlotBox, fraction: f64) -> bool {
    let area = plot_box.interior.area();
    area > 0.0
        && doc
            .rasters
            .iter()
            .any(|r| r.bounds.intersection_area(&plot_box.interior) >= fraction * area)
}

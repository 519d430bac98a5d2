//! Batch conversion and grid sweeps.
//!
//! With the default `parallel` feature these fan out over rayon; without
//! it they degrade to the sequential loops. The `_seq` variants are always
//! sequential, so the two paths can be compared directly (the bench suite
//! does exactly that).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::ancf::AncfElement48;
use crate::bspline::BsplineSurface;
use crate::conversion::{bspline_segment_to_ancf, segment_dims, TransformMatrix};
use crate::error::Result;
use crate::Vec3;

/// Element dimensions to use for each converted segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentDims {
    /// Per-segment knot-span widths. Adjacent elements built this way
    /// share identical edge nodal vectors on common edges.
    KnotSpan,
    /// One fixed `(a, b)` for every segment.
    Fixed(f64, f64),
}

/// One converted segment of a surface.
#[derive(Debug, Clone)]
pub struct SegmentElement {
    pub seg_u: usize,
    pub seg_v: usize,
    pub element: AncfElement48,
    pub transform: TransformMatrix,
}

fn convert_one(surface: &BsplineSurface, e: usize, f: usize, dims: SegmentDims) -> Result<SegmentElement> {
    let (a, b) = match dims {
        SegmentDims::KnotSpan => segment_dims(surface, e, f)?,
        SegmentDims::Fixed(a, b) => (a, b),
    };
    let (element, transform) = bspline_segment_to_ancf(surface, e, f, a, b)?;
    Ok(SegmentElement {
        seg_u: e,
        seg_v: f,
        element,
        transform,
    })
}

/// Convert every non-degenerate segment of the surface, in segment order.
pub fn convert_all_segments(
    surface: &BsplineSurface,
    dims: SegmentDims,
) -> Result<Vec<SegmentElement>> {
    let segments = surface.segments();
    #[cfg(feature = "parallel")]
    {
        segments
            .into_par_iter()
            .map(|(e, f)| convert_one(surface, e, f, dims))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        segments
            .into_iter()
            .map(|(e, f)| convert_one(surface, e, f, dims))
            .collect()
    }
}

/// Sequential reference implementation of [`convert_all_segments`].
pub fn convert_all_segments_seq(
    surface: &BsplineSurface,
    dims: SegmentDims,
) -> Result<Vec<SegmentElement>> {
    surface
        .segments()
        .into_iter()
        .map(|(e, f)| convert_one(surface, e, f, dims))
        .collect()
}

/// Maximum and mean pointwise distance between two normalized point maps
/// over an `n x n` unit-square grid (`n >= 2`).
pub fn grid_deviation<F, G>(f: F, g: G, n: usize) -> (f64, f64)
where
    F: Fn(f64, f64) -> Vec3 + Sync,
    G: Fn(f64, f64) -> Vec3 + Sync,
{
    assert!(n >= 2, "grid needs at least 2 points per side");
    let rows: Vec<(f64, f64)>;
    #[cfg(feature = "parallel")]
    {
        rows = (0..n)
            .into_par_iter()
            .map(|i| deviation_row(&f, &g, n, i))
            .collect();
    }
    #[cfg(not(feature = "parallel"))]
    {
        rows = (0..n).map(|i| deviation_row(&f, &g, n, i)).collect();
    }
    fold_rows(&rows, n)
}

/// Sequential reference implementation of [`grid_deviation`].
pub fn grid_deviation_seq<F, G>(f: F, g: G, n: usize) -> (f64, f64)
where
    F: Fn(f64, f64) -> Vec3,
    G: Fn(f64, f64) -> Vec3,
{
    assert!(n >= 2, "grid needs at least 2 points per side");
    let rows: Vec<(f64, f64)> = (0..n).map(|i| deviation_row(&f, &g, n, i)).collect();
    fold_rows(&rows, n)
}

fn deviation_row<F, G>(f: &F, g: &G, n: usize, i: usize) -> (f64, f64)
where
    F: Fn(f64, f64) -> Vec3,
    G: Fn(f64, f64) -> Vec3,
{
    let xi = i as f64 / (n - 1) as f64;
    let mut max = 0.0_f64;
    let mut sum = 0.0_f64;
    for j in 0..n {
        let eta = j as f64 / (n - 1) as f64;
        let d = (f(xi, eta) - g(xi, eta)).norm();
        max = max.max(d);
        sum += d;
    }
    (max, sum)
}

fn fold_rows(rows: &[(f64, f64)], n: usize) -> (f64, f64) {
    let max = rows.iter().map(|r| r.0).fold(0.0_f64, f64::max);
    let sum: f64 = rows.iter().map(|r| r.1).sum();
    (max, sum / (n * n) as f64)
}

/// Evaluate a normalized point map on an `n x n` grid, row-major in `xi`
/// then `eta` (`n >= 2`).
pub fn sample_grid<F>(f: F, n: usize) -> Vec<(f64, f64, Vec3)>
where
    F: Fn(f64, f64) -> Vec3,
{
    assert!(n >= 2, "grid needs at least 2 points per side");
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let xi = i as f64 / (n - 1) as f64;
        for j in 0..n {
            let eta = j as f64 / (n - 1) as f64;
            out.push((xi, eta, f(xi, eta)));
        }
    }
    out
}

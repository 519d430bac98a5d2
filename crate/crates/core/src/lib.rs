//! Conversion kernel between tensor-product spline surfaces and ANCF
//! thin-plate finite surface elements.
//!
//! The crate covers four pieces of machinery:
//!
//! - [`bezier`]: tensor-product Bezier surfaces of degree 1..=3 per
//!   direction, with evaluation, first partial derivatives, and degree
//!   elevation.
//! - [`bspline`]: knot vectors, recursive and closed-form B-spline segment
//!   bases, surface evaluation, and per-segment Bezier extraction.
//! - [`ancf`]: ANCF thin-plate elements in the 48-d.o.f. (16 nodal
//!   3-vectors) and reduced 36-d.o.f. (12 nodal 3-vectors) forms, with
//!   Hermite shape functions and point evaluation.
//! - [`conversion`]: the explicit linear transformation matrices that map
//!   control points to nodal coordinates (and back), the control-polygon
//!   parallelogram check that licenses the 36-d.o.f. reduction, and exact
//!   degree reduction of the recovered nets.
//!
//! [`batch`] adds data-parallel helpers over segments and sample grids.
//! They use rayon when the default `parallel` feature is enabled and fall
//! back to sequential loops otherwise.

pub mod ancf;
pub mod batch;
pub mod bezier;
pub mod bspline;
pub mod conversion;
pub mod error;

pub use error::{Error, Result};

/// 3D point / vector type used throughout the crate.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Maximum supported polynomial degree per parametric direction.
pub const MAX_DEGREE: usize = 3;

/// Bounding-box diagonal of a point set, used as the reference scale for
/// relative tolerances. Degenerate (single-point) geometry falls back to
/// `max(1, largest coordinate magnitude)` so that relative tolerances stay
/// meaningful.
pub fn geometric_scale(points: &[Vec3]) -> f64 {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let diag = (hi - lo).norm();
    if diag > 0.0 {
        diag
    } else {
        let max_abs = points.iter().map(|p| p.amax()).fold(0.0_f64, f64::max);
        max_abs.max(1.0)
    }
}

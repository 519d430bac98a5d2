//! Error types shared by every module of the kernel.

use crate::ancf::Corner;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("basis index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },

    #[error("degree {degree} unsupported; surface degrees must be in 1..=3")]
    UnsupportedDegree { degree: usize },

    #[error("derivative order {order} unsupported; orders must be 0 or 1")]
    UnsupportedOrder { order: usize },

    #[error("control grid has {actual} points, expected {expected}")]
    GridSizeMismatch { expected: usize, actual: usize },

    #[error("{what} must be finite")]
    NonFinite { what: &'static str },

    #[error("knot vector decreases at index {index}")]
    DecreasingKnots { index: usize },

    #[error("knot vector has {actual} knots, expected {expected} (control count + degree + 1)")]
    KnotCountMismatch { expected: usize, actual: usize },

    #[error("knot vector needs at least {needed} knots, got {actual}")]
    TooFewKnots { needed: usize, actual: usize },

    #[error("need at least {needed} control points per direction, got {actual}")]
    TooFewControlPoints { needed: usize, actual: usize },

    #[error("parameter domain is empty: knot[{start}] == knot[{end}]")]
    EmptyDomain { start: usize, end: usize },

    #[error("segment {index} is degenerate: equal knots at {index} and {}", index + 1)]
    DegenerateSegment { index: usize },

    #[error(
        "segment {segment} of degree {degree} needs knot indices {needed_lo}..={needed_hi}; \
         available indices are 0..={available_hi}"
    )]
    InsufficientKnots {
        segment: usize,
        degree: usize,
        needed_lo: i64,
        needed_hi: usize,
        available_hi: usize,
    },

    #[error("direction already cubic; cannot elevate further")]
    AlreadyCubic,

    #[error("expected a bicubic net, got degrees ({degree_u}, {degree_v})")]
    NotBicubic { degree_u: usize, degree_v: usize },

    #[error("element dimensions must be positive: a = {a}, b = {b}")]
    NonPositiveDims { a: f64, b: f64 },

    #[error(
        "mixed slope vectors exceed tolerance (threshold {threshold:.3e}):{}",
        format_residuals(corners)
    )]
    MixedSlopeTooLarge {
        corners: Vec<(Corner, f64)>,
        threshold: f64,
    },
}

fn format_residuals(corners: &[(Corner, f64)]) -> String {
    corners
        .iter()
        .map(|(c, norm)| format!(" corner {c} |r11| = {norm:.6e}"))
        .collect::<Vec<_>>()
        .join(",")
}

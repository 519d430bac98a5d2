//! Linear transformations between spline control nets and ANCF nodal
//! coordinates, in both directions.
//!
//! Every conversion is one dense scalar matrix applied identically to the
//! x, y, z coordinate planes: nodal vectors are corner values and corner
//! derivatives of the source polynomial, and both are linear in the
//! control points. The matrix rows are built from 1D endpoint data
//! (value/derivative of the basis at the segment ends) tensored over the
//! two directions, so every degree pair 1..=3 x 1..=3 goes through the
//! same machinery.

use crate::ancf::{AncfElement36, AncfElement48, Corner, NODE_BASIS, REDUCED_NODE_INDICES};
use crate::bezier::{BezierNet, Direction};
use crate::bspline::{endpoint_tables, BsplineSurface};
use crate::error::{Error, Result};
use crate::Vec3;
use nalgebra::DMatrix;

/// Dense scalar map from stacked control points to stacked nodal vectors.
///
/// Shape is `(#nodal vectors) x (#control points)`; control points are
/// stacked row-major in `(i, j)` with the v-index fastest, nodal vectors
/// in the frozen element order. Carries the source degrees, the knot
/// windows (empty for Bezier sources), and the element dimensions used at
/// conversion time.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformMatrix {
    matrix: DMatrix<f64>,
    degree_u: usize,
    degree_v: usize,
    window_u: Vec<f64>,
    window_v: Vec<f64>,
    a: f64,
    b: f64,
    reduced: bool,
}

impl TransformMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn degree_u(&self) -> usize {
        self.degree_u
    }

    pub fn degree_v(&self) -> usize {
        self.degree_v
    }

    /// Knot window of the source segment in u; empty for Bezier sources.
    pub fn window_u(&self) -> &[f64] {
        &self.window_u
    }

    pub fn window_v(&self) -> &[f64] {
        &self.window_v
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// True for the 12-row variant of the reduced element.
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Row indices of corner positions; the remaining rows are slopes.
    pub fn position_rows(&self) -> &'static [usize] {
        if self.reduced {
            &[0, 2, 6, 8]
        } else {
            &[0, 2, 8, 10]
        }
    }

    /// Apply the map to stacked control points: the nodal vectors.
    pub fn apply(&self, points: &[Vec3]) -> Result<Vec<Vec3>> {
        if points.len() != self.cols() {
            return Err(Error::GridSizeMismatch {
                expected: self.cols(),
                actual: points.len(),
            });
        }
        Ok((0..self.rows())
            .map(|r| {
                points
                    .iter()
                    .enumerate()
                    .fold(Vec3::zeros(), |acc, (c, p)| acc + self.matrix[(r, c)] * p)
            })
            .collect())
    }

    /// The 12-row map of the reduced element: mixed-slope rows dropped.
    pub fn reduced(&self) -> TransformMatrix {
        if self.reduced {
            return self.clone();
        }
        let mut m = DMatrix::zeros(12, self.cols());
        for (r, &k) in REDUCED_NODE_INDICES.iter().enumerate() {
            m.row_mut(r).copy_from(&self.matrix.row(k));
        }
        TransformMatrix {
            matrix: m,
            reduced: true,
            window_u: self.window_u.clone(),
            window_v: self.window_v.clone(),
            ..*self
        }
    }
}

/// 1D endpoint rows for one direction: the four weight rows
/// (value@start, x-derivative@start, value@end, x-derivative@end) over the
/// active control values, with `deriv_scale` converting parameter
/// derivatives to physical ones.
fn bernstein_endpoint_rows(degree: usize, deriv_scale: f64) -> [Vec<f64>; 4] {
    let n = degree + 1;
    let m = degree as f64;
    let mut val0 = vec![0.0; n];
    let mut der0 = vec![0.0; n];
    let mut val1 = vec![0.0; n];
    let mut der1 = vec![0.0; n];
    val0[0] = 1.0;
    val1[degree] = 1.0;
    der0[0] = -m * deriv_scale;
    der0[1] = m * deriv_scale;
    der1[degree - 1] = -m * deriv_scale;
    der1[degree] = m * deriv_scale;
    [val0, der0, val1, der1]
}

fn assemble(urows: &[Vec<f64>; 4], vrows: &[Vec<f64>; 4]) -> DMatrix<f64> {
    let nu = urows[0].len();
    let nv = vrows[0].len();
    let mut m = DMatrix::zeros(16, nu * nv);
    for (k, &(p, q)) in NODE_BASIS.iter().enumerate() {
        for i in 0..nu {
            for j in 0..nv {
                m[(k, i * nv + j)] = urows[p][i] * vrows[q][j];
            }
        }
    }
    m
}

fn element_from(matrix: &DMatrix<f64>, points: &[Vec3], a: f64, b: f64) -> Result<AncfElement48> {
    let mut nodes = [Vec3::zeros(); 16];
    for (k, node) in nodes.iter_mut().enumerate() {
        *node = points
            .iter()
            .enumerate()
            .fold(Vec3::zeros(), |acc, (c, p)| acc + matrix[(k, c)] * p);
    }
    AncfElement48::new(a, b, nodes)
}

/// Convert a Bezier net to the full element over `[0,a] x [0,b]`, together
/// with the transformation matrix that produced it.
///
/// Nodal vectors are the corner values and corner derivatives of the
/// surface polynomial under `x = xi a`, `y = eta b`: slopes pick up
/// factors `1/a`, `1/b`, and `1/(ab)` respectively.
pub fn bezier_to_ancf(net: &BezierNet, a: f64, b: f64) -> Result<(AncfElement48, TransformMatrix)> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::NonPositiveDims { a, b });
    }
    let urows = bernstein_endpoint_rows(net.degree_u(), 1.0 / a);
    let vrows = bernstein_endpoint_rows(net.degree_v(), 1.0 / b);
    let matrix = assemble(&urows, &vrows);
    let element = element_from(&matrix, net.points(), a, b)?;
    let transform = TransformMatrix {
        matrix,
        degree_u: net.degree_u(),
        degree_v: net.degree_v(),
        window_u: Vec::new(),
        window_v: Vec::new(),
        a,
        b,
        reduced: false,
    };
    Ok((element, transform))
}

/// Knot-span dimensions of a segment, the default element dimensions.
pub fn segment_dims(surface: &BsplineSurface, e: usize, f: usize) -> Result<(f64, f64)> {
    surface.check_segment_pair(e, f)?;
    Ok((
        surface.knots_u().span_width(e),
        surface.knots_v().span_width(f),
    ))
}

/// Convert one segment of a B-spline surface to the full element over
/// `[0,a] x [0,b]`, with the matrix mapping the window control points
/// to the nodal vectors.
pub fn bspline_segment_to_ancf(
    surface: &BsplineSurface,
    e: usize,
    f: usize,
    a: f64,
    b: f64,
) -> Result<(AncfElement48, TransformMatrix)> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::NonPositiveDims { a, b });
    }
    surface.check_segment_pair(e, f)?;
    let (k, l) = (surface.degree_u(), surface.degree_v());
    let tu = endpoint_tables(surface.knots_u(), k, e)?;
    let tv = endpoint_tables(surface.knots_v(), l, f)?;
    let su = surface.knots_u().span_width(e) / a;
    let sv = surface.knots_v().span_width(f) / b;
    let urows = [
        tu.values_start.clone(),
        tu.derivs_start.iter().map(|d| d * su).collect(),
        tu.values_end.clone(),
        tu.derivs_end.iter().map(|d| d * su).collect(),
    ];
    let vrows = [
        tv.values_start.clone(),
        tv.derivs_start.iter().map(|d| d * sv).collect(),
        tv.values_end.clone(),
        tv.derivs_end.iter().map(|d| d * sv).collect(),
    ];
    let matrix = assemble(&urows, &vrows);

    let mut window = Vec::with_capacity((k + 1) * (l + 1));
    for i in e - k..=e {
        for j in f - l..=f {
            window.push(surface.point(i, j));
        }
    }
    let element = element_from(&matrix, &window, a, b)?;
    let transform = TransformMatrix {
        matrix,
        degree_u: k,
        degree_v: l,
        window_u: surface.knots_u().knots()[e + 1 - k..=e + k].to_vec(),
        window_v: surface.knots_v().knots()[f + 1 - l..=f + l].to_vec(),
        a,
        b,
        reduced: false,
    };
    Ok((element, transform))
}

/// Same as [`bspline_segment_to_ancf`] with the knot-span default
/// dimensions.
pub fn bspline_segment_to_ancf_default(
    surface: &BsplineSurface,
    e: usize,
    f: usize,
) -> Result<(AncfElement48, TransformMatrix)> {
    let (a, b) = segment_dims(surface, e, f)?;
    bspline_segment_to_ancf(surface, e, f, a, b)
}

/// Outcome of the control-polygon parallelogram test on a bicubic net.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelogramCheck {
    pub satisfied: bool,
    /// Defect norms of the four corner quadrilaterals, by corner.
    pub residuals: [(Corner, f64); 4],
    /// Absolute threshold the residuals were compared against.
    pub threshold: f64,
}

/// Test whether a bicubic net satisfies the four corner parallelogram
/// conditions, which make all four mixed slopes of the converted element
/// vanish. `tol` is relative to the net's bounding-box diagonal.
pub fn check_parallelogram(net: &BezierNet, tol: f64) -> Result<ParallelogramCheck> {
    if net.degree_u() != 3 || net.degree_v() != 3 {
        return Err(Error::NotBicubic {
            degree_u: net.degree_u(),
            degree_v: net.degree_v(),
        });
    }
    let defect = |c: usize, i: usize, cj: usize, j: usize| -> f64 {
        // corner quad (c, cj) with interior neighbors at (i, j)
        (net.point(c, cj) + net.point(i, j) - net.point(i, cj) - net.point(c, j)).norm()
    };
    let residuals = [
        (Corner::P00, defect(0, 1, 0, 1)),
        (Corner::Pa0, defect(3, 2, 0, 1)),
        (Corner::P0b, defect(0, 1, 3, 2)),
        (Corner::Pab, defect(3, 2, 3, 2)),
    ];
    let threshold = tol * net.scale();
    Ok(ParallelogramCheck {
        satisfied: residuals.iter().all(|&(_, r)| r <= threshold),
        residuals,
        threshold,
    })
}

/// Drop the mixed slopes of a full element, turning it into the reduced
/// 36-d.o.f. element. Rejected when any mixed-slope norm exceeds
/// `tol * element scale`, naming the offending corners.
pub fn reduce_element(elem: &AncfElement48, tol: f64) -> Result<AncfElement36> {
    let threshold = tol * elem.scale();
    let offenders: Vec<(Corner, f64)> = elem
        .mixed_slope_norms()
        .into_iter()
        .filter(|&(_, norm)| norm > threshold)
        .collect();
    if !offenders.is_empty() {
        return Err(Error::MixedSlopeTooLarge {
            corners: offenders,
            threshold,
        });
    }
    let mut nodes = [Vec3::zeros(); 12];
    for (r, &k) in REDUCED_NODE_INDICES.iter().enumerate() {
        nodes[r] = elem.node(k);
    }
    AncfElement36::new(elem.a(), elem.b(), nodes)
}

/// The unique bicubic net whose conversion (with the same dimensions)
/// reproduces the element: the inverse transformation.
pub fn ancf_to_bezier(elem: &AncfElement48) -> BezierNet {
    let (a, b) = (elem.a(), elem.b());
    // Corner data as derivatives with respect to the normalized
    // parameters: slope vectors pick the factors a, b back up.
    let mut data = [[Vec3::zeros(); 4]; 4];
    for (k, &(p, q)) in NODE_BASIS.iter().enumerate() {
        let mut v = elem.node(k);
        if p % 2 == 1 {
            v *= a;
        }
        if q % 2 == 1 {
            v *= b;
        }
        data[p][q] = v;
    }
    // Hermite-to-Bernstein per direction: inner points sit a third of the
    // end derivative away from the end points.
    let h2b = |h: [Vec3; 4]| -> [Vec3; 4] {
        [
            h[0],
            h[0] + h[1] / 3.0,
            h[2] - h[3] / 3.0,
            h[2],
        ]
    };
    let mut mid = [[Vec3::zeros(); 4]; 4];
    for q in 0..4 {
        let col = h2b([data[0][q], data[1][q], data[2][q], data[3][q]]);
        for (r, v) in col.into_iter().enumerate() {
            mid[r][q] = v;
        }
    }
    let mut pts = Vec::with_capacity(16);
    for row in &mid {
        pts.extend(h2b(*row));
    }
    BezierNet::new(3, 3, pts).expect("element nodes are finite")
}

/// Lowest-degree net in each direction that reproduces the surface within
/// `tol` (relative to the bounding-box diagonal); the input is returned
/// unchanged when no exact reduction exists.
pub fn degree_reduce_exact(net: &BezierNet, tol: f64) -> BezierNet {
    let threshold = tol * net.scale();
    let mut current = net.clone();
    loop {
        let mut changed = false;
        if current.degree_u() > 1 {
            if let Some(r) = try_reduce(&current, Direction::U, threshold) {
                current = r;
                changed = true;
            }
        }
        if current.degree_v() > 1 {
            if let Some(r) = try_reduce(&current, Direction::V, threshold) {
                current = r;
                changed = true;
            }
        }
        if !changed {
            return current;
        }
    }
}

/// Invert one degree elevation if the result reproduces the net.
fn try_reduce(net: &BezierNet, direction: Direction, threshold: f64) -> Option<BezierNet> {
    let (mu, nv) = (net.degree_u(), net.degree_v());
    let candidate = match direction {
        Direction::U => {
            let m = mu as f64;
            let mut pts = Vec::with_capacity(mu * (nv + 1));
            for j in 0..=nv {
                let mut prev = net.point(0, j);
                let mut col = vec![prev];
                for i in 1..mu {
                    let w = i as f64 / m;
                    prev = (net.point(i, j) - w * prev) / (1.0 - w);
                    col.push(prev);
                }
                pts.push(col);
            }
            // transpose the per-column results into row-major order
            let mut flat = Vec::with_capacity(mu * (nv + 1));
            for i in 0..mu {
                for col in pts.iter().take(nv + 1) {
                    flat.push(col[i]);
                }
            }
            BezierNet::new(mu - 1, nv, flat).ok()?
        }
        Direction::V => {
            let n = nv as f64;
            let mut flat = Vec::with_capacity((mu + 1) * nv);
            for i in 0..=mu {
                let mut prev = net.point(i, 0);
                flat.push(prev);
                for j in 1..nv {
                    let w = j as f64 / n;
                    prev = (net.point(i, j) - w * prev) / (1.0 - w);
                    flat.push(prev);
                }
            }
            BezierNet::new(mu, nv - 1, flat).ok()?
        }
    };
    // Exactness check: the candidate must elevate back onto the original
    // control points, and the sampled surfaces must agree.
    let back = candidate.degree_elevate(direction).ok()?;
    let cp_dev = back
        .points()
        .iter()
        .zip(net.points())
        .map(|(p, q)| (p - q).norm())
        .fold(0.0_f64, f64::max);
    if cp_dev > threshold {
        return None;
    }
    for i in 0..=6 {
        for j in 0..=6 {
            let (u, v) = (i as f64 / 6.0, j as f64 / 6.0);
            let d = (candidate.eval(u, v).unwrap() - net.eval(u, v).unwrap()).norm();
            if d > threshold {
                return None;
            }
        }
    }
    Some(candidate)
}

//! B-spline knot machinery, segment bases, surface evaluation, and
//! per-segment Bezier extraction.
//!
//! Two routes to the basis values exist side by side: the recursive
//! definition ([`cox_de_boor`]) and closed-form per-segment polynomials
//! ([`segment_basis`]). Surface evaluation is segment-local and uses the
//! closed forms; the recursion is the independent cross-check.
//!
//! A "segment" is the knot span `[knot[alpha], knot[alpha+1]]` identified
//! by its left knot index `alpha`, and is only meaningful when that span
//! has positive width. Closed-form bases of degree `d` need the knot
//! window `alpha-(d-1) ..= alpha+d` around the segment.

use crate::bezier::BezierNet;
use crate::error::{Error, Result};
use crate::{Vec3, MAX_DEGREE};

/// Non-decreasing sequence of knot values.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    knots: Vec<f64>,
}

impl KnotVector {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::TooFewKnots {
                needed: 2,
                actual: knots.len(),
            });
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::NonFinite { what: "knots" });
        }
        for i in 1..knots.len() {
            if knots[i] < knots[i - 1] {
                return Err(Error::DecreasingKnots { index: i });
            }
        }
        Ok(Self { knots })
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    pub fn knot(&self, i: usize) -> f64 {
        self.knots[i]
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Width of the span starting at knot index `alpha`.
    pub fn span_width(&self, alpha: usize) -> f64 {
        self.knots[alpha + 1] - self.knots[alpha]
    }
}

/// Recursive basis function value `N_{i,k}(u)` with the 0/0 = 0 convention.
///
/// Degree-0 functions are indicators of half-open spans `[u_i, u_{i+1})`;
/// the last span of the vector is closed at the final knot so the basis
/// partitions unity on the whole valid interval.
pub fn cox_de_boor(knots: &KnotVector, i: usize, k: usize, u: f64) -> Result<f64> {
    let kn = knots.knots();
    if i + k + 1 >= kn.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            degree: k,
        });
    }
    Ok(recurse(kn, i, k, u))
}

fn recurse(kn: &[f64], i: usize, k: usize, u: f64) -> f64 {
    if k == 0 {
        let last = kn[kn.len() - 1];
        let closes_last = u == last && kn[i + 1] == last && kn[i] < last;
        return if (kn[i] <= u && u < kn[i + 1]) || closes_last {
            1.0
        } else {
            0.0
        };
    }
    let left_den = kn[i + k] - kn[i];
    let left = if left_den > 0.0 {
        (u - kn[i]) / left_den * recurse(kn, i, k - 1, u)
    } else {
        0.0
    };
    let right_den = kn[i + k + 1] - kn[i + 1];
    let right = if right_den > 0.0 {
        (kn[i + k + 1] - u) / right_den * recurse(kn, i + 1, k - 1, u)
    } else {
        0.0
    };
    left + right
}

/// Values and first derivatives of the active basis functions at both ends
/// of one segment. Entry order is by basis index, lowest first, so for
/// degree `d` entry `j` belongs to `N_{alpha-d+j, d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentBasisTable {
    pub values_start: Vec<f64>,
    pub values_end: Vec<f64>,
    pub derivs_start: Vec<f64>,
    pub derivs_end: Vec<f64>,
}

fn check_degree(degree: usize) -> Result<()> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree { degree });
    }
    Ok(())
}

fn check_segment(knots: &KnotVector, degree: usize, seg: usize) -> Result<()> {
    check_degree(degree)?;
    let needed_lo = seg as i64 - (degree as i64 - 1);
    let needed_hi = seg + degree;
    let available_hi = knots.len() - 1;
    if needed_lo < 0 || needed_hi > available_hi {
        return Err(Error::InsufficientKnots {
            segment: seg,
            degree,
            needed_lo,
            needed_hi,
            available_hi,
        });
    }
    if knots.knot(seg + 1) <= knots.knot(seg) {
        return Err(Error::DegenerateSegment { index: seg });
    }
    Ok(())
}

/// Knot differences around a segment: `f(beta) = knot[alpha+beta] - u`,
/// `g(gamma) = u - knot[alpha+gamma]`, `h(beta, gamma)` the knot spread.
struct Window<'a> {
    knots: &'a [f64],
    alpha: usize,
}

impl Window<'_> {
    fn at(&self, offset: i64) -> f64 {
        self.knots[(self.alpha as i64 + offset) as usize]
    }

    fn f(&self, beta: i64, u: f64) -> f64 {
        self.at(beta) - u
    }

    fn g(&self, gamma: i64, u: f64) -> f64 {
        u - self.at(gamma)
    }

    fn h(&self, beta: i64, gamma: i64) -> f64 {
        self.at(beta) - self.at(gamma)
    }
}

/// Closed-form values of the `degree+1` active basis functions on segment
/// `seg`, evaluated at `u`.
///
/// The closed forms are polynomials; evaluating slightly outside the
/// segment returns the polynomial extension (useful for centered finite
/// differences at segment ends).
pub fn segment_basis(knots: &KnotVector, degree: usize, seg: usize, u: f64) -> Result<Vec<f64>> {
    check_segment(knots, degree, seg)?;
    let w = Window {
        knots: knots.knots(),
        alpha: seg,
    };
    Ok(basis_values(&w, degree, u))
}

/// First derivatives (with respect to the parameter) of the active basis
/// functions on segment `seg`, evaluated at `u`.
pub fn segment_basis_deriv(
    knots: &KnotVector,
    degree: usize,
    seg: usize,
    u: f64,
) -> Result<Vec<f64>> {
    check_segment(knots, degree, seg)?;
    let w = Window {
        knots: knots.knots(),
        alpha: seg,
    };
    Ok(basis_derivs(&w, degree, u))
}

fn basis_values(w: &Window, degree: usize, u: f64) -> Vec<f64> {
    match degree {
        1 => {
            let h10 = w.h(1, 0);
            vec![w.f(1, u) / h10, w.g(0, u) / h10]
        }
        2 => {
            let d1 = w.h(1, -1) * w.h(1, 0);
            let d2 = w.h(2, 0) * w.h(1, 0);
            let (f1, f2) = (w.f(1, u), w.f(2, u));
            let (g0, gm1) = (w.g(0, u), w.g(-1, u));
            vec![
                f1 * f1 / d1,
                f1 * gm1 / d1 + f2 * g0 / d2,
                g0 * g0 / d2,
            ]
        }
        3 => {
            let d1 = w.h(1, -2) * w.h(1, -1) * w.h(1, 0);
            let d2 = w.h(2, -1) * w.h(1, -1) * w.h(1, 0);
            let d3 = w.h(2, -1) * w.h(2, 0) * w.h(1, 0);
            let d4 = w.h(3, 0) * w.h(2, 0) * w.h(1, 0);
            let (f1, f2, f3) = (w.f(1, u), w.f(2, u), w.f(3, u));
            let (g0, gm1, gm2) = (w.g(0, u), w.g(-1, u), w.g(-2, u));
            vec![
                f1 * f1 * f1 / d1,
                f1 * f1 * gm2 / d1 + f1 * f2 * gm1 / d2 + f2 * f2 * g0 / d3,
                f1 * gm1 * gm1 / d2 + f2 * g0 * gm1 / d3 + f3 * g0 * g0 / d4,
                g0 * g0 * g0 / d4,
            ]
        }
        _ => unreachable!("degree validated"),
    }
}

fn basis_derivs(w: &Window, degree: usize, u: f64) -> Vec<f64> {
    match degree {
        1 => {
            let h10 = w.h(1, 0);
            vec![-1.0 / h10, 1.0 / h10]
        }
        2 => {
            let d1 = w.h(1, -1) * w.h(1, 0);
            let d2 = w.h(2, 0) * w.h(1, 0);
            let (f1, f2) = (w.f(1, u), w.f(2, u));
            let (g0, gm1) = (w.g(0, u), w.g(-1, u));
            vec![
                -2.0 * f1 / d1,
                (f1 - gm1) / d1 + (f2 - g0) / d2,
                2.0 * g0 / d2,
            ]
        }
        3 => {
            let d1 = w.h(1, -2) * w.h(1, -1) * w.h(1, 0);
            let d2 = w.h(2, -1) * w.h(1, -1) * w.h(1, 0);
            let d3 = w.h(2, -1) * w.h(2, 0) * w.h(1, 0);
            let d4 = w.h(3, 0) * w.h(2, 0) * w.h(1, 0);
            let (f1, f2, f3) = (w.f(1, u), w.f(2, u), w.f(3, u));
            let (g0, gm1, gm2) = (w.g(0, u), w.g(-1, u), w.g(-2, u));
            vec![
                -3.0 * f1 * f1 / d1,
                (f1 * f1 - 2.0 * f1 * gm2) / d1
                    + (f1 * f2 - f1 * gm1 - f2 * gm1) / d2
                    + (f2 * f2 - 2.0 * f2 * g0) / d3,
                (2.0 * f1 * gm1 - gm1 * gm1) / d2
                    + (f2 * gm1 + f2 * g0 - g0 * gm1) / d3
                    + (2.0 * f3 * g0 - g0 * g0) / d4,
                3.0 * g0 * g0 / d4,
            ]
        }
        _ => unreachable!("degree validated"),
    }
}

/// Endpoint values and derivatives of the active basis functions on one
/// segment, computed from the closed forms. The vanishing entries (the
/// trailing function at the segment start and the leading one at the end)
/// come out exactly zero.
pub fn endpoint_tables(knots: &KnotVector, degree: usize, seg: usize) -> Result<SegmentBasisTable> {
    check_segment(knots, degree, seg)?;
    let w = Window {
        knots: knots.knots(),
        alpha: seg,
    };
    let start = knots.knot(seg);
    let end = knots.knot(seg + 1);
    Ok(SegmentBasisTable {
        values_start: basis_values(&w, degree, start),
        values_end: basis_values(&w, degree, end),
        derivs_start: basis_derivs(&w, degree, start),
        derivs_end: basis_derivs(&w, degree, end),
    })
}

/// Tensor-product B-spline surface with degrees 1..=3 per direction.
///
/// Control points are stored row-major in `(i, j)` with the v-index `j`
/// fastest, mirroring [`BezierNet`].
#[derive(Debug, Clone, PartialEq)]
pub struct BsplineSurface {
    degree_u: usize,
    degree_v: usize,
    num_u: usize,
    num_v: usize,
    points: Vec<Vec3>,
    knots_u: KnotVector,
    knots_v: KnotVector,
}

impl BsplineSurface {
    pub fn new(
        degree_u: usize,
        degree_v: usize,
        num_u: usize,
        num_v: usize,
        points: Vec<Vec3>,
        knots_u: KnotVector,
        knots_v: KnotVector,
    ) -> Result<Self> {
        check_degree(degree_u)?;
        check_degree(degree_v)?;
        if num_u <= degree_u {
            return Err(Error::TooFewControlPoints {
                needed: degree_u + 1,
                actual: num_u,
            });
        }
        if num_v <= degree_v {
            return Err(Error::TooFewControlPoints {
                needed: degree_v + 1,
                actual: num_v,
            });
        }
        if points.len() != num_u * num_v {
            return Err(Error::GridSizeMismatch {
                expected: num_u * num_v,
                actual: points.len(),
            });
        }
        if points.iter().any(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::NonFinite {
                what: "control point coordinates",
            });
        }
        for (knots, num, degree) in [(&knots_u, num_u, degree_u), (&knots_v, num_v, degree_v)] {
            let expected = num + degree + 1;
            if knots.len() != expected {
                return Err(Error::KnotCountMismatch {
                    expected,
                    actual: knots.len(),
                });
            }
            if knots.knot(num) <= knots.knot(degree) {
                return Err(Error::EmptyDomain {
                    start: degree,
                    end: num,
                });
            }
        }
        Ok(Self {
            degree_u,
            degree_v,
            num_u,
            num_v,
            points,
            knots_u,
            knots_v,
        })
    }

    pub fn degree_u(&self) -> usize {
        self.degree_u
    }

    pub fn degree_v(&self) -> usize {
        self.degree_v
    }

    pub fn num_u(&self) -> usize {
        self.num_u
    }

    pub fn num_v(&self) -> usize {
        self.num_v
    }

    pub fn knots_u(&self) -> &KnotVector {
        &self.knots_u
    }

    pub fn knots_v(&self) -> &KnotVector {
        &self.knots_v
    }

    /// Control point `d_ij`.
    pub fn point(&self, i: usize, j: usize) -> Vec3 {
        self.points[i * self.num_v + j]
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn scale(&self) -> f64 {
        crate::geometric_scale(&self.points)
    }

    /// Valid parameter interval in u.
    pub fn domain_u(&self) -> (f64, f64) {
        (self.knots_u.knot(self.degree_u), self.knots_u.knot(self.num_u))
    }

    pub fn domain_v(&self) -> (f64, f64) {
        (self.knots_v.knot(self.degree_v), self.knots_v.knot(self.num_v))
    }

    /// Left knot indices of the non-degenerate u spans inside the domain.
    pub fn segments_u(&self) -> Vec<usize> {
        (self.degree_u..self.num_u)
            .filter(|&e| self.knots_u.span_width(e) > 0.0)
            .collect()
    }

    pub fn segments_v(&self) -> Vec<usize> {
        (self.degree_v..self.num_v)
            .filter(|&f| self.knots_v.span_width(f) > 0.0)
            .collect()
    }

    /// All non-degenerate `(e, f)` segment pairs, row-major in `(e, f)`.
    pub fn segments(&self) -> Vec<(usize, usize)> {
        let fs = self.segments_v();
        self.segments_u()
            .into_iter()
            .flat_map(|e| fs.iter().map(move |&f| (e, f)))
            .collect()
    }

    fn check_domain(&self, u: f64, v: f64) -> Result<()> {
        let (ulo, uhi) = self.domain_u();
        if !(ulo..=uhi).contains(&u) {
            return Err(Error::ParameterOutOfRange {
                name: "u",
                value: u,
                min: ulo,
                max: uhi,
            });
        }
        let (vlo, vhi) = self.domain_v();
        if !(vlo..=vhi).contains(&v) {
            return Err(Error::ParameterOutOfRange {
                name: "v",
                value: v,
                min: vlo,
                max: vhi,
            });
        }
        Ok(())
    }

    /// Segment index of the non-degenerate span containing `u`; the domain
    /// end maps to the last segment.
    pub fn find_segment_u(&self, u: f64) -> Result<usize> {
        self.check_domain(u, self.domain_v().0)?;
        Ok(find_span(self.knots_u.knots(), self.degree_u, self.num_u, u))
    }

    pub fn find_segment_v(&self, v: f64) -> Result<usize> {
        self.check_domain(self.domain_u().0, v)?;
        Ok(find_span(self.knots_v.knots(), self.degree_v, self.num_v, v))
    }

    /// Surface point at `(u, v)` inside the valid parameter rectangle,
    /// evaluated segment-locally over the active control window.
    pub fn eval(&self, u: f64, v: f64) -> Result<Vec3> {
        self.check_domain(u, v)?;
        let e = find_span(self.knots_u.knots(), self.degree_u, self.num_u, u);
        let f = find_span(self.knots_v.knots(), self.degree_v, self.num_v, v);
        let bu = segment_basis(&self.knots_u, self.degree_u, e, u)?;
        let bv = segment_basis(&self.knots_v, self.degree_v, f, v)?;
        let mut acc = Vec3::zeros();
        for (di, &wu) in bu.iter().enumerate() {
            let i = e - self.degree_u + di;
            for (dj, &wv) in bv.iter().enumerate() {
                let j = f - self.degree_v + dj;
                acc += self.point(i, j) * (wu * wv);
            }
        }
        Ok(acc)
    }

    /// Surface point with `(xi, eta)` in the unit square mapped affinely
    /// over the whole valid parameter rectangle.
    pub fn eval_normalized(&self, xi: f64, eta: f64) -> Result<Vec3> {
        crate::bezier::check_unit("xi", xi)?;
        crate::bezier::check_unit("eta", eta)?;
        let (ulo, uhi) = self.domain_u();
        let (vlo, vhi) = self.domain_v();
        let u = (ulo + xi * (uhi - ulo)).clamp(ulo, uhi);
        let v = (vlo + eta * (vhi - vlo)).clamp(vlo, vhi);
        self.eval(u, v)
    }

    /// Bezier control net reproducing this surface on segment `(e, f)`
    /// under the affine reparameterization of the segment to the unit
    /// square.
    pub fn segment_to_bezier(&self, e: usize, f: usize) -> Result<BezierNet> {
        self.check_segment_pair(e, f)?;
        let eu = extraction_rows(&self.knots_u, self.degree_u, e)?;
        let ev = extraction_rows(&self.knots_v, self.degree_v, f)?;
        let (k, l) = (self.degree_u, self.degree_v);
        let mut pts = Vec::with_capacity((k + 1) * (l + 1));
        for row_u in &eu {
            for row_v in &ev {
                let mut acc = Vec3::zeros();
                for (di, &cu) in row_u.iter().enumerate() {
                    let i = e - k + di;
                    for (dj, &cv) in row_v.iter().enumerate() {
                        let j = f - l + dj;
                        acc += self.point(i, j) * (cu * cv);
                    }
                }
                pts.push(acc);
            }
        }
        BezierNet::new(k, l, pts)
    }

    pub(crate) fn check_segment_pair(&self, e: usize, f: usize) -> Result<()> {
        if e < self.degree_u || e >= self.num_u {
            return Err(Error::InsufficientKnots {
                segment: e,
                degree: self.degree_u,
                needed_lo: e as i64 - (self.degree_u as i64 - 1),
                needed_hi: e + self.degree_u,
                available_hi: self.knots_u.len() - 1,
            });
        }
        if f < self.degree_v || f >= self.num_v {
            return Err(Error::InsufficientKnots {
                segment: f,
                degree: self.degree_v,
                needed_lo: f as i64 - (self.degree_v as i64 - 1),
                needed_hi: f + self.degree_v,
                available_hi: self.knots_v.len() - 1,
            });
        }
        check_segment(&self.knots_u, self.degree_u, e)?;
        check_segment(&self.knots_v, self.degree_v, f)?;
        Ok(())
    }
}

/// Largest non-degenerate span index in `degree..num_ctrl` whose left knot
/// is at most `u`. Assumes `u` lies inside the valid domain.
fn find_span(knots: &[f64], degree: usize, num_ctrl: usize, u: f64) -> usize {
    let mut e = degree + knots[degree..num_ctrl].partition_point(|&k| k <= u);
    e = e.saturating_sub(1).max(degree).min(num_ctrl - 1);
    while knots[e + 1] <= knots[e] {
        e -= 1;
    }
    e
}

/// Rows of the 1D Bezier-extraction map for one segment: row `r` holds the
/// weights that combine the window control values into the `r`-th Bernstein
/// point of the segment polynomial.
fn extraction_rows(knots: &KnotVector, degree: usize, seg: usize) -> Result<Vec<Vec<f64>>> {
    let table = endpoint_tables(knots, degree, seg)?;
    let span = knots.span_width(seg);
    let n = degree + 1;
    // Bernstein points of each active basis function on the segment, from
    // its endpoint values and derivatives (with respect to the normalized
    // segment parameter).
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let v0 = table.values_start[j];
            let v1 = table.values_end[j];
            let d0 = table.derivs_start[j] * span;
            let d1 = table.derivs_end[j] * span;
            match degree {
                1 => vec![v0, v1],
                2 => vec![v0, v0 + d0 / 2.0, v1],
                3 => vec![v0, v0 + d0 / 3.0, v1 - d1 / 3.0, v1],
                _ => unreachable!("degree validated"),
            }
        })
        .collect();
    Ok((0..n)
        .map(|r| cols.iter().map(|col| col[r]).collect())
        .collect())
}

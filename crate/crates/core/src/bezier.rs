//! Tensor-product Bezier surfaces of degree 1..=3 per direction.
//!
//! Evaluation uses the explicit Bernstein sum; derivatives use exact
//! difference nets of one degree less. Parameters are validated to the
//! unit square, extrapolation is rejected.

use crate::error::{Error, Result};
use crate::{Vec3, MAX_DEGREE};

/// Parametric direction of a tensor-product surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    U,
    V,
}

/// Binomial coefficients C(m, i) for m <= 3.
const BINOMIAL: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

/// Bernstein basis value `C(m,i) t^i (1-t)^(m-i)` with validated inputs.
pub fn bernstein_basis(i: usize, m: usize, t: f64) -> Result<f64> {
    if m > MAX_DEGREE {
        return Err(Error::UnsupportedDegree { degree: m });
    }
    if i > m {
        return Err(Error::IndexOutOfRange {
            index: i,
            degree: m,
        });
    }
    check_unit("t", t)?;
    Ok(bernstein(i, m, t))
}

fn bernstein(i: usize, m: usize, t: f64) -> f64 {
    BINOMIAL[m][i] * t.powi(i as i32) * (1.0 - t).powi((m - i) as i32)
}

pub(crate) fn check_unit(name: &'static str, t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange {
            name,
            value: t,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

/// Control net of a tensor-product Bezier surface.
///
/// Points are stored row-major in `(i, j)` with the v-index `j` fastest;
/// `points[i * (degree_v + 1) + j]` is the control point `b_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierNet {
    degree_u: usize,
    degree_v: usize,
    points: Vec<Vec3>,
}

impl BezierNet {
    pub fn new(degree_u: usize, degree_v: usize, points: Vec<Vec3>) -> Result<Self> {
        for &degree in &[degree_u, degree_v] {
            if degree == 0 || degree > MAX_DEGREE {
                return Err(Error::UnsupportedDegree { degree });
            }
        }
        let expected = (degree_u + 1) * (degree_v + 1);
        if points.len() != expected {
            return Err(Error::GridSizeMismatch {
                expected,
                actual: points.len(),
            });
        }
        if points.iter().any(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::NonFinite {
                what: "control point coordinates",
            });
        }
        Ok(Self {
            degree_u,
            degree_v,
            points,
        })
    }

    pub fn degree_u(&self) -> usize {
        self.degree_u
    }

    pub fn degree_v(&self) -> usize {
        self.degree_v
    }

    /// Control point `b_ij`.
    pub fn point(&self, i: usize, j: usize) -> Vec3 {
        self.points[i * (self.degree_v + 1) + j]
    }

    /// All control points, row-major in `(i, j)`.
    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    /// Reference scale for relative tolerances on this net.
    pub fn scale(&self) -> f64 {
        crate::geometric_scale(&self.points)
    }

    /// Surface point at `(u, v)` in the unit square.
    pub fn eval(&self, u: f64, v: f64) -> Result<Vec3> {
        check_unit("u", u)?;
        check_unit("v", v)?;
        Ok(eval_raw(
            &self.points,
            self.degree_u,
            self.degree_v,
            u,
            v,
        ))
    }

    /// Exact partial derivative of order (0|1, 0|1); order (0,0) is the
    /// surface point itself.
    pub fn partial(&self, u: f64, v: f64, order_u: usize, order_v: usize) -> Result<Vec3> {
        check_unit("u", u)?;
        check_unit("v", v)?;
        for &order in &[order_u, order_v] {
            if order > 1 {
                return Err(Error::UnsupportedOrder { order });
            }
        }

        let mut pts = self.points.clone();
        let mut mu = self.degree_u;
        let mut nv = self.degree_v;
        if order_u == 1 {
            pts = diff_u(&pts, mu, nv);
            mu -= 1;
        }
        if order_v == 1 {
            pts = diff_v(&pts, mu, nv);
            nv -= 1;
        }
        Ok(eval_raw(&pts, mu, nv, u, v))
    }

    /// Degree-elevated net representing the identical surface.
    pub fn degree_elevate(&self, direction: Direction) -> Result<BezierNet> {
        let (mu, nv) = (self.degree_u, self.degree_v);
        match direction {
            Direction::U => {
                if mu == MAX_DEGREE {
                    return Err(Error::AlreadyCubic);
                }
                let m1 = (mu + 1) as f64;
                let mut pts = Vec::with_capacity((mu + 2) * (nv + 1));
                for i in 0..=mu + 1 {
                    let w = i as f64 / m1;
                    for j in 0..=nv {
                        let prev = if i > 0 { self.point(i - 1, j) } else { Vec3::zeros() };
                        let cur = if i <= mu { self.point(i, j) } else { Vec3::zeros() };
                        pts.push(w * prev + (1.0 - w) * cur);
                    }
                }
                BezierNet::new(mu + 1, nv, pts)
            }
            Direction::V => {
                if nv == MAX_DEGREE {
                    return Err(Error::AlreadyCubic);
                }
                let n1 = (nv + 1) as f64;
                let mut pts = Vec::with_capacity((mu + 1) * (nv + 2));
                for i in 0..=mu {
                    for j in 0..=nv + 1 {
                        let w = j as f64 / n1;
                        let prev = if j > 0 { self.point(i, j - 1) } else { Vec3::zeros() };
                        let cur = if j <= nv { self.point(i, j) } else { Vec3::zeros() };
                        pts.push(w * prev + (1.0 - w) * cur);
                    }
                }
                BezierNet::new(mu, nv + 1, pts)
            }
        }
    }

    /// Elevate until both directions are cubic.
    pub fn elevate_to_bicubic(&self) -> BezierNet {
        let mut net = self.clone();
        while net.degree_u < MAX_DEGREE {
            net = net.degree_elevate(Direction::U).expect("degree < 3");
        }
        while net.degree_v < MAX_DEGREE {
            net = net.degree_elevate(Direction::V).expect("degree < 3");
        }
        net
    }
}

fn eval_raw(points: &[Vec3], mu: usize, nv: usize, u: f64, v: f64) -> Vec3 {
    let mut acc = Vec3::zeros();
    for i in 0..=mu {
        let bu = bernstein(i, mu, u);
        for j in 0..=nv {
            acc += points[i * (nv + 1) + j] * (bu * bernstein(j, nv, v));
        }
    }
    acc
}

/// First-difference net in u: degree drops by one, `q_ij = m (b_{i+1,j} - b_ij)`.
fn diff_u(points: &[Vec3], mu: usize, nv: usize) -> Vec<Vec3> {
    let m = mu as f64;
    let mut out = Vec::with_capacity(mu * (nv + 1));
    for i in 0..mu {
        for j in 0..=nv {
            out.push(m * (points[(i + 1) * (nv + 1) + j] - points[i * (nv + 1) + j]));
        }
    }
    out
}

fn diff_v(points: &[Vec3], mu: usize, nv: usize) -> Vec<Vec3> {
    let n = nv as f64;
    let mut out = Vec::with_capacity((mu + 1) * nv);
    for i in 0..=mu {
        for j in 0..nv {
            out.push(n * (points[i * (nv + 1) + j + 1] - points[i * (nv + 1) + j]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bilinear_flat() -> BezierNet {
        BezierNet::new(
            1,
            1,
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
            ],
        )
        .unwrap()
    }

    /// The saddle p(u,v) = (u, v, uv): bilinear net with b11 lifted to z=1.
    fn saddle() -> BezierNet {
        BezierNet::new(
            1,
            1,
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn bernstein_endpoint_interpolation() {
        assert_eq!(bernstein_basis(0, 3, 0.0).unwrap(), 1.0);
        assert_eq!(bernstein_basis(3, 3, 1.0).unwrap(), 1.0);
        assert_eq!(bernstein_basis(1, 3, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn bernstein_partition_of_unity() {
        for m in 0..=3 {
            let sum: f64 = (0..=m).map(|i| bernstein_basis(i, m, 0.37).unwrap()).sum();
            assert!((sum - 1.0).abs() < 1e-15, "degree {m}: sum = {sum}");
        }
    }

    #[test]
    fn bernstein_midpoint_quadratic() {
        // C(2,1) * 0.5 * 0.5
        assert_eq!(bernstein_basis(1, 2, 0.5).unwrap(), 0.5);
    }

    #[test]
    fn bernstein_rejects_bad_inputs() {
        assert!(matches!(
            bernstein_basis(3, 2, 0.5),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            bernstein_basis(0, 4, 0.5),
            Err(Error::UnsupportedDegree { .. })
        ));
        assert!(matches!(
            bernstein_basis(0, 2, 1.5),
            Err(Error::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn eval_constant_net_is_constant() {
        let c = Vec3::new(2.0, -1.0, 4.0);
        let net = BezierNet::new(3, 2, vec![c; 12]).unwrap();
        for &(u, v) in &[(0.0, 0.0), (0.3, 0.9), (1.0, 0.5)] {
            assert!((net.eval(u, v).unwrap() - c).norm() < 1e-14);
        }
    }

    #[test]
    fn eval_bilinear_linear_precision() {
        let net = bilinear_flat();
        let p = net.eval(0.25, 0.75).unwrap();
        assert!((p - Vec3::new(0.25, 0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_rejects_extrapolation() {
        let net = bilinear_flat();
        assert!(matches!(
            net.eval(1.2, 0.5),
            Err(Error::ParameterOutOfRange { name: "u", .. })
        ));
        assert!(matches!(
            net.eval(0.5, -0.1),
            Err(Error::ParameterOutOfRange { name: "v", .. })
        ));
    }

    #[test]
    fn mixed_partial_of_flat_bilinear_vanishes() {
        let net = bilinear_flat();
        for &(u, v) in &[(0.0, 0.0), (0.5, 0.5), (1.0, 0.3)] {
            assert!(net.partial(u, v, 1, 1).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn mixed_partial_of_saddle() {
        let net = saddle();
        let d = net.partial(0.7, 0.2, 1, 1).unwrap();
        assert!((d - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_order_partial_is_eval() {
        let net = saddle();
        let p = net.eval(0.4, 0.6).unwrap();
        let q = net.partial(0.4, 0.6, 0, 0).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn partial_rejects_higher_orders() {
        let net = saddle();
        assert!(matches!(
            net.partial(0.5, 0.5, 2, 0),
            Err(Error::UnsupportedOrder { order: 2 })
        ));
    }

    #[test]
    fn elevate_linear_segment_midpoint() {
        let net = BezierNet::new(
            1,
            1,
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(3.0, 0.0, 0.0),
                Vec3::new(3.0, 1.0, 0.0),
            ],
        )
        .unwrap();
        let up = net.degree_elevate(Direction::U).unwrap();
        assert_eq!(up.degree_u(), 2);
        assert!((up.point(1, 0) - Vec3::new(1.5, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn elevate_constant_net_stays_constant() {
        let c = Vec3::new(1.0, 2.0, 3.0);
        let net = BezierNet::new(2, 1, vec![c; 6]).unwrap();
        let up = net.degree_elevate(Direction::V).unwrap();
        assert!(up.points().iter().all(|p| (p - c).norm() < 1e-15));
    }

    #[test]
    fn elevate_cubic_is_rejected() {
        let net = BezierNet::new(3, 1, vec![Vec3::zeros(); 8]).unwrap();
        assert!(matches!(
            net.degree_elevate(Direction::U),
            Err(Error::AlreadyCubic)
        ));
    }

    #[test]
    fn elevate_to_bicubic_reaches_3x3() {
        let net = bilinear_flat().elevate_to_bicubic();
        assert_eq!((net.degree_u(), net.degree_v()), (3, 3));
    }

    #[test]
    fn net_construction_validates() {
        assert!(matches!(
            BezierNet::new(0, 1, vec![Vec3::zeros(); 2]),
            Err(Error::UnsupportedDegree { degree: 0 })
        ));
        assert!(matches!(
            BezierNet::new(4, 1, vec![Vec3::zeros(); 10]),
            Err(Error::UnsupportedDegree { degree: 4 })
        ));
        assert!(matches!(
            BezierNet::new(1, 1, vec![Vec3::zeros(); 3]),
            Err(Error::GridSizeMismatch {
                expected: 4,
                actual: 3
            })
        ));
        let mut pts = vec![Vec3::zeros(); 4];
        pts[2].x = f64::NAN;
        assert!(matches!(
            BezierNet::new(1, 1, pts),
            Err(Error::NonFinite { .. })
        ));
    }
}

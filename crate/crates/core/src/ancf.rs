//! ANCF thin-plate surface elements.
//!
//! An element interpolates position over `[0,a] x [0,b]` from nodal
//! 3-vectors with bicubic Hermite shape functions. The full element
//! carries 16 nodal vectors (positions, first slopes, and mixed slopes at
//! the four corners, 48 d.o.f.); the reduced element drops the four mixed
//! slopes (36 d.o.f.).

use crate::bezier::check_unit;
use crate::error::{Error, Result};
use crate::Vec3;

/// One-dimensional Hermite basis on a span of physical length `l`,
/// evaluated at normalized parameter `lambda` in [0,1]:
/// value-at-0, slope-at-0, value-at-1, slope-at-1 weight functions.
/// Slope weights are scaled by `l` so their derivative with respect to
/// the physical coordinate is 1 at their own node.
pub(crate) fn hermite_basis(lambda: f64, l: f64) -> [f64; 4] {
    let q = lambda * lambda;
    let c = q * lambda;
    [
        1.0 - 3.0 * q + 2.0 * c,
        l * (lambda - 2.0 * q + c),
        3.0 * q - 2.0 * c,
        l * (c - q),
    ]
}

/// (u-basis, v-basis) Hermite index pairs for the 16 nodal vectors, in the
/// frozen nodal order: corner (0,0) position, its x-slope, corner (a,0)
/// position, its x-slope, then the y-slope / mixed-slope row, repeated for
/// the `y = b` edge. Basis index 0..3 means value@0, slope@0, value@1,
/// slope@1 in that direction.
pub const NODE_BASIS: [(usize, usize); 16] = [
    (0, 0),
    (1, 0),
    (2, 0),
    (3, 0),
    (0, 1),
    (1, 1),
    (2, 1),
    (3, 1),
    (0, 2),
    (1, 2),
    (2, 2),
    (3, 2),
    (0, 3),
    (1, 3),
    (2, 3),
    (3, 3),
];

/// Nodal indices of the four corner positions (the `r^00` vectors).
pub const POSITION_INDICES: [usize; 4] = [0, 2, 8, 10];

/// Nodal indices of the four mixed-slope vectors (the `r^11` vectors).
pub const MIXED_SLOPE_INDICES: [usize; 4] = [5, 7, 13, 15];

/// Indices of the 12 nodal vectors the reduced element retains, in order.
pub const REDUCED_NODE_INDICES: [usize; 12] = [0, 1, 2, 3, 4, 6, 8, 9, 10, 11, 12, 14];

/// Element corner, named by its `(x, y)` position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    P00,
    Pa0,
    P0b,
    Pab,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::P00, Corner::Pa0, Corner::P0b, Corner::Pab];

    /// Nodal index of this corner's mixed-slope vector.
    pub fn mixed_slope_index(self) -> usize {
        match self {
            Corner::P00 => 5,
            Corner::Pa0 => 7,
            Corner::P0b => 13,
            Corner::Pab => 15,
        }
    }

    /// Nodal index of this corner's position vector.
    pub fn position_index(self) -> usize {
        match self {
            Corner::P00 => 0,
            Corner::Pa0 => 2,
            Corner::P0b => 8,
            Corner::Pab => 10,
        }
    }
}

impl std::fmt::Display for Corner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Corner::P00 => "(0,0)",
            Corner::Pa0 => "(a,0)",
            Corner::P0b => "(0,b)",
            Corner::Pab => "(a,b)",
        };
        f.write_str(s)
    }
}

fn check_dims(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::NonPositiveDims { a, b });
    }
    Ok(())
}

/// The 16 shape-function values at normalized `(xi, eta)`, ordered to match
/// the nodal vector ordering: entry `k` weights nodal vector `k`.
pub fn shape_functions(xi: f64, eta: f64, a: f64, b: f64) -> Result<[f64; 16]> {
    check_unit("xi", xi)?;
    check_unit("eta", eta)?;
    check_dims(a, b)?;
    let su = hermite_basis(xi, a);
    let sv = hermite_basis(eta, b);
    let mut out = [0.0; 16];
    for (k, &(p, q)) in NODE_BASIS.iter().enumerate() {
        out[k] = su[p] * sv[q];
    }
    Ok(out)
}

/// The 12 retained shape-function values of the reduced element.
pub fn shape_functions_reduced(xi: f64, eta: f64, a: f64, b: f64) -> Result<[f64; 12]> {
    let full = shape_functions(xi, eta, a, b)?;
    let mut out = [0.0; 12];
    for (r, &k) in REDUCED_NODE_INDICES.iter().enumerate() {
        out[r] = full[k];
    }
    Ok(out)
}

fn check_nodes(nodes: &[Vec3]) -> Result<()> {
    if nodes.iter().any(|n| !n.iter().all(|c| c.is_finite())) {
        return Err(Error::NonFinite {
            what: "nodal coordinates",
        });
    }
    Ok(())
}

/// Full 48-d.o.f. thin-plate element: 16 nodal 3-vectors over `[0,a] x [0,b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AncfElement48 {
    a: f64,
    b: f64,
    nodes: [Vec3; 16],
}

impl AncfElement48 {
    pub fn new(a: f64, b: f64, nodes: [Vec3; 16]) -> Result<Self> {
        check_dims(a, b)?;
        check_nodes(&nodes)?;
        Ok(Self { a, b, nodes })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn nodes(&self) -> &[Vec3; 16] {
        &self.nodes
    }

    pub fn node(&self, k: usize) -> Vec3 {
        self.nodes[k]
    }

    /// Corner position vector `r^00`.
    pub fn corner_position(&self, corner: Corner) -> Vec3 {
        self.nodes[corner.position_index()]
    }

    /// Norms of the four mixed-slope vectors, by corner.
    pub fn mixed_slope_norms(&self) -> [(Corner, f64); 4] {
        Corner::ALL.map(|c| (c, self.nodes[c.mixed_slope_index()].norm()))
    }

    /// Reference scale: bounding-box diagonal of the corner positions.
    pub fn scale(&self) -> f64 {
        let corners: Vec<Vec3> = POSITION_INDICES.iter().map(|&k| self.nodes[k]).collect();
        crate::geometric_scale(&corners)
    }

    /// Element point at physical coordinates `(x, y)` in `[0,a] x [0,b]`.
    pub fn eval(&self, x: f64, y: f64) -> Result<Vec3> {
        let (xi, eta) = self.normalize(x, y)?;
        let s = shape_functions(xi, eta, self.a, self.b)?;
        Ok(weighted_sum(&s, &self.nodes))
    }

    /// Element point at normalized `(xi, eta)` in the unit square.
    pub fn eval_normalized(&self, xi: f64, eta: f64) -> Result<Vec3> {
        let s = shape_functions(xi, eta, self.a, self.b)?;
        Ok(weighted_sum(&s, &self.nodes))
    }

    fn normalize(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        if !(0.0..=self.a).contains(&x) {
            return Err(Error::ParameterOutOfRange {
                name: "x",
                value: x,
                min: 0.0,
                max: self.a,
            });
        }
        if !(0.0..=self.b).contains(&y) {
            return Err(Error::ParameterOutOfRange {
                name: "y",
                value: y,
                min: 0.0,
                max: self.b,
            });
        }
        Ok((x / self.a, y / self.b))
    }
}

/// Reduced 36-d.o.f. element: the 12 nodal vectors that remain after the
/// mixed slopes are eliminated.
#[derive(Debug, Clone, PartialEq)]
pub struct AncfElement36 {
    a: f64,
    b: f64,
    nodes: [Vec3; 12],
}

impl AncfElement36 {
    pub fn new(a: f64, b: f64, nodes: [Vec3; 12]) -> Result<Self> {
        check_dims(a, b)?;
        check_nodes(&nodes)?;
        Ok(Self { a, b, nodes })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn nodes(&self) -> &[Vec3; 12] {
        &self.nodes
    }

    /// Element point at physical `(x, y)`, using the 12 retained shape
    /// functions.
    pub fn eval(&self, x: f64, y: f64) -> Result<Vec3> {
        if !(0.0..=self.a).contains(&x) {
            return Err(Error::ParameterOutOfRange {
                name: "x",
                value: x,
                min: 0.0,
                max: self.a,
            });
        }
        if !(0.0..=self.b).contains(&y) {
            return Err(Error::ParameterOutOfRange {
                name: "y",
                value: y,
                min: 0.0,
                max: self.b,
            });
        }
        self.eval_normalized(x / self.a, y / self.b)
    }

    pub fn eval_normalized(&self, xi: f64, eta: f64) -> Result<Vec3> {
        let s = shape_functions_reduced(xi, eta, self.a, self.b)?;
        Ok(weighted_sum(&s, &self.nodes))
    }

    /// Embed back into the full element with zero mixed-slope vectors;
    /// the embedded element interpolates the identical surface.
    pub fn to_full_element(&self) -> AncfElement48 {
        let mut nodes = [Vec3::zeros(); 16];
        for (r, &k) in REDUCED_NODE_INDICES.iter().enumerate() {
            nodes[k] = self.nodes[r];
        }
        AncfElement48 {
            a: self.a,
            b: self.b,
            nodes,
        }
    }
}

fn weighted_sum(weights: &[f64], nodes: &[Vec3]) -> Vec3 {
    weights
        .iter()
        .zip(nodes)
        .fold(Vec3::zeros(), |acc, (&w, n)| acc + w * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple_element() -> AncfElement48 {
        // Flat unit plate: positions at the unit-square corners, unit
        // slopes along x and y, zero mixed slopes.
        let mut nodes = [Vec3::zeros(); 16];
        nodes[0] = Vec3::new(0.0, 0.0, 0.0);
        nodes[2] = Vec3::new(1.0, 0.0, 0.0);
        nodes[8] = Vec3::new(0.0, 1.0, 0.0);
        nodes[10] = Vec3::new(1.0, 1.0, 0.0);
        for &k in &[1, 3, 9, 11] {
            nodes[k] = Vec3::new(1.0, 0.0, 0.0);
        }
        for &k in &[4, 6, 12, 14] {
            nodes[k] = Vec3::new(0.0, 1.0, 0.0);
        }
        AncfElement48::new(1.0, 1.0, nodes).unwrap()
    }

    #[test]
    fn cardinality_at_origin() {
        let s = shape_functions(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(s[0], 1.0);
        for (k, &w) in s.iter().enumerate().skip(1) {
            assert_eq!(w, 0.0, "weight {k} should vanish at (0,0)");
        }
    }

    #[test]
    fn position_weights_partition_unity() {
        for &(xi, eta) in &[(0.2, 0.9), (0.5, 0.5), (1.0, 0.0)] {
            let s = shape_functions(xi, eta, 2.0, 3.0).unwrap();
            let sum: f64 = POSITION_INDICES.iter().map(|&k| s[k]).sum();
            assert!((sum - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn midpoint_weights() {
        let s = shape_functions(0.5, 0.5, 1.0, 1.0).unwrap();
        assert!((s[0] - 0.25).abs() < 1e-15);
        assert!((s[1] - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn shape_functions_validate_inputs() {
        assert!(matches!(
            shape_functions(1.5, 0.0, 1.0, 1.0),
            Err(Error::ParameterOutOfRange { name: "xi", .. })
        ));
        assert!(matches!(
            shape_functions(0.5, 0.5, 0.0, 1.0),
            Err(Error::NonPositiveDims { .. })
        ));
    }

    #[test]
    fn eval_interpolates_corners() {
        let e = simple_element();
        assert!((e.eval(0.0, 0.0).unwrap() - e.node(0)).norm() < 1e-15);
        assert!((e.eval(1.0, 0.0).unwrap() - e.node(2)).norm() < 1e-15);
        assert!((e.eval(0.0, 1.0).unwrap() - e.node(8)).norm() < 1e-15);
        assert!((e.eval(1.0, 1.0).unwrap() - e.node(10)).norm() < 1e-15);
    }

    #[test]
    fn flat_element_has_linear_precision() {
        let e = simple_element();
        let p = e.eval(0.25, 0.75).unwrap();
        assert!((p - Vec3::new(0.25, 0.75, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eval_rejects_out_of_range() {
        let e = simple_element();
        assert!(matches!(
            e.eval(1.5, 0.5),
            Err(Error::ParameterOutOfRange { name: "x", .. })
        ));
    }

    #[test]
    fn reduced_zero_element_is_zero() {
        let e = AncfElement36::new(1.0, 2.0, [Vec3::zeros(); 12]).unwrap();
        assert_eq!(e.eval(0.5, 1.0).unwrap(), Vec3::zeros());
    }

    #[test]
    fn reduced_interpolates_corners() {
        let full = simple_element();
        let reduced = crate::conversion::reduce_element(&full, 1e-9).unwrap();
        assert!((reduced.eval(0.0, 0.0).unwrap() - full.node(0)).norm() < 1e-15);
        assert!((reduced.eval(1.0, 1.0).unwrap() - full.node(10)).norm() < 1e-15);
    }

    #[test]
    fn reduced_embeds_into_full() {
        let full = simple_element();
        let reduced = crate::conversion::reduce_element(&full, 1e-9).unwrap();
        let back = reduced.to_full_element();
        assert_eq!(back, full);
    }

    #[test]
    fn rejects_nonpositive_dims() {
        assert!(matches!(
            AncfElement48::new(-1.0, 1.0, [Vec3::zeros(); 16]),
            Err(Error::NonPositiveDims { .. })
        ));
    }
}

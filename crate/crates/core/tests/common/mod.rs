//! Shared oracles and random generators for the integration suites.
//!
//! Everything here is independent of the library's evaluation paths: the
//! de Casteljau recursion, the full-sum recursive B-spline evaluation, and
//! finite differences are the arbiters the implementation is checked
//! against.

#![allow(dead_code)]

use ancf_geom::bezier::BezierNet;
use ancf_geom::bspline::{cox_de_boor, BsplineSurface, KnotVector};
use ancf_geom::Vec3;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut StdRng) -> Vec3 {
    Vec3::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

pub fn random_net(rng: &mut StdRng, degree_u: usize, degree_v: usize) -> BezierNet {
    let pts = (0..(degree_u + 1) * (degree_v + 1))
        .map(|_| random_point(rng))
        .collect();
    BezierNet::new(degree_u, degree_v, pts).unwrap()
}

/// Random bicubic net satisfying the four corner parallelogram conditions.
pub fn random_parallelogram_net(rng: &mut StdRng) -> BezierNet {
    let mut pts: Vec<Vec3> = (0..16).map(|_| random_point(rng)).collect();
    let idx = |i: usize, j: usize| i * 4 + j;
    pts[idx(1, 1)] = pts[idx(1, 0)] + pts[idx(0, 1)] - pts[idx(0, 0)];
    pts[idx(1, 2)] = pts[idx(1, 3)] + pts[idx(0, 2)] - pts[idx(0, 3)];
    pts[idx(2, 1)] = pts[idx(2, 0)] + pts[idx(3, 1)] - pts[idx(3, 0)];
    pts[idx(2, 2)] = pts[idx(2, 3)] + pts[idx(3, 2)] - pts[idx(3, 3)];
    BezierNet::new(3, 3, pts).unwrap()
}

/// Strictly increasing knot vector with random spans, so every basis
/// function is continuous and every span is a segment.
pub fn random_knots(rng: &mut StdRng, len: usize) -> KnotVector {
    let mut knots = Vec::with_capacity(len);
    let mut k = rng.gen_range(-2.0..2.0);
    for _ in 0..len {
        knots.push(k);
        k += rng.gen_range(0.05..1.5);
    }
    KnotVector::new(knots).unwrap()
}

/// Random surface with `seg_u x seg_v` non-degenerate segments.
pub fn random_surface(
    rng: &mut StdRng,
    degree_u: usize,
    degree_v: usize,
    seg_u: usize,
    seg_v: usize,
) -> BsplineSurface {
    let num_u = degree_u + seg_u;
    let num_v = degree_v + seg_v;
    let knots_u = random_knots(rng, num_u + degree_u + 1);
    let knots_v = random_knots(rng, num_v + degree_v + 1);
    let pts = (0..num_u * num_v).map(|_| random_point(rng)).collect();
    BsplineSurface::new(degree_u, degree_v, num_u, num_v, pts, knots_u, knots_v).unwrap()
}

/// Tensor-product de Casteljau evaluation: the reference path for Bezier
/// surfaces.
pub fn de_casteljau(net: &BezierNet, u: f64, v: f64) -> Vec3 {
    let column: Vec<Vec3> = (0..=net.degree_u())
        .map(|i| {
            let row: Vec<Vec3> = (0..=net.degree_v()).map(|j| net.point(i, j)).collect();
            de_casteljau_1d(row, v)
        })
        .collect();
    de_casteljau_1d(column, u)
}

fn de_casteljau_1d(mut pts: Vec<Vec3>, t: f64) -> Vec3 {
    let n = pts.len();
    for r in 1..n {
        for i in 0..n - r {
            pts[i] = (1.0 - t) * pts[i] + t * pts[i + 1];
        }
    }
    pts[0]
}

/// Full-sum surface evaluation through the recursive basis definition.
pub fn eval_full_recursion(surf: &BsplineSurface, u: f64, v: f64) -> Vec3 {
    let mut acc = Vec3::zeros();
    for i in 0..surf.num_u() {
        let nu = cox_de_boor(surf.knots_u(), i, surf.degree_u(), u).unwrap();
        if nu == 0.0 {
            continue;
        }
        for j in 0..surf.num_v() {
            let nv = cox_de_boor(surf.knots_v(), j, surf.degree_v(), v).unwrap();
            if nv != 0.0 {
                acc += surf.point(i, j) * (nu * nv);
            }
        }
    }
    acc
}

/// Centered finite difference of a scalar-to-vector map.
pub fn central_diff<F: Fn(f64) -> Vec3>(f: F, x: f64, h: f64) -> Vec3 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Centered finite difference of a scalar-to-scalar map.
pub fn central_diff_scalar<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Second-order one-sided derivative, stepping into the domain with sign
/// `dir` (+1 forward, -1 backward).
pub fn one_sided_diff<F: Fn(f64) -> Vec3>(f: F, x: f64, h: f64, dir: f64) -> Vec3 {
    let s = dir * h;
    (-3.0 * f(x) + 4.0 * f(x + s) - f(x + 2.0 * s)) / (2.0 * s)
}

/// Relative deviation against `max(1, |reference|)`.
pub fn rel_err(actual: Vec3, reference: Vec3) -> f64 {
    (actual - reference).norm() / reference.norm().max(1.0)
}

pub fn rel_err_scalar(actual: f64, reference: f64) -> f64 {
    (actual - reference).abs() / reference.abs().max(1.0)
}

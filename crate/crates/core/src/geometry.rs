//! Element descriptions and the per-element constants consumed by the
//! moment recursions.
//!
//! An element is parametrized as `r_q(u, v) = v1 + u r_u + v r_v` (triangle)
//! or `r_q(u) = v1 + u r_u` (segment). The frame matrix has columns
//! `(r_u, r_v, n)`; the rows `a_s` of its inverse are the dual vectors, so
//! that `u = a_1 . (r - v1)` and `v = a_2 . (r - v1)` on the element.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

#[inline]
pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Parametric dimension of an element: 1 for segments, 2 for triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dimension {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub v1: Vec3,
    pub v2: Vec3,
    pub v3: Vec3,
}

impl Triangle {
    pub fn new(v1: Vec3, v2: Vec3, v3: Vec3) -> Self {
        Self { v1, v2, v3 }
    }

    pub fn centroid(&self) -> Vec3 {
        scale(&add(&add(&self.v1, &self.v2), &self.v3), 1.0 / 3.0)
    }

    pub fn area(&self) -> f64 {
        0.5 * norm(&cross(&sub(&self.v2, &self.v1), &sub(&self.v3, &self.v1)))
    }

    /// Longest edge length.
    pub fn diameter(&self) -> f64 {
        let e1 = norm(&sub(&self.v2, &self.v1));
        let e2 = norm(&sub(&self.v3, &self.v2));
        let e3 = norm(&sub(&self.v1, &self.v3));
        e1.max(e2).max(e3)
    }

    /// Point at parameters `(u, v)`.
    pub fn point(&self, u: f64, v: f64) -> Vec3 {
        let ru = sub(&self.v2, &self.v1);
        let rv = sub(&self.v3, &self.v1);
        [
            self.v1[0] + u * ru[0] + v * rv[0],
            self.v1[1] + u * ru[1] + v * rv[1],
            self.v1[2] + u * ru[2] + v * rv[2],
        ]
    }

    pub fn translated(&self, t: &Vec3) -> Self {
        Self::new(add(&self.v1, t), add(&self.v2, t), add(&self.v3, t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub v1: Vec3,
    pub v2: Vec3,
}

impl Segment {
    pub fn new(v1: Vec3, v2: Vec3) -> Self {
        Self { v1, v2 }
    }

    pub fn midpoint(&self) -> Vec3 {
        scale(&add(&self.v1, &self.v2), 0.5)
    }

    pub fn length(&self) -> f64 {
        norm(&sub(&self.v2, &self.v1))
    }

    pub fn point(&self, u: f64) -> Vec3 {
        let ru = sub(&self.v2, &self.v1);
        [
            self.v1[0] + u * ru[0],
            self.v1[1] + u * ru[1],
            self.v1[2] + u * ru[2],
        ]
    }

    pub fn translated(&self, t: &Vec3) -> Self {
        Self::new(add(&self.v1, t), add(&self.v2, t))
    }
}

/// Coefficients of an affine function `f(u, v) = u_coef u + v_coef v + constant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine<T> {
    pub u: T,
    pub v: T,
    pub constant: T,
}

impl<T: Copy + std::ops::Add<Output = T>> Affine<T> {
    /// Value at the parameter corner `(1, 0)`.
    pub fn at_u_corner(&self) -> T {
        self.constant + self.u
    }

    /// Value at the parameter corner `(0, 1)`.
    pub fn at_v_corner(&self) -> T {
        self.constant + self.v
    }
}

/// All geometry-derived constants of one element about one expansion center.
///
/// Every vertex is shifted by `-center` before anything else is computed, so
/// the center is the origin of the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementFrame {
    pub dimension: Dimension,
    pub r_u: Vec3,
    /// Zero for segments.
    pub r_v: Vec3,
    pub normal: Vec3,
    /// Rows of the inverse frame matrix.
    pub a_rows: [Vec3; 3],
    /// `a_{s,1} + i a_{s,2}` for `s = 1, 2`.
    pub alpha_plus: [Complex64; 2],
    /// `a_{s,1} - i a_{s,2}` for `s = 1, 2`.
    pub alpha_minus: [Complex64; 2],
    pub a13: f64,
    pub a23: f64,
    /// `a_s . (v1 - center)`.
    pub beta: [f64; 2],
    /// `xi = (x + i y) / 2` over the parameters.
    pub xi: Affine<Complex64>,
    /// `eta = (x - i y) / 2` over the parameters.
    pub eta: Affine<Complex64>,
    pub z: Affine<f64>,
    pub jacobian: f64,
    /// `v1 - center`.
    pub origin: Vec3,
}

fn xi_of(r: &Vec3) -> Complex64 {
    Complex64::new(r[0], r[1]) * 0.5
}

/// Rows of the inverse of the matrix with columns `c1, c2, c3`.
fn dual_rows(c1: &Vec3, c2: &Vec3, c3: &Vec3) -> Option<[Vec3; 3]> {
    let c23 = cross(c2, c3);
    let det = dot(c1, &c23);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let inv = 1.0 / det;
    Some([
        scale(&c23, inv),
        scale(&cross(c3, c1), inv),
        scale(&cross(c1, c2), inv),
    ])
}

impl ElementFrame {
    fn assemble(
        dimension: Dimension,
        origin: Vec3,
        r_u: Vec3,
        r_v: Vec3,
        normal: Vec3,
        a_rows: [Vec3; 3],
        jacobian: f64,
    ) -> Self {
        let alpha = |row: &Vec3, sign: f64| Complex64::new(row[0], sign * row[1]);
        let xi = Affine {
            u: xi_of(&r_u),
            v: xi_of(&r_v),
            constant: xi_of(&origin),
        };
        let eta = Affine {
            u: xi.u.conj(),
            v: xi.v.conj(),
            constant: xi.constant.conj(),
        };
        Self {
            dimension,
            r_u,
            r_v,
            normal,
            alpha_plus: [alpha(&a_rows[0], 1.0), alpha(&a_rows[1], 1.0)],
            alpha_minus: [alpha(&a_rows[0], -1.0), alpha(&a_rows[1], -1.0)],
            a13: a_rows[0][2],
            a23: a_rows[1][2],
            beta: [dot(&a_rows[0], &origin), dot(&a_rows[1], &origin)],
            a_rows,
            xi,
            eta,
            z: Affine {
                u: r_u[2],
                v: r_v[2],
                constant: origin[2],
            },
            jacobian,
            origin,
        }
    }

    /// Frame of a flat triangle about `center`.
    pub fn triangle(tri: &Triangle, center: &Vec3) -> Result<Self> {
        let p1 = sub(&tri.v1, center);
        let p2 = sub(&tri.v2, center);
        let p3 = sub(&tri.v3, center);
        let r_u = sub(&p2, &p1);
        let r_v = sub(&p3, &p1);
        let c = cross(&r_u, &r_v);
        let jacobian = norm(&c);
        let edge = norm(&r_u).max(norm(&r_v)).max(norm(&sub(&p3, &p2)));
        if !(jacobian >= 1e-14 * edge * edge) || jacobian == 0.0 {
            return Err(Error::Degenerate(format!(
                "triangle area element {jacobian:e} below tolerance for edge {edge:e}"
            )));
        }
        let normal = scale(&c, 1.0 / jacobian);
        let a_rows = dual_rows(&r_u, &r_v, &normal)
            .ok_or_else(|| Error::Degenerate("singular triangle frame".into()))?;
        Ok(Self::assemble(
            Dimension::Two,
            p1,
            r_u,
            r_v,
            normal,
            a_rows,
            jacobian,
        ))
    }

    /// Frame of a straight segment about `center`. The two completion vectors
    /// fill the frame matrix; only the first dual row enters the moments, so
    /// any linearly independent completion gives the same results.
    pub fn segment(seg: &Segment, center: &Vec3, completion: Option<(Vec3, Vec3)>) -> Result<Self> {
        let p1 = sub(&seg.v1, center);
        let p2 = sub(&seg.v2, center);
        let r_u = sub(&p2, &p1);
        let length = norm(&r_u);
        if !(length >= 1e-300) {
            return Err(Error::Degenerate(format!("segment length {length:e}")));
        }
        let (w1, w2) = match completion {
            Some(pair) => pair,
            None => default_completion(&r_u),
        };
        let det = dot(&r_u, &cross(&w1, &w2));
        if !(det.abs() > 1e-14 * length * norm(&w1) * norm(&w2)) {
            return Err(Error::Degenerate(
                "segment completion vectors are not linearly independent".into(),
            ));
        }
        let a_rows = dual_rows(&r_u, &w1, &w2)
            .ok_or_else(|| Error::Degenerate("singular segment frame".into()))?;
        let normal = scale(&w2, 1.0 / norm(&w2));
        Ok(Self::assemble(
            Dimension::One,
            p1,
            r_u,
            [0.0; 3],
            normal,
            a_rows,
            length,
        ))
    }

    /// `r_q(u, v) - center`.
    pub fn point(&self, u: f64, v: f64) -> Vec3 {
        [
            self.origin[0] + u * self.r_u[0] + v * self.r_v[0],
            self.origin[1] + u * self.r_u[1] + v * self.r_v[1],
            self.origin[2] + u * self.r_u[2] + v * self.r_v[2],
        ]
    }
}

/// Orthonormal pair perpendicular to `t`, seeded by the axis along which `t`
/// is smallest.
pub fn default_completion(t: &Vec3) -> (Vec3, Vec3) {
    let unit = scale(t, 1.0 / norm(t));
    let axis = (0..3)
        .min_by(|&a, &b| unit[a].abs().total_cmp(&unit[b].abs()))
        .unwrap_or(0);
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    let w = sub(&e, &scale(&unit, dot(&e, &unit)));
    let w1 = scale(&w, 1.0 / norm(&w));
    let w2 = cross(&unit, &w1);
    (w1, w2)
}

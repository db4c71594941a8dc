//! Far-field evaluation of multipole expansions and the direct layer-potential
//! quadratures they are checked against.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::density::PolynomialDensity;
use crate::error::{Error, Result};
use crate::geometry::{cross, dot, norm, scale, sub, Segment, Triangle, Vec3};
use crate::harmonics::{eval_singular, harmonic_count, harmonic_index};
use crate::oracle::{gauss_legendre, triangle_points};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    SingleLayer,
    DoubleLayer,
    Line,
    /// Contraction of a `q`, `j` or `psi` table.
    Intermediate,
}

/// Coefficients `F_n^m` of `sum_n sum_m S_n^m(r_p - r_*) F_n^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoefficients {
    p_s: usize,
    kind: ExpansionKind,
    values: Vec<Complex64>,
}

impl ExpansionCoefficients {
    pub fn zeros(p_s: usize, kind: ExpansionKind) -> Self {
        Self {
            p_s,
            kind,
            values: vec![Complex64::new(0.0, 0.0); harmonic_count(p_s)],
        }
    }

    /// Builds from values in `n^2 + n + m` order.
    pub fn from_values(p_s: usize, kind: ExpansionKind, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != harmonic_count(p_s) {
            return Err(Error::Invalid(format!(
                "expected {} coefficients for degree {p_s}, got {}",
                harmonic_count(p_s),
                values.len()
            )));
        }
        Ok(Self { p_s, kind, values })
    }

    pub fn p_s(&self) -> usize {
        self.p_s
    }

    pub fn kind(&self) -> ExpansionKind {
        self.kind
    }

    pub fn get(&self, n: usize, m: i32) -> Complex64 {
        if n > self.p_s || m.unsigned_abs() as usize > n {
            return Complex64::new(0.0, 0.0);
        }
        self.values[harmonic_index(n, m)]
    }

    pub fn set(&mut self, n: usize, m: i32, value: Complex64) {
        assert!(n <= self.p_s && m.unsigned_abs() as usize <= n);
        self.values[harmonic_index(n, m)] = value;
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Copy truncated to degree `p <= p_s`.
    pub fn truncated(&self, p: usize) -> Self {
        let p = p.min(self.p_s);
        Self {
            p_s: p,
            kind: self.kind,
            values: self.values[..harmonic_count(p)].to_vec(),
        }
    }
}

/// Truncated expansion at `r_p`. The imaginary part is ~0 for real densities.
pub fn eval_expansion(coeffs: &ExpansionCoefficients, r_p: &Vec3, center: &Vec3) -> Result<Complex64> {
    let s = eval_singular(&sub(r_p, center), coeffs.p_s())?;
    Ok(s.values()
        .iter()
        .zip(coeffs.values())
        .map(|(a, b)| a * b)
        .sum())
}

fn check_distance(min_dist: f64, diameter: f64) {
    if min_dist < 0.1 * diameter {
        warn!(
            "evaluation point within {min_dist:e} of the element (diameter {diameter:e}); \
             direct quadrature is inaccurate near the element"
        );
    }
}

/// `int G(r_p, r_q) sigma dS` by collapsed tensor Gauss-Legendre quadrature.
pub fn direct_single_layer(
    tri: &Triangle,
    density: &PolynomialDensity,
    r_p: &Vec3,
    n_g: usize,
) -> Result<Complex64> {
    surface_quadrature(tri, density, r_p, n_g, |d, _| 1.0 / (4.0 * PI * norm(d)))
}

/// `int (n_q . grad_q G) sigma dS`, with `grad_q G = (r_p - r_q) / (4 pi |r_p - r_q|^3)`.
pub fn direct_double_layer(
    tri: &Triangle,
    density: &PolynomialDensity,
    r_p: &Vec3,
    n_g: usize,
) -> Result<Complex64> {
    surface_quadrature(tri, density, r_p, n_g, |d, normal| {
        let r = norm(d);
        // d = r_q - r_p
        -dot(normal, d) / (4.0 * PI * r * r * r)
    })
}

fn surface_quadrature(
    tri: &Triangle,
    density: &PolynomialDensity,
    r_p: &Vec3,
    n_g: usize,
    kernel: impl Fn(&Vec3, &Vec3) -> f64,
) -> Result<Complex64> {
    let c = cross(&sub(&tri.v2, &tri.v1), &sub(&tri.v3, &tri.v1));
    let jacobian = norm(&c);
    if !(jacobian > 0.0) {
        return Err(Error::Degenerate("zero-area triangle".into()));
    }
    let normal = scale(&c, 1.0 / jacobian);
    let rule = gauss_legendre(n_g)?;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut min_dist = f64::INFINITY;
    for (u, v, w) in triangle_points(&rule) {
        let d = sub(&tri.point(u, v), r_p);
        min_dist = min_dist.min(norm(&d));
        acc += density.eval(u, v) * (w * kernel(&d, &normal));
    }
    check_distance(min_dist, tri.diameter());
    Ok(acc * jacobian)
}

/// `int G(r_p, r_q) sigma dLambda` over a segment.
pub fn direct_line_potential(
    seg: &Segment,
    density: &PolynomialDensity,
    r_p: &Vec3,
    n_g: usize,
) -> Result<Complex64> {
    let length = seg.length();
    if !(length > 0.0) {
        return Err(Error::Degenerate("zero-length segment".into()));
    }
    let rule = gauss_legendre(n_g)?;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut min_dist = f64::INFINITY;
    for (u, w) in rule.points() {
        let d = norm(&sub(&seg.point(u), r_p));
        min_dist = min_dist.min(d);
        acc += density.eval(u, 0.0) * (w / (4.0 * PI * d));
    }
    check_distance(min_dist, length);
    Ok(acc * length)
}

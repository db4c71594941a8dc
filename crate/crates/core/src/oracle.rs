//! Brute-force Gauss-Legendre reference for every moment table.
//!
//! The integrands are polynomials in the parameters, so a rule with enough
//! points is exact up to rounding. The triangle is mapped onto the unit
//! square by `v = (1 - u) t`, which adds one to the `u` degree through the
//! Jacobian `1 - u`. Nothing here touches the recursion code.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{cross, norm, scale, sub, Dimension, Segment, Triangle, Vec3};
use crate::harmonics::{eval_regular, normal_gradient_regular};
use crate::table::{density_pairs, MomentTable, TableLabel};

pub const MAX_POINTS: usize = 256;

/// Gauss-Legendre rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points().map(|(x, w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `n`-point Gauss-Legendre rule mapped to `[0, 1]`, nodes ascending.
/// Roots are polished by Newton's method from Chebyshev-like guesses.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_POINTS {
        return Err(Error::Range(format!(
            "Gauss-Legendre point count {n} outside 1..={MAX_POINTS}"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root; mirror it onto the lower half.
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Point count giving exact triangle integrals up to harmonic degree `p_s`
/// and density degree `p_d`.
pub fn default_triangle_points(p_s: usize, p_d: usize) -> usize {
    p_s + p_d + 2
}

pub fn default_segment_points(p_s: usize, p_d: usize) -> usize {
    (p_s + p_d + 1).div_ceil(2) + 1
}

fn unit_normal(tri: &Triangle) -> Result<(Vec3, f64)> {
    let c = cross(&sub(&tri.v2, &tri.v1), &sub(&tri.v3, &tri.v1));
    let j = norm(&c);
    if !(j > 0.0) {
        return Err(Error::Degenerate("zero-area triangle".into()));
    }
    Ok((scale(&c, 1.0 / j), j))
}

/// Collapsed tensor rule on the unit triangle: `(u, v, weight)`.
pub fn triangle_points(rule: &QuadratureRule) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(rule.len() * rule.len());
    for (u, wu) in rule.points() {
        for (t, wt) in rule.points() {
            out.push((u, (1.0 - u) * t, wu * wt * (1.0 - u)));
        }
    }
    out
}

/// `int_T R_n^m(r_q(u, v) - center) u^b v^c dv du` over the unit parameter
/// triangle.
pub fn quad_triangle_moment(
    tri: &Triangle,
    center: &Vec3,
    n: usize,
    m: i32,
    b: usize,
    c: usize,
    n_g: usize,
) -> Result<Complex64> {
    let rule = gauss_legendre(n_g)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (u, v, w) in triangle_points(&rule) {
        let r = sub(&tri.point(u, v), center);
        let h = eval_regular(&r, n);
        acc += h.get(n, m) * (w * u.powi(b as i32) * v.powi(c as i32));
    }
    Ok(acc)
}

/// Raw surface integrals of `R_n^m u^b v^c` and `n_q . grad R_n^m u^b v^c`.
pub fn triangle_integrals(
    tri: &Triangle,
    center: &Vec3,
    p_s: usize,
    p_d: usize,
    n_g: usize,
) -> Result<(MomentTable, MomentTable)> {
    let (normal, _) = unit_normal(tri)?;
    let rule = gauss_legendre(n_g)?;
    let pairs = density_pairs(Dimension::Two, p_d);
    let mut plain = MomentTable::zeros(TableLabel::Psi, Dimension::Two, p_s, p_d);
    let mut grad = MomentTable::zeros(TableLabel::Psi, Dimension::Two, p_s, p_d);
    let mut weights = vec![0.0; pairs.len()];
    for (u, v, w) in triangle_points(&rule) {
        let r = sub(&tri.point(u, v), center);
        let h = eval_regular(&r, p_s);
        let g = if p_s >= 1 {
            Some(normal_gradient_regular(&h, &normal)?)
        } else {
            None
        };
        for (k, &(b, c)) in pairs.iter().enumerate() {
            weights[k] = w * u.powi(b as i32) * v.powi(c as i32);
        }
        for (k, &(b, c)) in pairs.iter().enumerate() {
            for n in 0..=p_s {
                let hv = &h.values()[n * n..n * n + 2 * n + 1];
                for (dst, src) in plain.row_mut(n, b, c).iter_mut().zip(hv) {
                    *dst += src * weights[k];
                }
                if let Some(g) = &g {
                    let gv = &g.values()[n * n..n * n + 2 * n + 1];
                    for (dst, src) in grad.row_mut(n, b, c).iter_mut().zip(gv) {
                        *dst += src * weights[k];
                    }
                }
            }
        }
    }
    Ok((plain, grad))
}

/// Integrals of `R_n^m u^b (1-u)^c` along the hypotenuse `v = 1 - u`.
pub fn edge_integrals(
    tri: &Triangle,
    center: &Vec3,
    p_s: usize,
    p_d: usize,
    n_g: usize,
) -> Result<MomentTable> {
    let rule = gauss_legendre(n_g)?;
    let mut out = MomentTable::zeros(TableLabel::J, Dimension::Two, p_s, p_d);
    for (u, w) in rule.points() {
        let h = eval_regular(&sub(&tri.point(u, 1.0 - u), center), p_s);
        for (b, c) in density_pairs(Dimension::Two, p_d) {
            let wk = w * u.powi(b as i32) * (1.0 - u).powi(c as i32);
            for n in 0..=p_s {
                let hv = &h.values()[n * n..n * n + 2 * n + 1];
                for (dst, src) in out.row_mut(n, b, c).iter_mut().zip(hv) {
                    *dst += src * wk;
                }
            }
        }
    }
    Ok(out)
}

fn to_moments(raw: &MomentTable, jacobian: f64, label: TableLabel) -> MomentTable {
    let mut out = MomentTable::zeros(label, raw.dimension(), raw.p_s(), raw.p_d());
    for (n, m, b, c, _) in raw.entries() {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        out.set(n, m, b, c, raw.get(n, -m, b, c) * (sign * jacobian / (4.0 * PI)));
    }
    out
}

/// Reference `L` and `M` tables with the default exact point count.
pub fn oracle_moments_triangle(
    tri: &Triangle,
    center: &Vec3,
    p_s: usize,
    p_d: usize,
) -> Result<(MomentTable, MomentTable)> {
    oracle_moments_triangle_with(tri, center, p_s, p_d, default_triangle_points(p_s, p_d))
}

pub fn oracle_moments_triangle_with(
    tri: &Triangle,
    center: &Vec3,
    p_s: usize,
    p_d: usize,
    n_g: usize,
) -> Result<(MomentTable, MomentTable)> {
    let (_, jacobian) = unit_normal(tri)?;
    let (plain, grad) = triangle_integrals(tri, center, p_s, p_d, n_g)?;
    Ok((
        to_moments(&plain, jacobian, TableLabel::L),
        to_moments(&grad, jacobian, TableLabel::M),
    ))
}

/// Reference `K` table for a segment.
pub fn oracle_moments_segment(
    seg: &Segment,
    center: &Vec3,
    p_s: usize,
    p_d: usize,
) -> Result<MomentTable> {
    oracle_moments_segment_with(seg, center, p_s, p_d, default_segment_points(p_s, p_d))
}

pub fn oracle_moments_segment_with(
    seg: &Segment,
    center: &Vec3,
    p_s: usize,
    p_d: usize,
    n_g: usize,
) -> Result<MomentTable> {
    let length = seg.length();
    if !(length > 0.0) {
        return Err(Error::Degenerate("zero-length segment".into()));
    }
    let rule = gauss_legendre(n_g)?;
    let mut raw = MomentTable::zeros(TableLabel::J, Dimension::One, p_s, p_d);
    for (u, w) in rule.points() {
        let h = eval_regular(&sub(&seg.point(u), center), p_s);
        for b in 0..=p_d {
            let wk = w * u.powi(b as i32);
            for n in 0..=p_s {
                let hv = &h.values()[n * n..n * n + 2 * n + 1];
                for (dst, src) in raw.row_mut(n, b, 0).iter_mut().zip(hv) {
                    *dst += src * wk;
                }
            }
        }
    }
    Ok(to_moments(&raw, length, TableLabel::K))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rules() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.nodes(), &[0.5]);
        assert!((r.weights()[0] - 1.0).abs() < 1e-16);
        let r = gauss_legendre(2).unwrap();
        let off = 1.0 / (2.0 * 3f64.sqrt());
        assert!((r.nodes()[0] - (0.5 - off)).abs() < 1e-16);
        assert!((r.nodes()[1] - (0.5 + off)).abs() < 1e-16);
        assert!((r.weights()[0] - 0.5).abs() < 1e-15);
        let r = gauss_legendre(3).unwrap();
        assert!((r.integrate(|u| u.powi(5)) - 1.0 / 6.0).abs() < 1e-15);
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(257).is_err());
    }

    #[test]
    fn rule_exactness() {
        for n in [1usize, 2, 5, 16, 33, 64, 128, 256] {
            let r = gauss_legendre(n).unwrap();
            let sum: f64 = r.weights().iter().sum();
            assert!((sum - 1.0).abs() < 1e-14, "n={n} sum={sum}");
            assert!(r.weights().iter().all(|&w| w > 0.0));
            assert!(r.nodes().windows(2).all(|p| p[0] < p[1]));
            for k in 0..(2 * n).min(60) {
                let exact = 1.0 / (k + 1) as f64;
                let got = r.integrate(|u| u.powi(k as i32));
                assert!((got - exact).abs() <= 1e-14 * exact, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn triangle_monomials() {
        let tri = Triangle::new([0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let a = quad_triangle_moment(&tri, &[0.0; 3], 0, 0, 0, 0, 3).unwrap();
        assert!((a.re - 0.5).abs() < 1e-15);
        let a = quad_triangle_moment(&tri, &[0.0; 3], 0, 0, 1, 0, 3).unwrap();
        assert!((a.re - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn degree_zero_oracle() {
        let tri = Triangle::new([0.2, 0.1, 0.0], [0.5, 0.3, 0.1], [0.1, 0.6, -0.2]);
        let (l, m) = oracle_moments_triangle(&tri, &tri.centroid(), 0, 0).unwrap();
        assert!((l.get(0, 0, 0, 0).re - tri.area() / (4.0 * PI)).abs() < 1e-16);
        assert_eq!(m.get(0, 0, 0, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn axis_segment_dipole() {
        let seg = Segment::new([0.0; 3], [0.0, 0.0, 1.0]);
        let k = oracle_moments_segment(&seg, &[0.0; 3], 1, 0).unwrap();
        assert!((k.get(0, 0, 0, 0).re - 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert!((k.get(1, 0, 0, 0).re - 1.0 / (8.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn doubling_points_changes_nothing() {
        let tri = Triangle::new([0.9, 0.05, 0.0], [0.8, 0.12, 0.03], [0.83, -0.07, -0.02]);
        let c = [0.85, 0.0, 0.0];
        let (l1, m1) = oracle_moments_triangle(&tri, &c, 6, 3).unwrap();
        let n_g = 2 * default_triangle_points(6, 3);
        let (l2, m2) = oracle_moments_triangle_with(&tri, &c, 6, 3, n_g).unwrap();
        for (a, b) in [(&l1, &l2), (&m1, &m2)] {
            for n in 0..=6 {
                for (bb, cc) in a.pairs() {
                    let scale = a.row(n, bb, cc).iter().map(|v| v.norm()).fold(0.0, f64::max);
                    for (x, y) in a.row(n, bb, cc).iter().zip(b.row(n, bb, cc)) {
                        assert!((x - y).norm() <= 1e-14 * scale);
                    }
                }
            }
        }
    }
}

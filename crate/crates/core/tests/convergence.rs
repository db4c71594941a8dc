//! Truncation error of the far-field expansion decays geometrically with
//! the rate set by element radius over evaluation distance.

use q2xp::density::PolynomialDensity;
use q2xp::farfield::{direct_line_potential, direct_single_layer, eval_expansion};
use q2xp::geometry::{add, norm, scale, sub, Dimension, Segment};
use q2xp::verify::reference_configuration;
use q2xp::{compute_moments_segment, compute_moments_triangle, contract_density};

/// Least-squares slope of `ln err` against `p`.
fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[test]
fn single_layer_truncation_rate() {
    let (tri, center) = reference_configuration();
    let radius = [tri.v1, tri.v2, tri.v3]
        .iter()
        .map(|v| norm(&sub(v, &center)))
        .fold(0.0, f64::max);
    let dist = 0.4;
    // Direction towards a vertex, in plane: the slowest converging case.
    let rp = add(&center, &scale(&[1.0, 0.0, 0.0], dist));
    let density = PolynomialDensity::from_real(Dimension::Two, 1, &[1.0, 0.5, -0.3]).unwrap();
    let direct = direct_single_layer(&tri, &density, &rp, 60).unwrap();
    let (l, _) = compute_moments_triangle(&tri, &center, 24, 1).unwrap();
    let f = contract_density(&l, &density).unwrap();

    let mut pts = Vec::new();
    for p in 2..=20 {
        let e = eval_expansion(&f.truncated(p), &rp, &center).unwrap();
        let err = (e - direct).norm() / direct.norm();
        pts.push((p as f64, err.ln()));
    }
    let rate = (radius / dist).ln();
    let s = slope(&pts);
    assert!((s - rate).abs() < 0.15, "slope {s}, expected {rate}");
    assert!(pts.last().unwrap().1 < (1e-10f64).ln());
}

#[test]
fn line_potential_truncation_rate() {
    let seg = Segment::new([0.0, 0.0, -0.1], [0.0, 0.0, 0.1]);
    let center = seg.midpoint();
    let dist = 0.5;
    let rp = [0.0, 0.0, dist];
    let density = PolynomialDensity::constant(Dimension::One, 1.0);
    let direct = direct_line_potential(&seg, &density, &rp, 40).unwrap();
    let k = compute_moments_segment(&seg, &center, 24, 0).unwrap();
    let f = contract_density(&k, &density).unwrap();
    // Odd degrees vanish by symmetry, so sample even truncation orders.
    let mut pts = Vec::new();
    for p in (2..=18).step_by(2) {
        let e = eval_expansion(&f.truncated(p), &rp, &center).unwrap();
        pts.push((p as f64, ((e - direct).norm() / direct.norm()).ln()));
    }
    let rate = (0.1f64 / dist).ln();
    let s = slope(&pts);
    assert!((s - rate).abs() < 0.1, "slope {s}, expected {rate}");
}

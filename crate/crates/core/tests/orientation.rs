//! Relabeling the vertices changes the parametrization but not the
//! potential of a density expressed in the new coordinates.

use q2xp::density::PolynomialDensity;
use q2xp::geometry::{Dimension, Segment, Triangle};
use q2xp::verify::max_relative_difference;
use q2xp::{compute_moments_segment, compute_moments_triangle, contract_density, ExpansionCoefficients};

fn tri() -> Triangle {
    Triangle::new([0.31, -0.12, 0.05], [0.44, 0.02, 0.09], [0.27, 0.08, -0.04])
}

const CENTER: [f64; 3] = [0.3, 0.0, 0.0];

fn close(a: &ExpansionCoefficients, b: &ExpansionCoefficients, tol: f64) {
    let scale = a.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (x, y) in a.values().iter().zip(b.values()) {
        assert!((x - y).norm() <= tol * scale, "{x} vs {y}");
    }
}

#[test]
fn swapping_two_vertices_transposes_b_and_c() {
    let t = tri();
    let swapped = Triangle::new(t.v1, t.v3, t.v2);
    let (l, m) = compute_moments_triangle(&t, &CENTER, 10, 5).unwrap();
    let (ls, ms) = compute_moments_triangle(&swapped, &CENTER, 10, 5).unwrap();
    let mut lt = l.clone();
    let mut mt = m.clone();
    for (n, mm, b, c, v) in l.entries() {
        lt.set(n, mm, c, b, v);
    }
    for (n, mm, b, c, v) in m.entries() {
        // Reversed orientation flips the normal.
        mt.set(n, mm, c, b, -v);
    }
    assert!(max_relative_difference(&ls, &lt).value <= 1e-13);
    assert!(max_relative_difference(&ms, &mt).value <= 1e-13);
}

#[test]
fn cyclic_relabeling_preserves_potential() {
    let t = tri();
    let rotated = Triangle::new(t.v2, t.v3, t.v1);
    // Old (u, v) = (1 - u' - v', u'), so 1 + 2u + 3v = 3 + u' - 2v'.
    let sigma = PolynomialDensity::from_real(Dimension::Two, 1, &[1.0, 2.0, 3.0]).unwrap();
    let sigma_rot = PolynomialDensity::from_real(Dimension::Two, 1, &[3.0, 1.0, -2.0]).unwrap();
    let (l, m) = compute_moments_triangle(&t, &CENTER, 12, 1).unwrap();
    let (lr, mr) = compute_moments_triangle(&rotated, &CENTER, 12, 1).unwrap();
    close(&contract_density(&l, &sigma).unwrap(), &contract_density(&lr, &sigma_rot).unwrap(), 1e-13);
    close(&contract_density(&m, &sigma).unwrap(), &contract_density(&mr, &sigma_rot).unwrap(), 1e-13);
}

#[test]
fn reversed_segment() {
    let s = Segment::new([0.1, 0.0, 0.2], [0.25, 0.1, 0.1]);
    let r = Segment::new(s.v2, s.v1);
    let center = [0.2, 0.1, 0.1];
    // u^2 in the old parameter is (1 - u')^2 = 1 - 2u' + u'^2.
    let sigma = PolynomialDensity::from_real(Dimension::One, 2, &[0.0, 0.0, 1.0]).unwrap();
    let sigma_rev = PolynomialDensity::from_real(Dimension::One, 2, &[1.0, -2.0, 1.0]).unwrap();
    let k = compute_moments_segment(&s, &center, 12, 2).unwrap();
    let kr = compute_moments_segment(&r, &center, 12, 2).unwrap();
    close(&contract_density(&k, &sigma).unwrap(), &contract_density(&kr, &sigma_rev).unwrap(), 1e-13);
}

//! Polynomial densities `sigma(u, v) = sum A_b^c u^b v^c` and their
//! superposition onto monomial moment tables.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::farfield::{ExpansionCoefficients, ExpansionKind};
use crate::geometry::Dimension;
use crate::harmonics::harmonic_index;
use crate::table::{density_pairs, pair_count, pair_index, MomentTable, TableLabel};

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialDensity {
    dimension: Dimension,
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl PolynomialDensity {
    /// Coefficients in total-degree order, ascending `c` within a degree:
    /// `1, u, v, u^2, uv, v^2, ...` (for segments, `1, u, u^2, ...`).
    pub fn new(dimension: Dimension, degree: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let expected = pair_count(dimension, degree);
        if coeffs.len() != expected {
            return Err(Error::CoefficientCount {
                degree,
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self {
            dimension,
            degree,
            coeffs,
        })
    }

    pub fn from_real(dimension: Dimension, degree: usize, coeffs: &[f64]) -> Result<Self> {
        Self::new(
            dimension,
            degree,
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn constant(dimension: Dimension, value: f64) -> Self {
        Self {
            dimension,
            degree: 0,
            coeffs: vec![Complex64::new(value, 0.0)],
        }
    }

    /// The single monomial `u^b v^c`.
    pub fn monomial(dimension: Dimension, b: usize, c: usize) -> Self {
        assert!(dimension == Dimension::Two || c == 0);
        let degree = b + c;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); pair_count(dimension, degree)];
        coeffs[pair_index(dimension, b, c)] = Complex64::new(1.0, 0.0);
        Self {
            dimension,
            degree,
            coeffs,
        }
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, b: usize, c: usize) -> Complex64 {
        if b + c > self.degree || (self.dimension == Dimension::One && c > 0) {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[pair_index(self.dimension, b, c)]
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// `(b, c, A_b^c)` for every stored coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        density_pairs(self.dimension, self.degree)
            .into_iter()
            .map(move |(b, c)| (b, c, self.coeff(b, c)))
    }

    pub fn eval(&self, u: f64, v: f64) -> Complex64 {
        self.terms()
            .map(|(b, c, a)| a * (u.powi(b as i32) * v.powi(c as i32)))
            .sum()
    }
}

/// `F_n^m = sum_{b+c <= p_d} A_b^c F_{n,b}^{m,c}`.
pub fn contract_density(
    table: &MomentTable,
    density: &PolynomialDensity,
) -> Result<ExpansionCoefficients> {
    if density.degree() > table.p_d() {
        return Err(Error::DegreeMismatch {
            density: density.degree(),
            table: table.p_d(),
        });
    }
    if density.dimension() != table.dimension() {
        return Err(Error::Invalid(
            "density and moment table belong to different element dimensions".into(),
        ));
    }
    let kind = match table.label() {
        TableLabel::L => ExpansionKind::SingleLayer,
        TableLabel::M => ExpansionKind::DoubleLayer,
        TableLabel::K => ExpansionKind::Line,
        _ => ExpansionKind::Intermediate,
    };
    let p_s = table.p_s();
    let mut out = ExpansionCoefficients::zeros(p_s, kind);
    for (b, c, a) in density.terms() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for n in 0..=p_s {
            for (k, v) in table.row(n, b, c).iter().enumerate() {
                let m = k as i32 - n as i32;
                out.values_mut()[harmonic_index(n, m)] += a * v;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Triangle;
    use crate::moments::compute_moments_triangle;

    #[test]
    fn coefficient_count_checked() {
        assert!(PolynomialDensity::from_real(Dimension::Two, 2, &[1.0; 6]).is_ok());
        assert!(matches!(
            PolynomialDensity::from_real(Dimension::Two, 2, &[1.0; 5]),
            Err(Error::CoefficientCount { expected: 6, .. })
        ));
        assert!(PolynomialDensity::from_real(Dimension::One, 2, &[1.0; 3]).is_ok());
    }

    #[test]
    fn eval_monomials() {
        let d = PolynomialDensity::from_real(Dimension::Two, 2, &[1.0, 2.0, 3.0, 0.0, 5.0, 0.0]).unwrap();
        let (u, v) = (0.3, 0.2);
        let expected = 1.0 + 2.0 * u + 3.0 * v + 5.0 * u * v;
        assert!((d.eval(u, v).re - expected).abs() < 1e-15);
        assert_eq!(PolynomialDensity::monomial(Dimension::Two, 1, 1).coeff(1, 1).re, 1.0);
    }

    #[test]
    fn contraction_is_slice_sum() {
        let tri = Triangle::new([0.9, 0.0, 0.0], [0.8, 0.09, 0.01], [0.8, -0.08, -0.02]);
        let (l, _) = compute_moments_triangle(&tri, &tri.centroid(), 6, 2).unwrap();
        let one = contract_density(&l, &PolynomialDensity::constant(Dimension::Two, 1.0)).unwrap();
        let lin = contract_density(
            &l,
            &PolynomialDensity::from_real(Dimension::Two, 1, &[0.0, 1.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(one.kind(), ExpansionKind::SingleLayer);
        for n in 0..=6 {
            for m in -(n as i32)..=(n as i32) {
                assert_eq!(one.get(n, m), l.get(n, m, 0, 0));
                let sum = l.get(n, m, 1, 0) + l.get(n, m, 0, 1);
                assert!((lin.get(n, m) - sum).norm() <= 1e-18);
            }
        }
        let too_high = PolynomialDensity::monomial(Dimension::Two, 3, 0);
        assert!(matches!(
            contract_density(&l, &too_high),
            Err(Error::DegreeMismatch { .. })
        ));
    }
}

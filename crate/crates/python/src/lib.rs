//! Python bindings: moment tables, harmonics, the quadrature oracle and the
//! far-field checks. Vertices and points are 3-sequences of floats;
//! densities are a degree plus a flat coefficient list in total-degree order
//! (`1, u, v, u^2, uv, v^2, ...`, or `1, u, u^2, ...` for segments).

use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use q2xp::density::PolynomialDensity;
use q2xp::farfield::{self, ExpansionCoefficients, ExpansionKind};
use q2xp::geometry::{Dimension, Segment, Triangle, Vec3};
use q2xp::{harmonics, oracle, verify, Complex64};

fn err(e: q2xp::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn triangle(vertices: [Vec3; 3]) -> Triangle {
    Triangle::new(vertices[0], vertices[1], vertices[2])
}

fn segment(vertices: [Vec3; 2]) -> Segment {
    Segment::new(vertices[0], vertices[1])
}

fn density(dimension: Dimension, degree: usize, coeffs: Vec<Complex64>) -> PyResult<PolynomialDensity> {
    PolynomialDensity::new(dimension, degree, coeffs).map_err(err)
}

/// Table `F_{n,b}^{m,c}` of one kind (`L`, `M` or `K`).
#[pyclass(name = "MomentTable", module = "pyq2xp", frozen)]
pub struct PyMomentTable {
    inner: q2xp::MomentTable,
}

#[pymethods]
impl PyMomentTable {
    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn p_s(&self) -> usize {
        self.inner.p_s()
    }

    #[getter]
    fn p_d(&self) -> usize {
        self.inner.p_d()
    }

    /// `"triangle"` or `"segment"`.
    #[getter]
    fn element(&self) -> &'static str {
        match self.inner.dimension() {
            Dimension::Two => "triangle",
            Dimension::One => "segment",
        }
    }

    /// Entry `(n, m, b, c)`; zero outside the stored range.
    #[pyo3(signature = (n, m, b, c = 0))]
    fn get(&self, n: usize, m: i32, b: usize, c: usize) -> Complex64 {
        self.inner.get(n, m, b, c)
    }

    /// `[(n, m, b, c, value), ...]` in `(n, m, b, c)` order.
    fn to_list(&self) -> Vec<(usize, i32, usize, usize, Complex64)> {
        self.inner.entries().collect()
    }

    /// Expansion coefficients of the density with the given coefficients.
    fn contract(&self, degree: usize, coeffs: Vec<Complex64>) -> PyResult<PyExpansion> {
        let d = density(self.inner.dimension(), degree, coeffs)?;
        q2xp::contract_density(&self.inner, &d)
            .map(|inner| PyExpansion { inner })
            .map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.values().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "MomentTable(label={}, element={}, p_s={}, p_d={})",
            self.label(),
            self.element(),
            self.inner.p_s(),
            self.inner.p_d()
        )
    }
}

/// Coefficients of `sum S_n^m(r_p - center) F_n^m`.
#[pyclass(name = "Expansion", module = "pyq2xp", frozen)]
pub struct PyExpansion {
    inner: ExpansionCoefficients,
}

#[pymethods]
impl PyExpansion {
    #[new]
    fn new(p_s: usize, values: Vec<Complex64>) -> PyResult<Self> {
        ExpansionCoefficients::from_values(p_s, ExpansionKind::Intermediate, values)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[getter]
    fn p_s(&self) -> usize {
        self.inner.p_s()
    }

    fn get(&self, n: usize, m: i32) -> Complex64 {
        self.inner.get(n, m)
    }

    /// Values in `n^2 + n + m` order.
    fn values(&self) -> Vec<Complex64> {
        self.inner.values().to_vec()
    }

    fn truncated(&self, p: usize) -> Self {
        Self {
            inner: self.inner.truncated(p),
        }
    }

    fn evaluate(&self, point: Vec3, center: Vec3) -> PyResult<Complex64> {
        farfield::eval_expansion(&self.inner, &point, &center).map_err(err)
    }
}

#[pyfunction]
fn harmonic_index(n: usize, m: i32) -> PyResult<usize> {
    if m.unsigned_abs() as usize > n {
        return Err(PyIndexError::new_err(format!("|m| = {} exceeds n = {n}", m.abs())));
    }
    Ok(harmonics::harmonic_index(n, m))
}

/// `R_n^m(r)` for `n <= p`, in `n^2 + n + m` order.
#[pyfunction]
fn eval_regular(r: Vec3, p: usize) -> Vec<Complex64> {
    harmonics::eval_regular(&r, p).values().to_vec()
}

/// `S_n^m(r)` for `n <= p`, in `n^2 + n + m` order.
#[pyfunction]
fn eval_singular(r: Vec3, p: usize) -> PyResult<Vec<Complex64>> {
    harmonics::eval_singular(&r, p)
        .map(|t| t.values().to_vec())
        .map_err(err)
}

/// `(L, M)` for a triangle.
#[pyfunction]
fn compute_moments_triangle(
    vertices: [Vec3; 3],
    center: Vec3,
    p_s: usize,
    p_d: usize,
) -> PyResult<(PyMomentTable, PyMomentTable)> {
    let (l, m) = q2xp::compute_moments_triangle(&triangle(vertices), &center, p_s, p_d).map_err(err)?;
    Ok((PyMomentTable { inner: l }, PyMomentTable { inner: m }))
}

/// `K` for a segment.
#[pyfunction]
fn compute_moments_segment(vertices: [Vec3; 2], center: Vec3, p_s: usize, p_d: usize) -> PyResult<PyMomentTable> {
    q2xp::compute_moments_segment(&segment(vertices), &center, p_s, p_d)
        .map(|inner| PyMomentTable { inner })
        .map_err(err)
}

/// Gauss-Legendre reference `(L, M)`; `n_g` defaults to the exact count.
#[pyfunction]
#[pyo3(signature = (vertices, center, p_s, p_d, n_g = None))]
fn oracle_moments_triangle(
    vertices: [Vec3; 3],
    center: Vec3,
    p_s: usize,
    p_d: usize,
    n_g: Option<usize>,
) -> PyResult<(PyMomentTable, PyMomentTable)> {
    let n_g = n_g.unwrap_or_else(|| oracle::default_triangle_points(p_s, p_d));
    let (l, m) =
        oracle::oracle_moments_triangle_with(&triangle(vertices), &center, p_s, p_d, n_g).map_err(err)?;
    Ok((PyMomentTable { inner: l }, PyMomentTable { inner: m }))
}

#[pyfunction]
#[pyo3(signature = (vertices, center, p_s, p_d, n_g = None))]
fn oracle_moments_segment(
    vertices: [Vec3; 2],
    center: Vec3,
    p_s: usize,
    p_d: usize,
    n_g: Option<usize>,
) -> PyResult<PyMomentTable> {
    let n_g = n_g.unwrap_or_else(|| oracle::default_segment_points(p_s, p_d));
    oracle::oracle_moments_segment_with(&segment(vertices), &center, p_s, p_d, n_g)
        .map(|inner| PyMomentTable { inner })
        .map_err(err)
}

/// Max difference normalised per degree `n` by the largest reference entry.
#[pyfunction]
fn max_relative_difference(a: &PyMomentTable, reference: &PyMomentTable) -> PyResult<f64> {
    let (a, r) = (&a.inner, &reference.inner);
    if a.p_s() != r.p_s() || a.p_d() != r.p_d() || a.dimension() != r.dimension() {
        return Err(PyValueError::new_err("tables have different shapes"));
    }
    Ok(verify::max_relative_difference(a, r).value)
}

/// `(nodes, weights)` of the `n`-point rule on `[0, 1]`.
#[pyfunction]
fn gauss_legendre(n: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let rule = oracle::gauss_legendre(n).map_err(err)?;
    Ok((rule.nodes().to_vec(), rule.weights().to_vec()))
}

#[pyfunction]
#[pyo3(signature = (vertices, degree, coeffs, point, n_g = 32))]
fn direct_single_layer(
    vertices: [Vec3; 3],
    degree: usize,
    coeffs: Vec<Complex64>,
    point: Vec3,
    n_g: usize,
) -> PyResult<Complex64> {
    let d = density(Dimension::Two, degree, coeffs)?;
    farfield::direct_single_layer(&triangle(vertices), &d, &point, n_g).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (vertices, degree, coeffs, point, n_g = 32))]
fn direct_double_layer(
    vertices: [Vec3; 3],
    degree: usize,
    coeffs: Vec<Complex64>,
    point: Vec3,
    n_g: usize,
) -> PyResult<Complex64> {
    let d = density(Dimension::Two, degree, coeffs)?;
    farfield::direct_double_layer(&triangle(vertices), &d, &point, n_g).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (vertices, degree, coeffs, point, n_g = 32))]
fn direct_line_potential(
    vertices: [Vec3; 2],
    degree: usize,
    coeffs: Vec<Complex64>,
    point: Vec3,
    n_g: usize,
) -> PyResult<Complex64> {
    let d = density(Dimension::One, degree, coeffs)?;
    farfield::direct_line_potential(&segment(vertices), &d, &point, n_g).map_err(err)
}

#[pymodule]
fn pyq2xp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMomentTable>()?;
    m.add_class::<PyExpansion>()?;
    m.add_function(wrap_pyfunction!(harmonic_index, m)?)?;
    m.add_function(wrap_pyfunction!(eval_regular, m)?)?;
    m.add_function(wrap_pyfunction!(eval_singular, m)?)?;
    m.add_function(wrap_pyfunction!(compute_moments_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(compute_moments_segment, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_moments_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_moments_segment, m)?)?;
    m.add_function(wrap_pyfunction!(max_relative_difference, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_legendre, m)?)?;
    m.add_function(wrap_pyfunction!(direct_single_layer, m)?)?;
    m.add_function(wrap_pyfunction!(direct_double_layer, m)?)?;
    m.add_function(wrap_pyfunction!(direct_line_potential, m)?)?;
    Ok(())
}

//! Verification suite behind the `verify` command: oracle comparison on the
//! reference configuration and on random elements, far-field consistency,
//! and structural invariants.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::{contract_density, PolynomialDensity};
use crate::error::Result;
use crate::farfield::{direct_double_layer, direct_line_potential, direct_single_layer, eval_expansion};
use crate::geometry::{add, cross, norm, scale, sub, Dimension, ElementFrame, Segment, Triangle, Vec3};
use crate::harmonics::{eval_regular, normal_gradient_regular, HarmonicTable};
use crate::moments::{
    compute_moments_segment, compute_moments_triangle, segment_tables, triangle_tables, RecursionMode,
};
use crate::oracle::{oracle_moments_segment, oracle_moments_triangle};
use crate::table::{MomentTable, TableLabel};

pub const ORACLE_THRESHOLD: f64 = 1e-11;
pub const FARFIELD_THRESHOLD: f64 = 1e-10;
pub const MAX_VERIFY_DEGREE: usize = 30;

/// Equilateral triangle of circumradius 0.1 about `(sqrt(3)/2, 0, 0)`, with
/// that point as the expansion center.
pub fn reference_configuration() -> (Triangle, Vec3) {
    let x = 3f64.sqrt() / 2.0;
    let s = 3f64.sqrt() / 2.0;
    let r = 0.1;
    (
        Triangle::new([x + r, 0.0, 0.0], [x - r / 2.0, r * s, 0.0], [x - r / 2.0, -r * s, 0.0]),
        [x, 0.0, 0.0],
    )
}

/// Location of a table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntryIndex {
    pub label: TableLabel,
    pub n: usize,
    pub m: i32,
    pub b: usize,
    pub c: usize,
}

impl fmt::Display for EntryIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[n={}, m={}, b={}, c={}]", self.label, self.n, self.m, self.b, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy {
    pub value: f64,
    pub worst: Option<EntryIndex>,
}

impl Discrepancy {
    pub const ZERO: Discrepancy = Discrepancy { value: 0.0, worst: None };

    pub fn max(self, other: Discrepancy) -> Discrepancy {
        if !self.value.is_nan() && (other.value > self.value || other.value.is_nan()) {
            other
        } else {
            self
        }
    }
}

/// `max |a - ref| / s_n`, where `s_n` is the largest `|ref|` over all
/// `(m, b, c)` at degree `n`. Degrees where the reference vanishes fall
/// back to the absolute difference.
///
/// Individual entries vanish by symmetry (e.g. whole `(n, b, c)` rows for an
/// equilateral triangle about its centroid), so a per-entry ratio would
/// compare rounding noise with rounding noise.
pub fn max_relative_difference(a: &MomentTable, reference: &MomentTable) -> Discrepancy {
    assert_eq!(a.p_s(), reference.p_s());
    assert_eq!(a.p_d(), reference.p_d());
    let pairs = reference.pairs();
    let mut worst = Discrepancy::ZERO;
    for n in 0..=reference.p_s() {
        let s = pairs
            .iter()
            .flat_map(|&(b, c)| reference.row(n, b, c).iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        let s = if s > 0.0 { s } else { 1.0 };
        for &(b, c) in &pairs {
            for (k, (x, y)) in a.row(n, b, c).iter().zip(reference.row(n, b, c)).enumerate() {
                let d = (x - y).norm() / s;
                let cand = Discrepancy {
                    value: d,
                    worst: Some(EntryIndex {
                        label: reference.label(),
                        n,
                        m: k as i32 - n as i32,
                        b,
                        c,
                    }),
                };
                worst = worst.max(cand);
            }
        }
    }
    worst
}

/// Worst violation of `F^{-m} = (-1)^m conj(F^m)`, normalised per degree.
pub fn conjugation_defect(t: &MomentTable) -> Discrepancy {
    let mut mirrored = t.clone();
    for (n, m, b, c, v) in t.entries() {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        mirrored.set(n, -m, b, c, v.conj() * sign);
    }
    max_relative_difference(t, &mirrored)
}

fn harmonics_as_table(h: &HarmonicTable) -> MomentTable {
    slice_as_table(h.degree(), h.values())
}

fn slice_as_table(p: usize, values: &[Complex64]) -> MomentTable {
    let mut t = MomentTable::zeros(TableLabel::Q, Dimension::One, p, 0);
    for n in 0..=p {
        t.row_mut(n, 0, 0).copy_from_slice(&values[n * n..n * n + 2 * n + 1]);
    }
    t
}

/// Triangle with circumradius in `[0.05, 0.2]` in a random plane near the
/// origin; the expansion center lies within 0.1 of the centroid.
pub fn random_triangle(rng: &mut impl Rng) -> (Triangle, Vec3) {
    let g = random_in_cube(rng, 1.0);
    let normal = random_unit(rng);
    let (e1, e2) = crate::geometry::default_completion(&normal);
    let rho = rng.random_range(0.05..=0.2);
    let t0 = rng.random_range(0.0..2.0 * PI);
    let spread = 0.6;
    let angles = [
        t0,
        t0 + 2.0 * PI / 3.0 + rng.random_range(-spread..spread),
        t0 + 4.0 * PI / 3.0 + rng.random_range(-spread..spread),
    ];
    let v = angles.map(|a| add(&g, &add(&scale(&e1, rho * a.cos()), &scale(&e2, rho * a.sin()))));
    let tri = Triangle::new(v[0], v[1], v[2]);
    let center = add(&tri.centroid(), &random_in_ball(rng, 0.1));
    (tri, center)
}

/// Segment of length in `[0.05, 0.4]`; center within 0.1 of the midpoint.
pub fn random_segment(rng: &mut impl Rng) -> (Segment, Vec3) {
    let mid = random_in_cube(rng, 1.0);
    let half = scale(&random_unit(rng), 0.5 * rng.random_range(0.05..=0.4));
    let seg = Segment::new(sub(&mid, &half), add(&mid, &half));
    let center = add(&mid, &random_in_ball(rng, 0.1));
    (seg, center)
}

fn random_in_cube(rng: &mut impl Rng, h: f64) -> Vec3 {
    [0, 1, 2].map(|_| rng.random_range(-h..=h))
}

fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = random_in_cube(rng, 1.0);
        let r = norm(&v);
        if r > 0.1 && r <= 1.0 {
            return scale(&v, 1.0 / r);
        }
    }
}

fn random_in_ball(rng: &mut impl Rng, radius: f64) -> Vec3 {
    loop {
        let v = random_in_cube(rng, radius);
        if norm(&v) <= radius {
            return v;
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub worst: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, d: Discrepancy, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value: d.value,
            threshold,
            worst: d.worst.map(|w| w.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.threshold
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<44} {:>10.3e}  (threshold {:.0e})",
            if self.passed() { "ok" } else { "FAIL" },
            self.name,
            self.value,
            self.threshold
        )?;
        if !self.passed() {
            if let Some(w) = &self.worst {
                write!(f, "  worst at {w}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} of {} checks passed",
            self.checks.len() - failed,
            self.checks.len()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub p_s: usize,
    pub p_d: usize,
    pub seed: u64,
    pub trials: usize,
}

/// Runs the whole suite. Errors only on invalid degrees; the random
/// generators never produce degenerate elements.
pub fn run(config: &VerifyConfig) -> Result<Report> {
    let VerifyConfig { p_s, p_d, seed, trials } = *config;
    if p_s > MAX_VERIFY_DEGREE || p_d > MAX_VERIFY_DEGREE {
        return Err(crate::Error::Range(format!(
            "verification degrees must not exceed {MAX_VERIFY_DEGREE}"
        )));
    }
    let mut checks = reference_checks(p_s, p_d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    checks.extend(random_checks(&mut rng, p_s, p_d, trials)?);
    checks.extend(farfield_checks()?);
    checks.extend(invariant_checks(&mut rng, p_s, p_d)?);
    Ok(Report { checks })
}

/// Reference configuration against the oracle, plus degree-zero closed forms.
pub fn reference_checks(p_s: usize, p_d: usize) -> Result<Vec<Check>> {
    let (tri, center) = reference_configuration();
    let (l, m) = compute_moments_triangle(&tri, &center, p_s, p_d)?;
    let (lo, mo) = oracle_moments_triangle(&tri, &center, p_s, p_d)?;
    let mut out = vec![
        Check::new("reference L vs oracle", max_relative_difference(&l, &lo), ORACLE_THRESHOLD),
        Check::new("reference M vs oracle", max_relative_difference(&m, &mo), ORACLE_THRESHOLD),
    ];

    let area = tri.area();
    let l00 = (l.get(0, 0, 0, 0) - area / (4.0 * PI)).norm() / (area / (4.0 * PI));
    let m0 = (0..=p_d)
        .flat_map(|b| (0..=p_d - b).map(move |c| (b, c)))
        .map(|(b, c)| m.get(0, 0, b, c).norm())
        .fold(0.0, f64::max);
    out.push(Check::new(
        "closed form L00 = area/4pi, M0 = 0",
        Discrepancy { value: l00.max(m0), worst: None },
        1e-15,
    ));
    let seg = Segment::new(tri.v1, tri.v2);
    let k = compute_moments_segment(&seg, &seg.midpoint(), p_s, p_d)?;
    let k00 = seg.length() / (4.0 * PI);
    out.push(Check::new(
        "closed form K00 = length/4pi",
        Discrepancy { value: (k.get(0, 0, 0, 0) - k00).norm() / k00, worst: None },
        1e-15,
    ));
    Ok(out)
}

/// `trials` random triangles and segments against the oracle.
pub fn random_checks(rng: &mut impl Rng, p_s: usize, p_d: usize, trials: usize) -> Result<Vec<Check>> {
    let mut tri_worst = Discrepancy::ZERO;
    let mut tri_at = None;
    let mut seg_worst = Discrepancy::ZERO;
    let mut seg_at = None;
    for trial in 0..trials {
        let (tri, center) = random_triangle(rng);
        let (l, m) = compute_moments_triangle(&tri, &center, p_s, p_d)?;
        let (lo, mo) = oracle_moments_triangle(&tri, &center, p_s, p_d)?;
        let d = max_relative_difference(&l, &lo).max(max_relative_difference(&m, &mo));
        if tri_at.is_none() || d.value > tri_worst.value {
            tri_worst = d;
            tri_at = Some(trial);
        }
        let (seg, center) = random_segment(rng);
        let k = compute_moments_segment(&seg, &center, p_s, p_d)?;
        let ko = oracle_moments_segment(&seg, &center, p_s, p_d)?;
        let d = max_relative_difference(&k, &ko);
        if seg_at.is_none() || d.value > seg_worst.value {
            seg_worst = d;
            seg_at = Some(trial);
        }
    }
    let tag = |at: Option<usize>, d: Discrepancy| d.worst.map(|w| format!("trial {} {w}", at.unwrap_or(0)));
    let mut a = Check::new(format!("{trials} random triangles vs oracle"), tri_worst, ORACLE_THRESHOLD);
    a.worst = tag(tri_at, tri_worst);
    let mut b = Check::new(format!("{trials} random segments vs oracle"), seg_worst, ORACLE_THRESHOLD);
    b.worst = tag(seg_at, seg_worst);
    Ok(vec![a, b])
}

pub const FARFIELD_DEGREE: usize = 20;

/// Densities `1, u, v, uv, u^2 v` in total-degree coefficient order.
pub fn farfield_densities() -> Vec<(&'static str, PolynomialDensity)> {
    let mono = |b, c| PolynomialDensity::monomial(Dimension::Two, b, c);
    vec![
        ("1", mono(0, 0)),
        ("u", mono(1, 0)),
        ("v", mono(0, 1)),
        ("uv", mono(1, 1)),
        ("u^2 v", mono(2, 1)),
    ]
}

/// Unit directions for the far-field evaluation points, off every axis and
/// off the element plane.
pub const FARFIELD_DIRECTIONS: [Vec3; 3] = [[0.6, 0.0, 0.8], [-0.48, 0.6, 0.64], [0.0, -0.6, -0.8]];
pub const FARFIELD_DISTANCES: [f64; 3] = [1.0, 2.0, 3.0];

/// Truncated expansions at degree 20 against direct quadrature, for the
/// reference triangle and a segment along one of its edges.
pub fn farfield_checks() -> Result<Vec<Check>> {
    let (tri, center) = reference_configuration();
    let p_d = 3;
    let (l, m) = compute_moments_triangle(&tri, &center, FARFIELD_DEGREE, p_d)?;
    let n_g = 40;
    let mut single = (0.0f64, String::new());
    let mut double = (0.0f64, String::new());
    for (name, density) in farfield_densities() {
        let fl = contract_density(&l, &density)?;
        let fm = contract_density(&m, &density)?;
        for &dist in &FARFIELD_DISTANCES {
            for dir in &FARFIELD_DIRECTIONS {
                let rp = add(&center, &scale(dir, dist));
                let where_ = format!("density {name}, r_p = {rp:?}");
                let d = direct_single_layer(&tri, &density, &rp, n_g)?;
                let e = eval_expansion(&fl, &rp, &center)?;
                let rel = (e - d).norm() / d.norm();
                if rel > single.0 || single.1.is_empty() {
                    single = (rel, where_.clone());
                }
                let d = direct_double_layer(&tri, &density, &rp, n_g)?;
                let e = eval_expansion(&fm, &rp, &center)?;
                let rel = (e - d).norm() / d.norm();
                if rel > double.0 || double.1.is_empty() {
                    double = (rel, where_);
                }
            }
        }
    }

    let seg = Segment::new(tri.v2, tri.v1);
    let seg_center = seg.midpoint();
    let k = compute_moments_segment(&seg, &seg_center, FARFIELD_DEGREE, p_d)?;
    let mut line = (0.0f64, String::new());
    for b in 0..=p_d {
        let density = PolynomialDensity::monomial(Dimension::One, b, 0);
        let f = contract_density(&k, &density)?;
        for &dist in &FARFIELD_DISTANCES {
            for dir in &FARFIELD_DIRECTIONS {
                let rp = add(&seg_center, &scale(dir, dist));
                let d = direct_line_potential(&seg, &density, &rp, n_g)?;
                let e = eval_expansion(&f, &rp, &seg_center)?;
                let rel = (e - d).norm() / d.norm();
                if rel > line.0 || line.1.is_empty() {
                    line = (rel, format!("density u^{b}, r_p = {rp:?}"));
                }
            }
        }
    }

    let mk = |name: &str, (v, w): (f64, String)| Check {
        name: name.into(),
        value: v,
        threshold: FARFIELD_THRESHOLD,
        worst: Some(w),
    };
    Ok(vec![
        mk("far field single layer", single),
        mk("far field double layer", double),
        mk("far field line potential", line),
    ])
}

/// Structural invariants on one random draw of elements and points.
pub fn invariant_checks(rng: &mut impl Rng, p_s: usize, p_d: usize) -> Result<Vec<Check>> {
    let (tri, center) = random_triangle(rng);
    let frame = ElementFrame::triangle(&tri, &center)?;
    let tables = triangle_tables(&frame, p_s, p_d, RecursionMode::Full);
    let (seg, seg_center) = random_segment(rng);
    let k = compute_moments_segment(&seg, &seg_center, p_s, p_d)?;

    // Conjugation symmetry.
    let r = random_in_cube(rng, 1.0);
    let h = harmonics_as_table(&eval_regular(&r, p_s));
    let conj = [&tables.l, &tables.m, &tables.psi, &k, &h]
        .into_iter()
        .map(conjugation_defect)
        .fold(Discrepancy::ZERO, Discrepancy::max);

    // Reads outside |m| <= n, n <= p_s.
    let mut bad_reads = 0usize;
    for t in [&tables.l, &tables.m, &k] {
        for n in 0..=p_s + 1 {
            for m in [n as i32 + 1, -(n as i32) - 1, n as i32 + 3] {
                if t.get(n, m, 0, 0) != Complex64::new(0.0, 0.0) {
                    bad_reads += 1;
                }
            }
        }
        if t.get(p_s + 1, 0, 0, 0) != Complex64::new(0.0, 0.0) || t.get(0, 0, p_d + 1, 0) != Complex64::new(0.0, 0.0) {
            bad_reads += 1;
        }
    }
    let hr = eval_regular(&r, p_s);
    for n in 0..=p_s {
        if hr.get(n, n as i32 + 1) != Complex64::new(0.0, 0.0) {
            bad_reads += 1;
        }
    }

    // Homogeneity R_n^m(lambda r) = lambda^n R_n^m(r).
    let lambda = rng.random_range(0.5..2.0);
    let scaled = harmonics_as_table(&eval_regular(&scale(&r, lambda), p_s));
    let mut expected = h.clone();
    for (n, m, b, c, v) in h.entries() {
        expected.set(n, m, b, c, v * lambda.powi(n as i32));
    }
    let homog = max_relative_difference(&scaled, &expected);

    // Derivative identities against central differences.
    let fd = finite_difference_defect(&r, p_s.max(1))?;

    // Completion invariance for segments.
    let t = sub(&seg.v2, &seg.v1);
    let completion = loop {
        let a = random_unit(rng);
        let b = random_unit(rng);
        let det = crate::geometry::dot(&t, &cross(&a, &b));
        if det.abs() > 0.1 * norm(&t) {
            break (a, b);
        }
    };
    let alt = ElementFrame::segment(&seg, &seg_center, Some(completion))?;
    let k_alt = segment_tables(&alt, p_s, p_d, RecursionMode::Full).k;
    let completion_defect = max_relative_difference(&k_alt, &k);

    // Translation covariance with dyadic coordinates and shift.
    let translation = translation_mismatches(rng, p_s, p_d)?;

    // q equals the regular harmonics at the (1, 0) corner.
    let direct = eval_regular(&sub(&tri.v2, &center), p_s);
    let mut expected_q = MomentTable::zeros(TableLabel::Q, Dimension::Two, p_s, p_d);
    for (b, c) in expected_q.pairs() {
        if c == 0 {
            for n in 0..=p_s {
                expected_q
                    .row_mut(n, b, c)
                    .copy_from_slice(&direct.values()[n * n..n * n + 2 * n + 1]);
            }
        }
    }
    let q_defect = max_relative_difference(&tables.q, &expected_q);

    let count = |name: &str, v: usize| Check {
        name: name.into(),
        value: v as f64,
        threshold: 0.0,
        worst: None,
    };
    Ok(vec![
        Check::new("conjugation symmetry", conj, 1e-13),
        count("zero reads outside |m| <= n", bad_reads),
        Check::new("homogeneity of R", homog, 1e-13),
        Check::new("derivative identities (finite differences)", fd, 1e-6),
        Check::new("segment completion invariance", completion_defect, 1e-13),
        count("translation covariance (differing entries)", translation),
        Check::new("q vs R at the vertex", q_defect, 1e-12),
    ])
}

/// Compares `d/dx`, `d/dy`, `d/dz` of `R` obtained from the lowered-degree
/// harmonics with central differences of step `1e-6`. The defect at degree
/// `n` is normalised by the largest derivative magnitude at that degree.
pub fn finite_difference_defect(r: &Vec3, p: usize) -> Result<Discrepancy> {
    let h = 1e-6;
    let base = eval_regular(r, p);
    let mut worst = Discrepancy::ZERO;
    for axis in 0..3 {
        let mut e = [0.0; 3];
        e[axis] = 1.0;
        let analytic = harmonics_as_table(&normal_gradient_regular(&base, &e)?);
        let plus = eval_regular(&add(r, &scale(&e, h)), p);
        let minus = eval_regular(&sub(r, &scale(&e, h)), p);
        let fd: Vec<Complex64> = plus
            .values()
            .iter()
            .zip(minus.values())
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect();
        worst = worst.max(max_relative_difference(&slice_as_table(p, &fd), &analytic));
    }
    Ok(worst)
}

/// Number of `L`, `M`, `K` entries that change bitwise when vertices and
/// center are shifted together. Coordinates are multiples of `2^-10` and
/// the shift a multiple of `2^-3`, so every difference is exact.
fn dyadic(rng: &mut impl Rng, k: i64, step: f64) -> Vec3 {
    [0, 1, 2].map(|_| rng.random_range(-k..=k) as f64 * step)
}

pub fn translation_mismatches(rng: &mut impl Rng, p_s: usize, p_d: usize) -> Result<usize> {
    let (tri, center) = loop {
        let v1 = dyadic(rng, 1024, 1.0 / 1024.0);
        let v2 = add(&v1, &dyadic(rng, 200, 1.0 / 1024.0));
        let v3 = add(&v1, &dyadic(rng, 200, 1.0 / 1024.0));
        let tri = Triangle::new(v1, v2, v3);
        if tri.area() > 1e-3 * tri.diameter().powi(2) {
            break (tri, add(&v1, &dyadic(rng, 100, 1.0 / 1024.0)));
        }
    };
    let shift = dyadic(rng, 64, 0.125);
    let (l, m) = compute_moments_triangle(&tri, &center, p_s, p_d)?;
    let (ls, ms) = compute_moments_triangle(&tri.translated(&shift), &add(&center, &shift), p_s, p_d)?;
    let seg = Segment::new(tri.v1, tri.v2);
    let k = compute_moments_segment(&seg, &center, p_s, p_d)?;
    let ks = compute_moments_segment(&seg.translated(&shift), &add(&center, &shift), p_s, p_d)?;
    let diff = |a: &MomentTable, b: &MomentTable| {
        a.values()
            .iter()
            .zip(b.values())
            .filter(|(x, y)| x.re.to_bits() != y.re.to_bits() || x.im.to_bits() != y.im.to_bits())
            .count()
    };
    Ok(diff(&l, &ls) + diff(&m, &ms) + diff(&k, &ks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_difference_uses_degree_scale() {
        let mut a = MomentTable::zeros(TableLabel::L, Dimension::Two, 1, 1);
        let mut b = a.clone();
        b.set(1, 0, 0, 0, Complex64::new(2.0, 0.0));
        a.set(1, 0, 0, 0, Complex64::new(2.0, 0.0));
        a.set(1, 1, 0, 1, Complex64::new(1e-3, 0.0));
        let d = max_relative_difference(&a, &b);
        assert!((d.value - 5e-4).abs() < 1e-18);
        let w = d.worst.unwrap();
        assert_eq!((w.n, w.m, w.b, w.c), (1, 1, 0, 1));

        // Vanishing degree falls back to absolute difference.
        a.set(0, 0, 0, 0, Complex64::new(1e-20, 0.0));
        assert!(max_relative_difference(&a, &b).value >= 5e-4);
    }

    #[test]
    fn random_elements_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (tri, c) = random_triangle(&mut rng);
            let g = tri.centroid();
            assert!(norm(&sub(&c, &g)) <= 0.1);
            // All vertices lie on a circle of radius rho about a point.
            let e = tri.diameter();
            assert!(e <= 0.4 + 1e-12 && e > 0.0);
            assert!(ElementFrame::triangle(&tri, &c).is_ok());
            let (seg, c) = random_segment(&mut rng);
            assert!(norm(&sub(&c, &seg.midpoint())) <= 0.1);
            assert!(seg.length() >= 0.05 - 1e-15 && seg.length() <= 0.4 + 1e-15);
        }
    }

    #[test]
    fn verify_passes_and_is_deterministic() {
        let config = VerifyConfig { p_s: 6, p_d: 3, seed: 11, trials: 5 };
        let a = run(&config).unwrap();
        for c in &a.checks {
            assert!(c.passed(), "{c}");
        }
        let b = run(&config).unwrap();
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn degree_zero_closed_forms() {
        let checks = reference_checks(0, 0).unwrap();
        for c in &checks {
            assert!(c.value < 1e-15, "{c}");
        }
    }

    #[test]
    fn degree_limit() {
        let config = VerifyConfig { p_s: 31, p_d: 2, seed: 0, trials: 1 };
        assert!(run(&config).is_err());
    }
}

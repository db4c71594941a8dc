//! Recursive evaluation of the moment tables.
//!
//! Three tables are built for every `(n, m, b, c)`:
//!
//! * `q`: the integrand `Q = R_n^m(r_q - r_*) u^b v^c` at the corner `(1, 0)`,
//! * `j`: `Q` integrated along the edge `v = 1 - u` (the whole segment for
//!   `d = 1`),
//! * `psi`: `Q` integrated over the unit parameter triangle,
//!
//! each from Euler's homogeneous-function identity for `R_n^m` and the
//! density monomials. The layers `n = 0` come from closed forms in terms of
//! `kappa_{b,c} = int_0^1 u^b (1-u)^c du`; every later layer depends only on
//! layer `n - 1` and on the lower-degree pairs `(b-1, c)`, `(b, c-1)` of the
//! same layer, so a single sweep in `n`, then total degree, then `c`, then
//! `m` resolves all dependencies.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::{Dimension, ElementFrame, Segment, Triangle, Vec3};
use crate::table::{density_pairs, MomentTable, TableLabel};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which `m` entries the recursions evaluate directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RecursionMode {
    /// Every `m` in `-n..=n`.
    #[default]
    Full,
    /// Only `m >= 0`; the rest is filled from `F^{-m} = (-1)^m conj(F^m)`,
    /// which holds for real geometry and real monomial densities.
    ConjugateSymmetric,
}

/// `kappa_{b,c} = int_0^1 u^b (1-u)^c du` for `b + c <= P`.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaTable {
    max_degree: usize,
    values: Vec<f64>,
}

impl KappaTable {
    pub fn new(max_degree: usize) -> Self {
        let at = |b: usize, c: usize| {
            let t = b + c;
            t * (t + 1) / 2 + c
        };
        let mut values = vec![0.0; (max_degree + 1) * (max_degree + 2) / 2];
        // Each total degree t only reads degree t at smaller c.
        for t in 0..=max_degree {
            values[at(t, 0)] = 1.0 / (t + 1) as f64;
            for c in 1..=t {
                let b = t - c;
                values[at(b, c)] = c as f64 / (b + 1) as f64 * values[at(b + 1, c - 1)];
            }
        }
        Self { max_degree, values }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn get(&self, b: usize, c: usize) -> f64 {
        let t = b + c;
        assert!(t <= self.max_degree, "kappa degree {t} above {}", self.max_degree);
        self.values[t * (t + 1) / 2 + c]
    }
}

pub fn kappa_table(max_degree: usize) -> KappaTable {
    KappaTable::new(max_degree)
}

/// Coefficients of one Euler-identity sweep anchored at a point `P` of the
/// parameter domain.
struct Sweep {
    xi: Complex64,
    eta: Complex64,
    z: f64,
    /// Weights of the `(b-1, c)` and `(b, c-1)` reads:
    /// `xi_P alpha_s^- + eta_P alpha_s^+ + z_P a_{s3} - beta_s`.
    lower: [Complex64; 2],
    /// Added to `n + b + c` in the denominator.
    shift: usize,
}

impl Sweep {
    fn anchored(frame: &ElementFrame, xi: Complex64, eta: Complex64, z: f64, shift: usize) -> Self {
        let lower = |s: usize, a3: f64| {
            xi * frame.alpha_minus[s] + eta * frame.alpha_plus[s] + z * a3 - frame.beta[s]
        };
        Self {
            xi,
            eta,
            z,
            lower: [lower(0, frame.a13), lower(1, frame.a23)],
            shift,
        }
    }

    fn run(&self, table: &mut MomentTable, source: Option<&MomentTable>, mode: RecursionMode) {
        let p_s = table.p_s();
        let pairs = density_pairs(table.dimension(), table.p_d());
        let mut buf = vec![ZERO; 2 * p_s + 1];
        for n in 1..=p_s {
            let ni = n as i32;
            for &(b, c) in &pairs {
                let denom = (n + b + c + self.shift) as f64;
                let prev = table.row(n - 1, b, c);
                let read_prev = |m: i32| -> Complex64 {
                    if m.unsigned_abs() as usize >= n {
                        ZERO
                    } else {
                        prev[(m + ni - 1) as usize]
                    }
                };
                let left = (b > 0).then(|| table.row(n, b - 1, c));
                let down = (c > 0).then(|| table.row(n, b, c - 1));
                let src = source.map(|s| s.row(n, b, c));
                let first = match mode {
                    RecursionMode::Full => -ni,
                    RecursionMode::ConjugateSymmetric => 0,
                };
                for m in first..=ni {
                    let k = (m + ni) as usize;
                    let mut acc = I * self.xi * read_prev(m - 1) + I * self.eta * read_prev(m + 1)
                        - read_prev(m) * self.z;
                    if let Some(row) = left {
                        acc += self.lower[0] * row[k] * b as f64;
                    }
                    if let Some(row) = down {
                        acc += self.lower[1] * row[k] * c as f64;
                    }
                    if let Some(row) = src {
                        acc += row[k];
                    }
                    buf[k] = acc / denom;
                }
                if mode == RecursionMode::ConjugateSymmetric {
                    for m in 1..=ni {
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        buf[(ni - m) as usize] = buf[(ni + m) as usize].conj() * sign;
                    }
                }
                table.row_mut(n, b, c).copy_from_slice(&buf[..2 * n + 1]);
            }
        }
    }
}

/// Vertex values `q_{n,b}^{m,c} = Q_{n,b}^{m,c}(1, 0)`.
///
/// Entries with `c >= 1` vanish identically; they are still produced by the
/// recursion and serve as a consistency probe.
pub fn compute_q(frame: &ElementFrame, p_s: usize, p_d: usize, mode: RecursionMode) -> MomentTable {
    let mut q = MomentTable::zeros(TableLabel::Q, frame.dimension, p_s, p_d);
    for (b, c) in density_pairs(frame.dimension, p_d) {
        if c == 0 {
            q.set(0, 0, b, c, Complex64::new(1.0, 0.0));
        }
    }
    Sweep::anchored(
        frame,
        frame.xi.at_u_corner(),
        frame.eta.at_u_corner(),
        frame.z.at_u_corner(),
        0,
    )
    .run(&mut q, None, mode);

    #[cfg(debug_assertions)]
    for n in 0..=p_s {
        let scale = density_pairs(frame.dimension, p_d)
            .into_iter()
            .filter(|&(_, c)| c == 0)
            .flat_map(|(b, c)| q.row(n, b, c).iter().map(|v| v.norm()).collect::<Vec<_>>())
            .fold(0.0, f64::max);
        for (b, c) in density_pairs(frame.dimension, p_d) {
            if c > 0 {
                for v in q.row(n, b, c) {
                    debug_assert!(v.norm() <= 1e-12 * (1.0 + scale), "q_{n},{b}^{c} = {v}");
                }
            }
        }
    }
    q
}

/// Edge integrals `j_{n,b}^{m,c} = int_0^1 Q_{n,b}^{m,c}(u, 1-u) du`; for
/// segments, the integral over the whole segment.
pub fn compute_j(
    frame: &ElementFrame,
    q: &MomentTable,
    p_s: usize,
    p_d: usize,
    mode: RecursionMode,
) -> MomentTable {
    let kappa = KappaTable::new(p_d);
    let mut j = MomentTable::zeros(TableLabel::J, frame.dimension, p_s, p_d);
    for (b, c) in density_pairs(frame.dimension, p_d) {
        j.set(0, 0, b, c, Complex64::new(kappa.get(b, c), 0.0));
    }
    Sweep::anchored(
        frame,
        frame.xi.at_v_corner(),
        frame.eta.at_v_corner(),
        frame.z.at_v_corner(),
        1,
    )
    .run(&mut j, Some(q), mode);
    j
}

/// Surface integrals over the unit parameter triangle,
/// `psi_{n,b}^{m,c} = int_0^1 int_0^{1-u} Q_{n,b}^{m,c} dv du`.
pub fn compute_psi(
    frame: &ElementFrame,
    j: &MomentTable,
    p_s: usize,
    p_d: usize,
    mode: RecursionMode,
) -> MomentTable {
    let kappa = KappaTable::new(p_d + 1);
    let mut psi = MomentTable::zeros(TableLabel::Psi, Dimension::Two, p_s, p_d);
    for (b, c) in density_pairs(Dimension::Two, p_d) {
        let start = kappa.get(b, c + 1) / (c + 1) as f64;
        psi.set(0, 0, b, c, Complex64::new(start, 0.0));
    }
    // The (b-1, c) and (b, c-1) weights vanish identically at the origin
    // (beta_s = a_s . (v1 - r_*)), leaving only the harmonic-lowering reads.
    let sweep = Sweep {
        xi: frame.xi.constant,
        eta: frame.eta.constant,
        z: frame.z.constant,
        lower: [ZERO, ZERO],
        shift: 2,
    };
    sweep.run(&mut psi, Some(j), mode);
    psi
}

fn parity(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `L_{n,b}^{m,c} = J/(4 pi) (-1)^n psi_{n,b}^{-m,c}`.
pub fn assemble_l(psi: &MomentTable, frame: &ElementFrame) -> MomentTable {
    let mut l = MomentTable::zeros(TableLabel::L, psi.dimension(), psi.p_s(), psi.p_d());
    let scale = frame.jacobian / (4.0 * PI);
    for (b, c) in psi.pairs() {
        for n in 0..=psi.p_s() {
            let f = scale * parity(n);
            let src = psi.row(n, b, c);
            let dst = l.row_mut(n, b, c);
            for (k, v) in dst.iter_mut().enumerate() {
                *v = src[2 * n - k] * f;
            }
        }
    }
    l
}

/// `M_{n,b}^{m,c} = J/(4 pi) (-1)^n (n_q . grad)` applied to the `psi`
/// table at order `-m`, using the lowering relations of `R_n^m`.
pub fn assemble_m(psi: &MomentTable, frame: &ElementFrame) -> MomentTable {
    let mut out = MomentTable::zeros(TableLabel::M, psi.dimension(), psi.p_s(), psi.p_d());
    let scale = frame.jacobian / (4.0 * PI);
    let [nx, ny, nz] = frame.normal;
    for (b, c) in psi.pairs() {
        for n in 1..=psi.p_s() {
            let f = scale * parity(n);
            for m in -(n as i32)..=(n as i32) {
                let up = psi.get(n - 1, -m + 1, b, c);
                let down = psi.get(n - 1, -m - 1, b, c);
                let mid = psi.get(n - 1, -m, b, c);
                let l = I * (nx / 2.0) * (up + down) + (ny / 2.0) * (up - down) - mid * nz;
                out.set(n, m, b, c, l * f);
            }
        }
    }
    out
}

/// `K_{n,b}^m = J/(4 pi) (-1)^n j_{n,b}^{-m,0}`.
pub fn assemble_k(j: &MomentTable, frame: &ElementFrame) -> MomentTable {
    assemble_l(j, frame).relabeled(TableLabel::K)
}

/// Every intermediate and final table of a triangle.
#[derive(Debug, Clone)]
pub struct TriangleTables {
    pub q: MomentTable,
    pub j: MomentTable,
    pub psi: MomentTable,
    pub l: MomentTable,
    pub m: MomentTable,
}

#[derive(Debug, Clone)]
pub struct SegmentTables {
    pub q: MomentTable,
    pub j: MomentTable,
    pub k: MomentTable,
}

/// Starting values, then `q`, `j`, `psi`, then `L` and `M`.
pub fn triangle_tables(
    frame: &ElementFrame,
    p_s: usize,
    p_d: usize,
    mode: RecursionMode,
) -> TriangleTables {
    let q = compute_q(frame, p_s, p_d, mode);
    let j = compute_j(frame, &q, p_s, p_d, mode);
    let psi = compute_psi(frame, &j, p_s, p_d, mode);
    let l = assemble_l(&psi, frame);
    let m = assemble_m(&psi, frame);
    TriangleTables { q, j, psi, l, m }
}

pub fn segment_tables(
    frame: &ElementFrame,
    p_s: usize,
    p_d: usize,
    mode: RecursionMode,
) -> SegmentTables {
    let q = compute_q(frame, p_s, p_d, mode);
    let j = compute_j(frame, &q, p_s, p_d, mode);
    let k = assemble_k(&j, frame);
    SegmentTables { q, j, k }
}

/// Single- and double-layer moment tables of a triangle for all
/// `n <= p_s`, `|m| <= n`, `b + c <= p_d`.
pub fn compute_moments_triangle(
    tri: &Triangle,
    center: &Vec3,
    p_s: usize,
    p_d: usize,
) -> Result<(MomentTable, MomentTable)> {
    let frame = ElementFrame::triangle(tri, center)?;
    let t = triangle_tables(&frame, p_s, p_d, RecursionMode::Full);
    Ok((t.l, t.m))
}

/// Line moment table `K` of a segment for all `n <= p_s`, `|m| <= n`,
/// `b <= p_d`.
pub fn compute_moments_segment(
    seg: &Segment,
    center: &Vec3,
    p_s: usize,
    p_d: usize,
) -> Result<MomentTable> {
    let frame = ElementFrame::segment(seg, center, None)?;
    Ok(segment_tables(&frame, p_s, p_d, RecursionMode::Full).k)
}

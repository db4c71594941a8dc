//! Regular and singular solid harmonics.
//!
//! Normalization:
//!
//! ```text
//! R_n^m(r) = (-1)^n i^|m| / (n+|m|)! * r^n P_n^|m|(cos t) e^{i m p}
//! S_n^m(r) = i^-|m| (n-|m|)! * r^{-n-1} P_n^|m|(cos t) e^{i m p}
//! ```
//!
//! with `P_n^m` carrying the Condon-Shortley phase. Both are evaluated from
//! spherical coordinates using Legendre recurrences pre-scaled by the
//! factorial normalization, so no factorial table is ever formed and the
//! regular harmonics cannot overflow at any degree.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{norm, Vec3};

/// Highest degree accepted for singular harmonics (the `(n-|m|)!` growth
/// leaves the double range shortly after this).
pub const MAX_SINGULAR_DEGREE: usize = 150;

const AXIS_TOLERANCE: f64 = 1e-300;

/// Flattened position of `(n, m)` in a harmonic table, `n^2 + n + m`.
#[inline]
pub fn harmonic_index(n: usize, m: i32) -> usize {
    ((n * n + n) as isize + m as isize) as usize
}

/// Number of `(n, m)` entries for degrees `0..=p`.
#[inline]
pub fn harmonic_count(p: usize) -> usize {
    (p + 1) * (p + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicKind {
    Regular,
    Singular,
    /// `n_q . grad R_n^m`, produced by [`normal_gradient_regular`].
    RegularNormalGradient,
}

/// Complex values of a solid harmonic family at one point, for all
/// `0 <= n <= p`, `-n <= m <= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicTable {
    degree: usize,
    kind: HarmonicKind,
    values: Vec<Complex64>,
}

impl HarmonicTable {
    pub(crate) fn zeros(degree: usize, kind: HarmonicKind) -> Self {
        Self {
            degree,
            kind,
            values: vec![Complex64::new(0.0, 0.0); harmonic_count(degree)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> HarmonicKind {
        self.kind
    }

    /// Reads `(n, m)`; entries with `|m| > n` or `n > p` read as zero.
    #[inline]
    pub fn get(&self, n: usize, m: i32) -> Complex64 {
        if n > self.degree || m.unsigned_abs() as usize > n {
            return Complex64::new(0.0, 0.0);
        }
        self.values[harmonic_index(n, m)]
    }

    #[inline]
    pub(crate) fn set(&mut self, n: usize, m: i32, value: Complex64) {
        let idx = harmonic_index(n, m);
        self.values[idx] = value;
    }

    /// Values in `n^2 + n + m` order.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// `P_n^m(mu)` for `0 <= m <= n <= p`, stored at `n(n+1)/2 + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreTable {
    degree: usize,
    argument: f64,
    values: Vec<f64>,
}

impl LegendreTable {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    pub fn get(&self, n: usize, m: usize) -> f64 {
        if n > self.degree || m > n {
            return 0.0;
        }
        self.values[n * (n + 1) / 2 + m]
    }
}

fn clamp_argument(mu: f64) -> Result<f64> {
    if !(mu.abs() <= 1.0 + 1e-12) {
        return Err(Error::Domain { value: mu });
    }
    Ok(mu.clamp(-1.0, 1.0))
}

/// Associated Legendre functions with the Condon-Shortley phase.
pub fn assoc_legendre(mu: f64, p: usize) -> Result<LegendreTable> {
    let mu = clamp_argument(mu)?;
    let s = (1.0 - mu * mu).max(0.0).sqrt();
    let mut values = vec![0.0; (p + 1) * (p + 2) / 2];
    let at = |n: usize, m: usize| n * (n + 1) / 2 + m;

    let mut diag = 1.0;
    for m in 0..=p {
        if m > 0 {
            diag *= -((2 * m - 1) as f64) * s;
        }
        values[at(m, m)] = diag;
        if m < p {
            values[at(m + 1, m)] = (2 * m + 1) as f64 * mu * diag;
        }
        for n in (m + 2)..=p {
            let a = (2 * n - 1) as f64 * mu * values[at(n - 1, m)];
            let b = (n + m - 1) as f64 * values[at(n - 2, m)];
            values[at(n, m)] = (a - b) / (n - m) as f64;
        }
    }
    Ok(LegendreTable {
        degree: p,
        argument: mu,
        values,
    })
}

struct Spherical {
    r: f64,
    cos_theta: f64,
    phi: f64,
}

fn spherical(r: &Vec3) -> Spherical {
    let rho2 = r[0] * r[0] + r[1] * r[1];
    let radius = norm(r);
    let phi = if rho2 < AXIS_TOLERANCE {
        0.0
    } else {
        r[1].atan2(r[0])
    };
    let cos_theta = if radius > 0.0 {
        (r[2] / radius).clamp(-1.0, 1.0)
    } else {
        1.0
    };
    Spherical {
        r: radius,
        cos_theta,
        phi,
    }
}

/// `i^k` for integer `k` (any sign).
#[inline]
fn i_pow(k: i32) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Fills `m >= 0` from `column(n, m)` and the `m < 0` half by conjugation.
fn fill_from_columns(
    table: &mut HarmonicTable,
    sph: &Spherical,
    column: impl Fn(usize, usize) -> f64,
    prefactor: impl Fn(usize, usize) -> Complex64,
) {
    let p = table.degree;
    for m in 0..=p {
        let phase = Complex64::from_polar(1.0, m as f64 * sph.phi);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        for n in m..=p {
            let v = prefactor(n, m) * phase * column(n, m);
            table.set(n, m as i32, v);
            if m > 0 {
                table.set(n, -(m as i32), v.conj() * sign);
            }
        }
    }
}

/// Regular solid harmonics `R_n^m(r)` for `n <= p`. At `r = 0` returns the
/// limit values.
pub fn eval_regular(r: &Vec3, p: usize) -> HarmonicTable {
    let mut table = HarmonicTable::zeros(p, HarmonicKind::Regular);
    let sph = spherical(r);
    if sph.r == 0.0 {
        table.set(0, 0, Complex64::new(1.0, 0.0));
        return table;
    }
    let mu = sph.cos_theta;
    let s = (1.0 - mu * mu).max(0.0).sqrt();

    // scaled[n][m] = r^n P_n^m(mu) / (n+m)!
    let at = |n: usize, m: usize| n * (n + 1) / 2 + m;
    let mut scaled = vec![0.0; (p + 1) * (p + 2) / 2];
    let mut diag = 1.0;
    for m in 0..=p {
        if m > 0 {
            diag *= -s * sph.r / (2 * m) as f64;
        }
        scaled[at(m, m)] = diag;
        if m < p {
            scaled[at(m + 1, m)] = mu * sph.r * diag;
        }
        for n in (m + 2)..=p {
            let a = (2 * n - 1) as f64 * mu * sph.r * scaled[at(n - 1, m)];
            let b = sph.r * sph.r * scaled[at(n - 2, m)];
            scaled[at(n, m)] = (a - b) / ((n - m) * (n + m)) as f64;
        }
    }

    fill_from_columns(
        &mut table,
        &sph,
        |n, m| scaled[at(n, m)],
        |n, m| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            i_pow(m as i32) * sign
        },
    );
    table
}

/// Singular solid harmonics `S_n^m(r)` for `n <= p`.
pub fn eval_singular(r: &Vec3, p: usize) -> Result<HarmonicTable> {
    if p > MAX_SINGULAR_DEGREE {
        return Err(Error::Degree {
            degree: p,
            reason: "singular harmonics are limited to degree 150",
        });
    }
    let sph = spherical(r);
    if !(sph.r >= 1e-300) {
        return Err(Error::Singular { radius: sph.r });
    }
    let mut table = HarmonicTable::zeros(p, HarmonicKind::Singular);
    let mu = sph.cos_theta;
    let s = (1.0 - mu * mu).max(0.0).sqrt();
    let inv_r = 1.0 / sph.r;

    // scaled[n][m] = (n-m)! P_n^m(mu) r^{-n-1}
    let at = |n: usize, m: usize| n * (n + 1) / 2 + m;
    let mut scaled = vec![0.0; (p + 1) * (p + 2) / 2];
    let mut diag = inv_r;
    for m in 0..=p {
        if m > 0 {
            diag *= -((2 * m - 1) as f64) * s * inv_r;
        }
        scaled[at(m, m)] = diag;
        if m < p {
            scaled[at(m + 1, m)] = (2 * m + 1) as f64 * mu * inv_r * diag;
        }
        for n in (m + 2)..=p {
            let a = (2 * n - 1) as f64 * mu * inv_r * scaled[at(n - 1, m)];
            let b = ((n + m - 1) * (n - m - 1)) as f64 * inv_r * inv_r * scaled[at(n - 2, m)];
            scaled[at(n, m)] = a - b;
        }
    }

    fill_from_columns(
        &mut table,
        &sph,
        |n, m| scaled[at(n, m)],
        |_, m| i_pow(-(m as i32)),
    );
    Ok(table)
}

/// `n_q . grad R_n^m` from a regular table, using
/// `d/d eta R_n^m = i R_{n-1}^{m+1}`, `d/d xi R_n^m = i R_{n-1}^{m-1}` and
/// `d/dz R_n^m = -R_{n-1}^m`. Row `n = 0` is zero.
pub fn normal_gradient_regular(table: &HarmonicTable, normal: &Vec3) -> Result<HarmonicTable> {
    if table.kind != HarmonicKind::Regular {
        return Err(Error::Invalid(
            "normal gradient requires a regular harmonic table".into(),
        ));
    }
    if table.degree < 1 {
        return Err(Error::Degree {
            degree: table.degree,
            reason: "normal gradient needs degree >= 1",
        });
    }
    if (norm(normal) - 1.0).abs() > 1e-12 {
        return Err(Error::Invalid(format!(
            "normal must be a unit vector, |n| = {}",
            norm(normal)
        )));
    }
    let (nx, ny, nz) = (normal[0], normal[1], normal[2]);
    let i = Complex64::new(0.0, 1.0);
    let p = table.degree;
    let mut out = HarmonicTable::zeros(p, HarmonicKind::RegularNormalGradient);
    for n in 1..=p {
        for m in -(n as i32)..=(n as i32) {
            let up = table.get(n - 1, m + 1);
            let down = table.get(n - 1, m - 1);
            let mid = table.get(n - 1, m);
            let v = i * (nx / 2.0) * (up + down) + (ny / 2.0) * (up - down) - nz * mid;
            out.set(n, m, v);
        }
    }
    Ok(out)
}

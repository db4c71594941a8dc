//! Timing harness for `compute_moments_triangle` and the power-law fit
//! `t = C p_s^alpha p_d^beta`.

use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::compute_moments_triangle;
use crate::verify::reference_configuration;

pub const MAX_BENCH_DEGREE: usize = 40;
pub const GRID_STEP: usize = 4;

/// Batches shorter than this are grown so the clock resolution stays
/// negligible.
const MIN_BATCH_SECONDS: f64 = 2e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub p_s: usize,
    pub p_d: usize,
    /// Minimum over repeats of the mean time per call within a batch.
    pub seconds: f64,
    pub repeats: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub log_c: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PowerLawFit {
    pub fn predict(&self, p_s: usize, p_d: usize) -> f64 {
        (self.log_c + self.alpha * (p_s as f64).ln() + self.beta * (p_d as f64).ln()).exp()
    }
}

/// `{4, 8, ..., p_max}`.
pub fn grid(p_max: usize) -> Vec<usize> {
    (1..=p_max / GRID_STEP).map(|k| k * GRID_STEP).collect()
}

/// Time per call of `compute_moments_triangle` on the reference triangle,
/// minimum over `repeats` batches.
pub fn time_triangle(p_s: usize, p_d: usize, repeats: usize) -> Result<f64> {
    let (tri, center) = reference_configuration();
    let run = || compute_moments_triangle(black_box(&tri), black_box(&center), p_s, p_d);
    run()?;

    let mut batch = 1usize;
    loop {
        let t0 = Instant::now();
        for _ in 0..batch {
            black_box(run()?);
        }
        if t0.elapsed().as_secs_f64() >= MIN_BATCH_SECONDS || batch >= 1 << 20 {
            break;
        }
        batch *= 2;
    }

    let mut best = f64::INFINITY;
    for _ in 0..repeats.max(1) {
        let t0 = Instant::now();
        for _ in 0..batch {
            black_box(run()?);
        }
        best = best.min(t0.elapsed().as_secs_f64() / batch as f64);
    }
    Ok(best)
}

/// Single-threaded sweep over `grid(p_max)` in both degrees.
pub fn run_bench(p_max: usize, repeats: usize) -> Result<Vec<BenchRecord>> {
    if p_max > MAX_BENCH_DEGREE {
        return Err(Error::Range(format!(
            "benchmark degree {p_max} exceeds {MAX_BENCH_DEGREE}"
        )));
    }
    let g = grid(p_max);
    if g.is_empty() {
        return Err(Error::Range(format!(
            "benchmark grid is empty for p_max = {p_max} (needs p_max >= {GRID_STEP})"
        )));
    }
    let mut out = Vec::with_capacity(g.len() * g.len());
    for &p_s in &g {
        for &p_d in &g {
            let seconds = time_triangle(p_s, p_d, repeats)?;
            log::debug!("p_s = {p_s}, p_d = {p_d}: {seconds:e} s");
            out.push(BenchRecord { p_s, p_d, seconds, repeats });
        }
    }
    Ok(out)
}

/// Least squares for `ln t = ln C + alpha ln p_s + beta ln p_d`.
pub fn fit_power_law(records: &[BenchRecord]) -> Result<PowerLawFit> {
    if records.iter().any(|r| !(r.seconds > 0.0) || r.p_s == 0 || r.p_d == 0) {
        return Err(Error::Invalid("fit needs positive times and degrees".into()));
    }
    let n = records.len() as f64;
    let pts: Vec<(f64, f64, f64)> = records
        .iter()
        .map(|r| ((r.p_s as f64).ln(), (r.p_d as f64).ln(), r.seconds.ln()))
        .collect();
    let mean = |f: fn(&(f64, f64, f64)) -> f64| pts.iter().map(f).sum::<f64>() / n;
    let (mx, my, mt) = (mean(|p| p.0), mean(|p| p.1), mean(|p| p.2));
    let (mut sxx, mut syy, mut sxy, mut sxt, mut syt) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y, t) in &pts {
        let (x, y, t) = (x - mx, y - my, t - mt);
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
        sxt += x * t;
        syt += y * t;
    }
    let det = sxx * syy - sxy * sxy;
    if !(det.abs() > 1e-12 * (sxx * syy).max(f64::MIN_POSITIVE)) {
        return Err(Error::Invalid(
            "fit needs at least two distinct values of each degree".into(),
        ));
    }
    let alpha = (sxt * syy - syt * sxy) / det;
    let beta = (syt * sxx - sxt * sxy) / det;
    Ok(PowerLawFit {
        log_c: mt - alpha * mx - beta * my,
        alpha,
        beta,
    })
}

pub fn write_csv(records: &[BenchRecord], writer: impl Write) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["p_s", "p_d", "seconds"])?;
    for r in records {
        w.write_record([r.p_s.to_string(), r.p_d.to_string(), r.seconds.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values() {
        assert_eq!(grid(16), vec![4, 8, 12, 16]);
        assert_eq!(grid(18), vec![4, 8, 12, 16]);
        assert!(grid(3).is_empty());
        assert!(run_bench(44, 1).is_err());
        assert!(run_bench(2, 1).is_err());
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        let mut recs = Vec::new();
        for &p_s in &[4, 8, 12, 16] {
            for &p_d in &[4, 8, 12] {
                let seconds = 3e-7 * (p_s as f64).powf(1.9) * (p_d as f64).powf(2.2);
                recs.push(BenchRecord { p_s, p_d, seconds, repeats: 1 });
            }
        }
        let fit = fit_power_law(&recs).unwrap();
        assert!((fit.alpha - 1.9).abs() < 1e-12);
        assert!((fit.beta - 2.2).abs() < 1e-12);
        assert!((fit.log_c - 3e-7f64.ln()).abs() < 1e-10);
        assert!((fit.predict(8, 8) / recs[4].seconds - 1.0).abs() < 1e-12);
        assert!(fit_power_law(&recs[..1]).is_err());
    }

    #[test]
    fn csv_layout() {
        let recs = [BenchRecord { p_s: 4, p_d: 8, seconds: 1.5e-5, repeats: 3 }];
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "p_s,p_d,seconds\n4,8,0.000015\n");
    }

    #[test]
    fn timing_is_positive() {
        assert!(time_triangle(4, 4, 2).unwrap() > 0.0);
    }
}

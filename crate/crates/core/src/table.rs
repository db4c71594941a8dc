//! Dense storage for four-index moment tables `F_{n,b}^{m,c}`.
//!
//! Layout: `pair(b, c) * (p_s + 1)^2 + (n^2 + n + m)`, with density pairs in
//! total-degree order and ascending `c` inside each degree. Segment tables
//! only hold `c = 0`, so their pair index is just `b`.

use std::fmt;

use num_complex::Complex64;

pub use crate::geometry::Dimension;
use crate::harmonics::{harmonic_count, harmonic_index};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableLabel {
    /// Vertex values `Q(1, 0)`.
    Q,
    /// Integrals along the edge `v = 1 - u`.
    J,
    /// Integrals over the parameter triangle.
    Psi,
    /// Single-layer moments.
    L,
    /// Double-layer moments.
    M,
    /// Segment moments.
    K,
}

impl fmt::Display for TableLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TableLabel::Q => "q",
            TableLabel::J => "j",
            TableLabel::Psi => "psi",
            TableLabel::L => "L",
            TableLabel::M => "M",
            TableLabel::K => "K",
        };
        f.write_str(s)
    }
}

/// Number of density monomials of total degree `<= p_d`.
pub fn pair_count(dimension: Dimension, p_d: usize) -> usize {
    match dimension {
        Dimension::One => p_d + 1,
        Dimension::Two => (p_d + 1) * (p_d + 2) / 2,
    }
}

/// Position of `u^b v^c` in total-degree order.
#[inline]
pub fn pair_index(dimension: Dimension, b: usize, c: usize) -> usize {
    match dimension {
        Dimension::One => b,
        Dimension::Two => {
            let t = b + c;
            t * (t + 1) / 2 + c
        }
    }
}

/// All `(b, c)` pairs in storage order.
pub fn density_pairs(dimension: Dimension, p_d: usize) -> Vec<(usize, usize)> {
    match dimension {
        Dimension::One => (0..=p_d).map(|b| (b, 0)).collect(),
        Dimension::Two => (0..=p_d)
            .flat_map(|t| (0..=t).map(move |c| (t - c, c)))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    label: TableLabel,
    dimension: Dimension,
    p_s: usize,
    p_d: usize,
    values: Vec<Complex64>,
}

impl MomentTable {
    pub fn zeros(label: TableLabel, dimension: Dimension, p_s: usize, p_d: usize) -> Self {
        let len = harmonic_count(p_s) * pair_count(dimension, p_d);
        Self {
            label,
            dimension,
            p_s,
            p_d,
            values: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn label(&self) -> TableLabel {
        self.label
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn p_s(&self) -> usize {
        self.p_s
    }

    pub fn p_d(&self) -> usize {
        self.p_d
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        density_pairs(self.dimension, self.p_d)
    }

    fn in_range(&self, n: usize, m: i32, b: usize, c: usize) -> bool {
        n <= self.p_s
            && m.unsigned_abs() as usize <= n
            && b + c <= self.p_d
            && (self.dimension == Dimension::Two || c == 0)
    }

    /// Offset of the `(n, b, c)` row; `m` runs contiguously from `-n` to `n`.
    #[inline]
    pub(crate) fn row_offset(&self, n: usize, b: usize, c: usize) -> usize {
        pair_index(self.dimension, b, c) * harmonic_count(self.p_s) + n * n
    }

    #[inline]
    fn offset(&self, n: usize, m: i32, b: usize, c: usize) -> usize {
        pair_index(self.dimension, b, c) * harmonic_count(self.p_s) + harmonic_index(n, m)
    }

    /// Entry `(n, m, b, c)`; anything outside the stored index range,
    /// in particular `|m| > n`, reads as exactly zero.
    #[inline]
    pub fn get(&self, n: usize, m: i32, b: usize, c: usize) -> Complex64 {
        if !self.in_range(n, m, b, c) {
            return Complex64::new(0.0, 0.0);
        }
        self.values[self.offset(n, m, b, c)]
    }

    /// # Panics
    /// If the index is outside the stored range.
    pub fn set(&mut self, n: usize, m: i32, b: usize, c: usize, value: Complex64) {
        assert!(self.in_range(n, m, b, c), "index ({n},{m},{b},{c}) out of range");
        let k = self.offset(n, m, b, c);
        self.values[k] = value;
    }

    /// The `2n + 1` entries of row `(n, b, c)`, ordered by `m = -n..=n`.
    pub fn row(&self, n: usize, b: usize, c: usize) -> &[Complex64] {
        let start = self.row_offset(n, b, c);
        &self.values[start..start + 2 * n + 1]
    }

    pub(crate) fn row_mut(&mut self, n: usize, b: usize, c: usize) -> &mut [Complex64] {
        let start = self.row_offset(n, b, c);
        &mut self.values[start..start + 2 * n + 1]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Iterates `(n, m, b, c, value)` in `(n, m, b, c)` lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, i32, usize, usize, Complex64)> + '_ {
        let pairs = {
            let mut p = self.pairs();
            p.sort();
            p
        };
        (0..=self.p_s).flat_map(move |n| {
            let pairs = pairs.clone();
            (-(n as i32)..=(n as i32)).flat_map(move |m| {
                pairs
                    .clone()
                    .into_iter()
                    .map(move |(b, c)| (n, m, b, c, self.get(n, m, b, c)))
            })
        })
    }

    /// Largest magnitude among the entries.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn relabeled(mut self, label: TableLabel) -> Self {
        self.label = label;
        self
    }
}

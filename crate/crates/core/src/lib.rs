//! Analytic multipole moments of regular solid harmonics over flat triangles
//! and straight segments carrying polynomial densities.
//!
//! The moments are produced by three coupled recursions (vertex values,
//! edge integrals, surface integrals) seeded from Beta-function integrals,
//! with cost `O(p_s^2 p_d^d)` per element. A Gauss-Legendre oracle and a
//! far-field potential check live alongside for verification.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod density;
pub mod error;
pub mod farfield;
pub mod geometry;
pub mod harmonics;
pub mod input;
pub mod moments;
pub mod oracle;
pub mod table;
pub mod verify;

pub use density::{contract_density, PolynomialDensity};
pub use error::{Error, Result};
pub use farfield::{ExpansionCoefficients, ExpansionKind};
pub use geometry::{ElementFrame, Segment, Triangle, Vec3};
pub use harmonics::{HarmonicKind, HarmonicTable, LegendreTable};
pub use moments::{
    compute_moments_segment, compute_moments_triangle, KappaTable, RecursionMode, SegmentTables,
    TriangleTables,
};
pub use table::{Dimension, MomentTable, TableLabel};

pub use num_complex::Complex64;

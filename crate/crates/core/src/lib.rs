//! Pseudospectral tools for the fractional Keller-Segel system
//! `∂t u + Λ^α u + ∇·(u∇ψ) = 0`, `-Δψ = u`, on a periodic box.

// `!(x > 0)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ensemble;
mod error;
pub mod fit;
pub mod gevrey;
pub mod littlewood_paley;
pub mod scalar;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use littlewood_paley::{BesovParams, DyadicFilterBank};
pub use spectral::{Grid, MultiplierSpec, SpectralField};

pub type Grid64 = Grid<f64>;
pub type Grid32 = Grid<f32>;
pub type Field64 = SpectralField<f64>;
pub type Field32 = SpectralField<f32>;
pub type Bank64 = DyadicFilterBank<f64>;

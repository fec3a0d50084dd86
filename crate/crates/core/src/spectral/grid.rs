use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::{Error, Result, Scalar};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

/// Forward/inverse 1-D FFT plans of a fixed length, shared by all axes.
pub(crate) struct FftPlans<T: Scalar> {
    pub(crate) forward: Arc<dyn Fft<T>>,
    pub(crate) inverse: Arc<dyn Fft<T>>,
}

impl<T: Scalar> FftPlans<T> {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }
}

/// Integer wave index `k ∈ ℤⁿ` of a stored mode. Unused trailing axes are 0.
pub type WaveIndex = [i64; MAX_DIM];

/// Periodic torus `[0, period)ⁿ` sampled with `points_per_axis` points per
/// axis, together with its truncated frequency lattice `ξ = (2π/period)·k`.
///
/// Storage is row-major with the last axis fastest. Along every axis the FFT
/// ordering is used: indices `0..N/2` map to `k = 0..N/2` and `N/2+1..N` map
/// to `k = -N/2+1..-1`; index `N/2` is the Nyquist mode, stored as `k = -N/2`.
#[derive(Clone)]
pub struct Grid<T: Scalar> {
    dim: usize,
    n: usize,
    period: T,
    plans: Arc<FftPlans<T>>,
}

impl<T: Scalar> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("points_per_axis", &self.n)
            .field("period", &self.period)
            .finish()
    }
}

impl<T: Scalar> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n == other.n && self.period == other.period
    }
}

impl<T: Scalar> Grid<T> {
    /// Build a grid; `points_per_axis` must be even and at least 8.
    pub fn new(dim: usize, points_per_axis: usize, period: T) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::Config(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if !points_per_axis.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "points per axis must be even, got {points_per_axis}"
            )));
        }
        if points_per_axis < 8 {
            return Err(Error::Config(format!(
                "points per axis must be at least 8, got {points_per_axis}"
            )));
        }
        if !(period > T::zero()) || !period.is_finite() {
            return Err(Error::Config(format!("period must be positive, got {period}")));
        }
        Ok(Self {
            dim,
            n: points_per_axis,
            period,
            plans: Arc::new(FftPlans::new(points_per_axis)),
        })
    }

    /// Standard `2π`-periodic grid.
    pub fn standard(dim: usize, points_per_axis: usize) -> Result<Self> {
        Self::new(dim, points_per_axis, T::TAU())
    }

    /// Same sampling, different side length. Reuses the FFT plans.
    pub fn with_period(&self, period: T) -> Result<Self> {
        if !(period > T::zero()) || !period.is_finite() {
            return Err(Error::Config(format!("period must be positive, got {period}")));
        }
        Ok(Self { period, ..self.clone() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> T {
        self.period
    }

    /// Total number of stored modes / grid points, `Nⁿ`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.n; self.dim]
    }

    pub(crate) fn plans(&self) -> &FftPlans<T> {
        &self.plans
    }

    /// Lattice spacing `2π / period`.
    pub fn wave_scale(&self) -> T {
        T::TAU() / self.period
    }

    /// Physical grid spacing `period / N`.
    pub fn spacing(&self) -> T {
        self.period / T::from_usize_lossy(self.n)
    }

    /// Measure of one grid cell, `(period/N)ⁿ`.
    pub fn cell_volume(&self) -> T {
        self.spacing().powi(self.dim as i32)
    }

    /// Measure of the torus, `periodⁿ`.
    pub fn volume(&self) -> T {
        self.period.powi(self.dim as i32)
    }

    pub fn nyquist(&self) -> usize {
        self.n / 2
    }

    /// Largest retained `|k_i|` under the 2/3 rule: the biggest `K` with `3K < N`.
    pub fn dealias_cutoff(&self) -> usize {
        (self.n - 1) / 3
    }

    /// Radial magnitude of the per-axis dealias cutoff, `K·2π/period`.
    pub fn dealias_wavenumber(&self) -> T {
        T::from_usize_lossy(self.dealias_cutoff()) * self.wave_scale()
    }

    /// Signed wave number of storage index `i` along one axis.
    #[inline]
    pub fn signed_index(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Storage index of signed wave number `k`, or `None` if not stored.
    #[inline]
    pub fn storage_index(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k >= half || k < -half {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((k + self.n as i64) as usize)
        }
    }

    /// Per-axis storage indices of a flat index.
    #[inline]
    pub fn unflatten(&self, flat: usize) -> [usize; MAX_DIM] {
        let mut out = [0usize; MAX_DIM];
        let mut rem = flat;
        for axis in (0..self.dim).rev() {
            out[axis] = rem % self.n;
            rem /= self.n;
        }
        out
    }

    #[inline]
    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter().take(self.dim).fold(0, |acc, &i| acc * self.n + i)
    }

    /// Integer wave index of a stored mode.
    #[inline]
    pub fn wave_index(&self, flat: usize) -> WaveIndex {
        let idx = self.unflatten(flat);
        let mut k = [0i64; MAX_DIM];
        for axis in 0..self.dim {
            k[axis] = self.signed_index(idx[axis]);
        }
        k
    }

    /// Flat index of integer wave index `k`, `None` if outside the lattice.
    pub fn flat_of_wave(&self, k: &[i64]) -> Option<usize> {
        let mut flat = 0usize;
        for axis in 0..self.dim {
            let kk = k.get(axis).copied().unwrap_or(0);
            flat = flat * self.n + self.storage_index(kk)?;
        }
        Some(flat)
    }

    /// Wave vector `ξ = (2π/period)·k` of a stored mode.
    #[inline]
    pub fn wave_vector(&self, flat: usize) -> [T; MAX_DIM] {
        let k = self.wave_index(flat);
        let s = self.wave_scale();
        let mut xi = [T::zero(); MAX_DIM];
        for axis in 0..self.dim {
            xi[axis] = T::from_i64_lossy(k[axis]) * s;
        }
        xi
    }

    /// Euclidean modulus `|ξ|` of a stored mode.
    #[inline]
    pub fn modulus(&self, flat: usize) -> T {
        let xi = self.wave_vector(flat);
        xi.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }

    /// `ℓ¹` modulus `|ξ|₁` of a stored mode.
    #[inline]
    pub fn l1_modulus(&self, flat: usize) -> T {
        let xi = self.wave_vector(flat);
        xi.iter().fold(T::zero(), |acc, &x| acc + x.abs())
    }

    /// Flat index of the mode `-k`. The Nyquist index maps to itself.
    #[inline]
    pub fn conjugate_index(&self, flat: usize) -> usize {
        let idx = self.unflatten(flat);
        let mut out = 0usize;
        for &i in idx.iter().take(self.dim) {
            out = out * self.n + (self.n - i) % self.n;
        }
        out
    }

    /// True when the mode has a Nyquist component along `axis`.
    #[inline]
    pub fn is_nyquist_along(&self, flat: usize, axis: usize) -> bool {
        self.unflatten(flat)[axis] == self.n / 2
    }

    /// True when any component sits on the Nyquist index.
    #[inline]
    pub fn has_nyquist(&self, flat: usize) -> bool {
        let idx = self.unflatten(flat);
        idx.iter().take(self.dim).any(|&i| i == self.n / 2)
    }

    /// True when every `|k_i|` is within the 2/3-rule cutoff.
    #[inline]
    pub fn is_dealiased(&self, flat: usize) -> bool {
        let cut = self.dealias_cutoff() as i64;
        let k = self.wave_index(flat);
        k.iter().take(self.dim).all(|&ki| ki.abs() <= cut)
    }

    /// Physical coordinates of grid point `flat`.
    #[inline]
    pub fn point(&self, flat: usize) -> [T; MAX_DIM] {
        let idx = self.unflatten(flat);
        let h = self.spacing();
        let mut x = [T::zero(); MAX_DIM];
        for axis in 0..self.dim {
            x[axis] = T::from_usize_lossy(idx[axis]) * h;
        }
        x
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Construct a grid, validating the configuration.
pub fn make_grid<T: Scalar>(dim: usize, points_per_axis: usize, period: T) -> Result<Grid<T>> {
    Grid::new(dim, points_per_axis, period)
}

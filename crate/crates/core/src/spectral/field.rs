use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;

use super::grid::{Grid, WaveIndex};
use super::transform::{forward_in_place, inverse_in_place};
use crate::{Error, Result, Scalar};

/// Fourier coefficients `û(ξ)` of a scalar field on a periodic grid.
///
/// Coefficients use the mean convention: `u(x) = Σ_k û_k e^{iξ_k·x}`, so the
/// zero mode is the spatial mean and the mass is `û_0 · periodⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField<T: Scalar> {
    grid: Grid<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> SpectralField<T> {
    pub fn zeros(grid: &Grid<T>) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex::new(T::zero(), T::zero()); grid.len()],
        }
    }

    pub fn from_coeffs(grid: &Grid<T>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), actual: coeffs.len() });
        }
        Ok(Self { grid: grid.clone(), coeffs })
    }

    /// Forward transform of real samples laid out in grid order.
    pub fn forward(physical: &[T], grid: &Grid<T>) -> Result<Self> {
        if physical.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), actual: physical.len() });
        }
        let mut data: Vec<Complex<T>> =
            physical.iter().map(|&x| Complex::new(x, T::zero())).collect();
        forward_in_place(grid, &mut data);
        Ok(Self { grid: grid.clone(), coeffs: data })
    }

    /// Forward transform of complex samples.
    pub fn forward_complex(physical: &[Complex<T>], grid: &Grid<T>) -> Result<Self> {
        if physical.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), actual: physical.len() });
        }
        let mut data = physical.to_vec();
        forward_in_place(grid, &mut data);
        Ok(Self { grid: grid.clone(), coeffs: data })
    }

    /// Sample a function of the physical coordinates and transform it.
    pub fn from_fn(grid: &Grid<T>, f: impl Fn(&[T]) -> T) -> Self {
        let samples: Vec<T> =
            (0..grid.len()).map(|i| f(&grid.point(i)[..grid.dim()])).collect();
        Self::forward(&samples, grid).expect("sample count matches grid")
    }

    /// Build coefficients from a function of the integer wave index.
    pub fn from_spectrum(grid: &Grid<T>, f: impl Fn(&WaveIndex) -> Complex<T>) -> Self {
        let coeffs = (0..grid.len()).map(|i| f(&grid.wave_index(i))).collect();
        Self { grid: grid.clone(), coeffs }
    }

    /// Single complex exponential `amplitude · e^{iξ_k·x}`.
    pub fn plane_wave(grid: &Grid<T>, k: &[i64], amplitude: Complex<T>) -> Result<Self> {
        let mut out = Self::zeros(grid);
        let flat = grid.flat_of_wave(k).ok_or_else(|| {
            Error::SupportOverflow(format!("wave index {k:?} not on the lattice"))
        })?;
        out.coeffs[flat] = amplitude;
        Ok(out)
    }

    /// Real mode `amplitude · cos(ξ_k·x)`.
    pub fn cosine_mode(grid: &Grid<T>, k: &[i64], amplitude: T) -> Result<Self> {
        let half = amplitude * T::lit(0.5);
        let mut out = Self::plane_wave(grid, k, Complex::new(half, T::zero()))?;
        let neg: Vec<i64> = k.iter().map(|&x| -x).collect();
        let flat = grid.flat_of_wave(&neg).ok_or_else(|| {
            Error::SupportOverflow(format!("wave index {neg:?} not on the lattice"))
        })?;
        out.coeffs[flat] += Complex::new(half, T::zero());
        Ok(out)
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// Coefficient at integer wave index `k` (zero off the lattice).
    pub fn coeff_at(&self, k: &[i64]) -> Complex<T> {
        self.grid
            .flat_of_wave(k)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// Complex samples at the grid points.
    pub fn inverse_complex(&self) -> Vec<Complex<T>> {
        let mut data = self.coeffs.clone();
        inverse_in_place(&self.grid, &mut data);
        data
    }

    /// Real part of the samples at the grid points.
    pub fn inverse(&self) -> Vec<T> {
        self.inverse_complex().into_iter().map(|c| c.re).collect()
    }

    /// Spatial mean (the zero mode's real part).
    pub fn mean(&self) -> T {
        self.coeffs[0].re
    }

    /// `∫ u dx` over the torus.
    pub fn mass(&self) -> T {
        self.mean() * self.grid.volume()
    }

    /// `max_ξ |û(−ξ) − conj û(ξ)|`, relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> T {
        let scale = self.max_abs();
        if scale == T::zero() {
            return T::zero();
        }
        let mut worst = T::zero();
        for i in 0..self.coeffs.len() {
            let j = self.grid.conjugate_index(i);
            let d = (self.coeffs[j] - self.coeffs[i].conj()).norm();
            worst = worst.max(d);
        }
        worst / scale
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_defect() <= tol
    }

    /// Project onto the Hermitian-symmetric (real-field) subspace.
    pub fn symmetrize(&mut self) {
        let half = T::lit(0.5);
        let old = self.coeffs.clone();
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            let j = self.grid.conjugate_index(i);
            *c = (old[i] + old[j].conj()) * half;
        }
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Zero every mode beyond the 2/3-rule cutoff.
    pub fn dealias(&mut self) {
        for i in 0..self.coeffs.len() {
            if !self.grid.is_dealiased(i) {
                self.coeffs[i] = Complex::new(T::zero(), T::zero());
            }
        }
    }

    pub fn dealiased(mut self) -> Self {
        self.dealias();
        self
    }

    /// Zero every mode that touches a Nyquist index.
    pub fn drop_nyquist(&mut self) {
        for i in 0..self.coeffs.len() {
            if self.grid.has_nyquist(i) {
                self.coeffs[i] = Complex::new(T::zero(), T::zero());
            }
        }
    }

    pub fn scale(&mut self, s: T) {
        for c in self.coeffs.iter_mut() {
            *c *= s;
        }
    }

    pub fn scaled(mut self, s: T) -> Self {
        self.scale(s);
        self
    }

    /// `self += a · other`.
    pub fn axpy(&mut self, a: T, other: &Self) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += *o * a;
        }
        Ok(())
    }

    /// Coefficientwise map with access to the flat index.
    pub fn map_indexed(&self, f: impl Fn(usize, Complex<T>) -> Complex<T>) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().enumerate().map(|(i, &c)| f(i, c)).collect(),
        }
    }

    /// Squared `ℓ²` norm of the coefficient vector.
    pub fn coeff_energy(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Zero-padded copy on a grid of the same period with `points` per axis.
    /// Nyquist modes of the source have no symmetric partner on the finer
    /// grid and are dropped.
    pub fn padded(&self, points: usize) -> Result<Self> {
        if points < self.grid.points_per_axis() {
            return Err(Error::GridMismatch(format!(
                "cannot pad {} points per axis down to {points}",
                self.grid.points_per_axis()
            )));
        }
        let fine = Grid::new(self.grid.dim(), points, self.grid.period())?;
        let mut out = Self::zeros(&fine);
        let dim = self.grid.dim();
        for (flat, &c) in self.coeffs.iter().enumerate() {
            if self.grid.has_nyquist(flat) {
                continue;
            }
            let k = self.grid.wave_index(flat);
            let target = fine.flat_of_wave(&k[..dim]).expect("finer grid holds every coarse mode");
            out.coeffs[target] = c;
        }
        Ok(out)
    }

    /// Re-interpret the same coefficient array on another grid of equal shape.
    pub fn with_grid(self, grid: &Grid<T>) -> Result<Self> {
        if grid.dim() != self.grid.dim() || grid.points_per_axis() != self.grid.points_per_axis() {
            return Err(Error::GridMismatch(format!("{:?} vs {grid:?}", self.grid)));
        }
        Ok(Self { grid: grid.clone(), coeffs: self.coeffs })
    }
}

/// Forward transform of real samples.
pub fn transform_forward<T: Scalar>(physical: &[T], grid: &Grid<T>) -> Result<SpectralField<T>> {
    SpectralField::forward(physical, grid)
}

/// Inverse transform to real samples.
pub fn transform_inverse<T: Scalar>(field: &SpectralField<T>) -> Vec<T> {
    field.inverse()
}

impl<T: Scalar> Add<&SpectralField<T>> for &SpectralField<T> {
    type Output = SpectralField<T>;

    fn add(self, rhs: &SpectralField<T>) -> SpectralField<T> {
        assert_eq!(self.grid, rhs.grid, "grid mismatch in field addition");
        SpectralField {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub<&SpectralField<T>> for &SpectralField<T> {
    type Output = SpectralField<T>;

    fn sub(self, rhs: &SpectralField<T>) -> SpectralField<T> {
        assert_eq!(self.grid, rhs.grid, "grid mismatch in field subtraction");
        SpectralField {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Scalar> AddAssign<&SpectralField<T>> for SpectralField<T> {
    fn add_assign(&mut self, rhs: &SpectralField<T>) {
        assert_eq!(self.grid, rhs.grid, "grid mismatch in field addition");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl<T: Scalar> SubAssign<&SpectralField<T>> for SpectralField<T> {
    fn sub_assign(&mut self, rhs: &SpectralField<T>) {
        assert_eq!(self.grid, rhs.grid, "grid mismatch in field subtraction");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl<T: Scalar> Mul<T> for &SpectralField<T> {
    type Output = SpectralField<T>;

    fn mul(self, rhs: T) -> SpectralField<T> {
        self.clone().scaled(rhs)
    }
}

impl<T: Scalar> Neg for &SpectralField<T> {
    type Output = SpectralField<T>;

    fn neg(self) -> SpectralField<T> {
        self.clone().scaled(-T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    #[test]
    fn constant_field_is_pure_zero_mode() {
        let g = make_grid(2, 16, TAU).unwrap();
        let f = SpectralField::forward(&vec![3.5; g.len()], &g).unwrap();
        assert!((f.coeffs()[0].re - 3.5).abs() < 1e-14);
        assert!(f.coeffs()[1..].iter().all(|c| c.norm() < 1e-14));
        assert!((f.mass() - 3.5 * TAU * TAU).abs() < 1e-11);
    }

    #[test]
    fn cosine_has_half_amplitude_pair() {
        let g = make_grid(2, 16, TAU).unwrap();
        let f = SpectralField::from_fn(&g, |x| x[0].cos());
        for i in 0..g.len() {
            let k = g.wave_index(i);
            let expect = if (k[0] == 1 || k[0] == -1) && k[1] == 0 { 0.5 } else { 0.0 };
            assert!((f.coeffs()[i].re - expect).abs() < 1e-14, "k={k:?}");
            assert!(f.coeffs()[i].im.abs() < 1e-14);
        }
    }

    #[test]
    fn random_round_trip_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (dim, n) in [(1, 64), (2, 32), (3, 16)] {
            let g = make_grid(dim, n, 3.0).unwrap();
            let data: Vec<f64> = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let back = SpectralField::forward(&data, &g).unwrap().inverse();
            let scale = data.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let err = data.iter().zip(&back).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err / scale <= 1e-12, "dim={dim} err={err}");
        }
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let g = make_grid(2, 8, TAU).unwrap();
        assert!(matches!(
            SpectralField::forward(&[0.0; 10], &g),
            Err(Error::ShapeMismatch { expected: 64, actual: 10 })
        ));
    }

    #[test]
    fn real_input_is_hermitian() {
        let g = make_grid(3, 8, TAU).unwrap();
        let f = SpectralField::from_fn(&g, |x| (x[0] + 2.0 * x[1]).sin() * x[2].cos() + 0.3);
        assert!(f.hermitian_defect() < 1e-14);
    }

    #[test]
    fn works_in_single_precision() {
        let g = make_grid::<f32>(2, 16, std::f32::consts::TAU).unwrap();
        let f = SpectralField::from_fn(&g, |x| x[1].sin());
        let back = f.inverse();
        let err = (0..g.len())
            .map(|i| (back[i] - g.point(i)[1].sin()).abs())
            .fold(0.0f32, f32::max);
        assert!(err < 1e-5);
    }
}

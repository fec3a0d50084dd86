use num_complex::Complex;

use crate::spectral::SpectralField;
use crate::{Error, Result, Scalar};

/// `u₀λ(x) = λ^α u₀(λx)` as a field on the torus of side `L/λ`.
///
/// The coefficient array is kept and multiplied by `λ^α`, while every wave
/// vector is stretched by `λ`. In the continuous normalization this is
/// exactly `û₀λ(ξ) = λ^{α-n} û₀(ξ/λ)`: the mass scales by `λ^{α-n}`, dyadic
/// shells move by `log₂ λ`, and the critical Besov norm is unchanged for
/// every `p`. The solution map commutes with it, `u_λ(t) = λ^α u(λ^α t)`.
pub fn scaling_transform<T: Scalar>(u0: &SpectralField<T>, lambda: T, alpha: T) -> Result<SpectralField<T>> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(Error::Config(format!("scaling factor λ = {lambda} must be positive")));
    }
    let grid = u0.grid().with_period(u0.grid().period() / lambda)?;
    let factor = lambda.powf(alpha);
    SpectralField::from_coeffs(&grid, u0.coeffs().iter().map(|&c| c * factor).collect())
}

/// `u₀λ(x) = λ^α u₀(λx)` on the same torus, for an integer `λ`, by relabeling
/// mode `k` to `λk`.
///
/// This is the λ-fold periodic compression of `u₀`. It is an exact
/// relabeling of the lattice and commutes with the flow, but since the
/// torus keeps its size the `L^p` norms of the blocks do not pick up the
/// `λ^{-n/p}` factor, so Besov invariance holds only for `p = ∞`.
pub fn scaling_transform_fixed_grid<T: Scalar>(
    u0: &SpectralField<T>,
    lambda: i64,
    alpha: T,
) -> Result<SpectralField<T>> {
    if lambda < 1 {
        return Err(Error::Config(format!("relabeling factor λ = {lambda} must be a positive integer")));
    }
    let grid = u0.grid();
    let factor = T::from_i64_lossy(lambda).powf(alpha);
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    for (flat, &c) in u0.coeffs().iter().enumerate() {
        if c == Complex::new(T::zero(), T::zero()) {
            continue;
        }
        let k = grid.wave_index(flat);
        let scaled: Vec<i64> = k[..grid.dim()].iter().map(|&v| v * lambda).collect();
        let target = grid
            .flat_of_wave(&scaled)
            .filter(|&t| !grid.has_nyquist(t) || lambda == 1)
            .ok_or_else(|| Error::SupportOverflow(format!("mode {:?} maps outside the lattice", &k[..grid.dim()])))?;
        coeffs[target] = c * factor;
    }
    SpectralField::from_coeffs(grid, coeffs)
}

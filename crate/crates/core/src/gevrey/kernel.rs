use num_complex::Complex;

use super::gevrey_exponent;
use crate::spectral::{make_grid, SpectralField};
use crate::{Error, Result, Scalar};

/// Relative change under grid doubling above which an estimate is flagged.
pub const RESOLUTION_TOLERANCE: f64 = 0.02;

/// Quadrature estimate of `‖Λ^σ e^{-θ t^{1/α} Λ₁}‖` as an `L¹` kernel norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelNormEstimate<T> {
    pub sigma: T,
    pub alpha: T,
    pub theta: T,
    pub t: T,
    pub value: T,
    /// `value · t^{σ/α}`, constant in `t` by scaling.
    pub rescaled: T,
    pub points: usize,
    pub period: T,
    /// Relative difference against the same box sampled with half the points.
    pub resolution_change: T,
    pub resolution_warning: bool,
}

/// `Σ_x |K(x)| Δx^n` for the kernel of `|ξ|^σ e^{-a|ξ|₁}` periodized on a box.
fn periodic_kernel_l1<T: Scalar>(sigma: T, a: T, dim: usize, points: usize, period: T) -> Result<T> {
    let grid = make_grid(dim, points, period)?;
    let inv_volume = grid.volume().recip();
    let symbol = SpectralField::from_spectrum(&grid, |k| {
        let flat = grid.flat_of_wave(&k[..dim]).expect("index from lattice");
        if grid.has_nyquist(flat) {
            return Complex::new(T::zero(), T::zero());
        }
        let r = grid.modulus(flat);
        let power = if sigma == T::zero() { T::one() } else { r.powf(sigma) };
        Complex::new(power * (-a * grid.l1_modulus(flat)).exp() * inv_volume, T::zero())
    });
    let kernel = symbol.inverse();
    let sum = kernel.iter().fold(T::zero(), |acc, v| acc + v.abs());
    Ok(sum * grid.cell_volume())
}

/// Kernel `L¹` norm on an `n`-dimensional box of side `period` with `points`
/// per axis. The box must be large against `a = θ t^{1/α}` and the spacing
/// small against it; the grid-doubling comparison flags when it is not.
pub fn kernel_l1_norm<T: Scalar>(
    sigma: T,
    alpha: T,
    theta: T,
    t: T,
    dim: usize,
    points: usize,
    period: T,
) -> Result<KernelNormEstimate<T>> {
    if !(sigma >= T::zero()) {
        return Err(Error::Config(format!("kernel order sigma={sigma} must be nonnegative")));
    }
    if !(t > T::zero()) || !(theta > T::zero()) {
        return Err(Error::Config(format!("kernel needs t > 0 and theta > 0 (t={t}, theta={theta})")));
    }
    if !(T::one()..=T::lit(2.0)).contains(&alpha) {
        return Err(Error::Config(format!("alpha must lie in [1, 2], got {alpha}")));
    }
    if points < 8 || !points.is_multiple_of(2) {
        return Err(Error::Config(format!("kernel grid needs an even point count ≥ 8, got {points}")));
    }
    let a = gevrey_exponent(t, alpha, theta);
    let value = periodic_kernel_l1(sigma, a, dim, points, period)?;
    let coarse = periodic_kernel_l1(sigma, a, dim, points / 2, period)?;
    let change = ((value - coarse) / value).abs();
    Ok(KernelNormEstimate {
        sigma,
        alpha,
        theta,
        t,
        value,
        rescaled: value * t.powf(sigma / alpha),
        points,
        period,
        resolution_change: change,
        resolution_warning: !(change <= T::lit(RESOLUTION_TOLERANCE)),
    })
}

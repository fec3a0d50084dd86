use num_complex::Complex;

use super::field::SpectralField;
use super::grid::Grid;
use crate::{Error, Result, Scalar};

/// Fourier multiplier symbols used throughout the crate.
///
/// `axis` fields are zero-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MultiplierSpec<T> {
    /// `|ξ|^α`, the fractional Laplacian `Λ^α`.
    FracLaplacian { alpha: T },
    /// `e^{−t|ξ|^α}`, the dissipative semigroup.
    Semigroup { alpha: T, t: T },
    /// `iξ_m/|ξ|²`: the `m`-th component of `∇(−Δ)^{-1}`. Zero at `ξ = 0`.
    RieszGrad { axis: usize },
    /// `e^{θ t^{1/α} |ξ|₁}`, the Gevrey lift.
    Gevrey { alpha: T, t: T, theta: T },
    /// `|ξ|^σ` for any `σ ≥ 0` (`Λ^σ`).
    Power { sigma: T },
    /// `iξ_m`, the partial derivative `∂_m`.
    Derivative { axis: usize },
    /// `1/|ξ|²`, `(−Δ)^{-1}` with the zero mode set to zero.
    InverseLaplacian,
}

impl<T: Scalar> MultiplierSpec<T> {
    /// Check parameter ranges against a field dimension.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let alpha_ok = |a: T| a >= T::one() && a <= T::lit(2.0);
        match *self {
            Self::FracLaplacian { alpha } if !alpha_ok(alpha) => {
                Err(Error::Config(format!("alpha must lie in [1, 2], got {alpha}")))
            }
            Self::Semigroup { alpha, t } | Self::Gevrey { alpha, t, .. }
                if !alpha_ok(alpha) || !(t >= T::zero()) =>
            {
                Err(Error::Config(format!(
                    "need alpha in [1, 2] and t >= 0, got alpha={alpha} t={t}"
                )))
            }
            Self::Power { sigma } if !(sigma >= T::zero()) => {
                Err(Error::Config(format!("sigma must be nonnegative, got {sigma}")))
            }
            Self::RieszGrad { axis } | Self::Derivative { axis } if axis >= dim => Err(
                Error::GridMismatch(format!("axis {axis} out of range for dimension {dim}")),
            ),
            _ => Ok(()),
        }
    }

    /// True for symbols that are odd in `ξ` (their Nyquist values are dropped).
    pub fn is_odd(&self) -> bool {
        matches!(self, Self::RieszGrad { .. } | Self::Derivative { .. })
    }

    pub fn is_real(&self) -> bool {
        !self.is_odd()
    }
}

/// Euclidean and `ℓ¹` moduli of a wave vector.
#[inline]
fn moduli<T: Scalar>(xi: &[T]) -> (T, T, T) {
    let sq = xi.iter().fold(T::zero(), |acc, &x| acc + x * x);
    let l1 = xi.iter().fold(T::zero(), |acc, &x| acc + x.abs());
    (sq, sq.sqrt(), l1)
}

/// Value of the symbol at wave vector `xi`.
pub fn evaluate_symbol<T: Scalar>(spec: &MultiplierSpec<T>, xi: &[T]) -> Complex<T> {
    let (sq, modulus, l1) = moduli(xi);
    let real = |v: T| Complex::new(v, T::zero());
    match *spec {
        MultiplierSpec::FracLaplacian { alpha } => real(modulus.powf(alpha)),
        MultiplierSpec::Power { sigma } => {
            if sigma == T::zero() {
                real(T::one())
            } else {
                real(modulus.powf(sigma))
            }
        }
        MultiplierSpec::Semigroup { alpha, t } => real((-t * modulus.powf(alpha)).exp()),
        MultiplierSpec::RieszGrad { axis } => {
            if sq == T::zero() {
                real(T::zero())
            } else {
                Complex::new(T::zero(), xi[axis] / sq)
            }
        }
        MultiplierSpec::Gevrey { alpha, t, theta } => {
            real((theta * t.powf(alpha.recip()) * l1).exp())
        }
        MultiplierSpec::Derivative { axis } => Complex::new(T::zero(), xi[axis]),
        MultiplierSpec::InverseLaplacian => {
            if sq == T::zero() {
                real(T::zero())
            } else {
                real(sq.recip())
            }
        }
    }
}

/// Symbol values at every stored mode, in storage order.
///
/// Odd symbols vanish on modes whose component along their axis is the
/// Nyquist index, which keeps real fields real.
pub fn symbol_table<T: Scalar>(grid: &Grid<T>, spec: &MultiplierSpec<T>) -> Vec<Complex<T>> {
    let dim = grid.dim();
    (0..grid.len())
        .map(|i| {
            if let MultiplierSpec::RieszGrad { axis } | MultiplierSpec::Derivative { axis } = *spec
            {
                if grid.is_nyquist_along(i, axis) {
                    return Complex::new(T::zero(), T::zero());
                }
            }
            evaluate_symbol(spec, &grid.wave_vector(i)[..dim])
        })
        .collect()
}

/// Coefficientwise product of a field with the symbol.
pub fn apply_multiplier<T: Scalar>(
    field: &SpectralField<T>,
    spec: &MultiplierSpec<T>,
) -> Result<SpectralField<T>> {
    spec.validate(field.grid().dim())?;
    let table = symbol_table(field.grid(), spec);
    if table.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite(format!(
            "symbol {spec:?} overflows on this grid; use the log-space Gevrey lift"
        )));
    }
    Ok(apply_table(field, &table))
}

/// Multiply by a precomputed symbol table.
pub fn apply_table<T: Scalar>(field: &SpectralField<T>, table: &[Complex<T>]) -> SpectralField<T> {
    field.map_indexed(|i, c| c * table[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use std::f64::consts::TAU;

    fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn symbol_values() {
        let c = |re: f64, im: f64| Complex::new(re, im);
        assert!(close(
            evaluate_symbol(&MultiplierSpec::FracLaplacian { alpha: 2.0 }, &[3.0, 4.0]),
            c(25.0, 0.0),
            1e-14
        ));
        assert!(close(
            evaluate_symbol(&MultiplierSpec::Semigroup { alpha: 1.0, t: 0.5 }, &[2.0, 0.0]),
            c((-1.0f64).exp(), 0.0),
            1e-14
        ));
        assert!(close(
            evaluate_symbol(&MultiplierSpec::RieszGrad { axis: 1 }, &[0.0, 2.0]),
            c(0.0, 0.5),
            1e-14
        ));
        assert!(close(
            evaluate_symbol(&MultiplierSpec::Gevrey { alpha: 2.0, t: 1.0, theta: 1.0 }, &[1.0, 1.0]),
            c(2.0f64.exp(), 0.0),
            1e-14
        ));
        assert!(close(
            evaluate_symbol(
                &MultiplierSpec::Gevrey { alpha: 1.0, t: 1.0, theta: 0.25 },
                &[1.0, 1.0]
            ),
            c(0.5f64.exp(), 0.0),
            1e-14
        ));
        assert_eq!(
            evaluate_symbol(&MultiplierSpec::RieszGrad { axis: 0 }, &[0.0, 0.0]),
            c(0.0, 0.0)
        );
    }

    #[test]
    fn semigroup_at_zero_time_is_identity() {
        let g = make_grid(2, 16, TAU).unwrap();
        let f = SpectralField::from_fn(&g, |x| (x[0] + x[1]).sin() + 0.2 * (3.0 * x[1]).cos());
        let out = apply_multiplier(&f, &MultiplierSpec::Semigroup { alpha: 1.5, t: 0.0 }).unwrap();
        assert_eq!(out, f);
    }

    #[test]
    fn semigroup_composes() {
        let g = make_grid(2, 32, TAU).unwrap();
        let f = SpectralField::from_fn(&g, |x| (x[0] * 2.0).sin() * x[1].cos() + 1.0);
        let a = 1.5;
        let st = apply_multiplier(
            &apply_multiplier(&f, &MultiplierSpec::Semigroup { alpha: a, t: 0.3 }).unwrap(),
            &MultiplierSpec::Semigroup { alpha: a, t: 0.45 },
        )
        .unwrap();
        let direct = apply_multiplier(&f, &MultiplierSpec::Semigroup { alpha: a, t: 0.75 }).unwrap();
        for (x, y) in st.coeffs().iter().zip(direct.coeffs()) {
            assert!((x - y).norm() <= 1e-13 * y.norm().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn unit_plane_wave_is_fixed_by_any_power() {
        let g = make_grid(2, 16, TAU).unwrap();
        let w = SpectralField::plane_wave(&g, &[1, 0], Complex::new(1.0, 0.0)).unwrap();
        let out = apply_multiplier(&w, &MultiplierSpec::FracLaplacian { alpha: 1.5 }).unwrap();
        assert!((out.coeff_at(&[1, 0]) - Complex::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let g = make_grid(2, 16, TAU).unwrap();
        let f = SpectralField::zeros(&g);
        assert!(apply_multiplier(&f, &MultiplierSpec::RieszGrad { axis: 2 }).is_err());
        assert!(apply_multiplier(&f, &MultiplierSpec::FracLaplacian { alpha: 2.5 }).is_err());
        assert!(apply_multiplier(&f, &MultiplierSpec::Semigroup { alpha: 2.0, t: -1.0 }).is_err());
    }

    #[test]
    fn odd_symbols_keep_real_fields_real() {
        let g = make_grid(2, 16, TAU).unwrap();
        let f = SpectralField::from_fn(&g, |x| (x[0] * 8.0).cos() + (x[1] * 3.0).sin() * x[0].sin());
        for axis in 0..2 {
            let out = apply_multiplier(&f, &MultiplierSpec::RieszGrad { axis }).unwrap();
            assert!(out.hermitian_defect() < 1e-14);
        }
    }
}

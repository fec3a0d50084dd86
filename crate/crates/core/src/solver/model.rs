use num_complex::Complex;

use crate::spectral::{
    apply_multiplier, products_with, symbol_table, Grid, MultiplierSpec, SpectralField,
};
use crate::{Error, Result, Scalar};

/// Chemical potential and its gradient.
#[derive(Clone, Debug)]
pub struct Attractant<T: Scalar> {
    pub psi: SpectralField<T>,
    pub grad: Vec<SpectralField<T>>,
}

/// `ψ̂ = û/|ξ|²` with `ψ̂(0) = 0`, and `∇ψ` through the Riesz-gradient
/// multipliers.
pub fn poisson_attractant<T: Scalar>(u: &SpectralField<T>) -> Result<Attractant<T>> {
    let psi = apply_multiplier(u, &MultiplierSpec::InverseLaplacian)?;
    let grad = (0..u.grid().dim())
        .map(|axis| apply_multiplier(u, &MultiplierSpec::RieszGrad { axis }))
        .collect::<Result<_>>()?;
    Ok(Attractant { psi, grad })
}

/// Symbol tables of the fractional Keller–Segel operator on one grid.
///
/// Building the tables once keeps the per-step cost at the FFTs.
#[derive(Clone, Debug)]
pub struct Model<T: Scalar> {
    grid: Grid<T>,
    alpha: T,
    dealias: bool,
    nonlinear: bool,
    /// `|ξ|^α`.
    linear: Vec<T>,
    riesz: Vec<Vec<Complex<T>>>,
    derivative: Vec<Vec<Complex<T>>>,
}

impl<T: Scalar> Model<T> {
    pub fn new(grid: &Grid<T>, alpha: T, dealias: bool) -> Result<Self> {
        MultiplierSpec::FracLaplacian { alpha }.validate(grid.dim())?;
        let linear = symbol_table(grid, &MultiplierSpec::FracLaplacian { alpha })
            .into_iter()
            .map(|c| c.re)
            .collect();
        let riesz = (0..grid.dim())
            .map(|axis| symbol_table(grid, &MultiplierSpec::RieszGrad { axis }))
            .collect();
        let derivative = (0..grid.dim())
            .map(|axis| symbol_table(grid, &MultiplierSpec::Derivative { axis }))
            .collect();
        Ok(Self { grid: grid.clone(), alpha, dealias, nonlinear: true, linear, riesz, derivative })
    }

    /// Drops the chemotactic drift, leaving the pure fractional heat flow.
    pub fn linear_only(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn is_nonlinear(&self) -> bool {
        self.nonlinear
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn dealias(&self) -> bool {
        self.dealias
    }

    /// `|ξ|^α` over the lattice.
    pub fn linear_symbol(&self) -> &[T] {
        &self.linear
    }

    /// `N(u) = -∇·(u∇ψ)`, with the product dealiased when the model says so.
    /// Its mean is exactly zero.
    pub fn nonlinear_term(&self, u: &SpectralField<T>) -> Result<SpectralField<T>> {
        self.grid.check_same(u.grid())?;
        if !self.nonlinear {
            return Ok(SpectralField::zeros(&self.grid));
        }
        let grads: Vec<SpectralField<T>> =
            self.riesz.iter().map(|tab| crate::spectral::apply_table(u, tab)).collect();
        let fluxes = if self.dealias {
            let refs: Vec<&SpectralField<T>> = grads.iter().collect();
            products_with(u, &refs)?
        } else {
            let up = u.inverse_complex();
            grads
                .iter()
                .map(|g| {
                    let prod: Vec<Complex<T>> =
                        up.iter().zip(g.inverse_complex()).map(|(a, b)| a * b).collect();
                    SpectralField::forward_complex(&prod, &self.grid)
                })
                .collect::<Result<_>>()?
        };
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.grid.len()];
        for (flux, deriv) in fluxes.iter().zip(&self.derivative) {
            for ((o, c), d) in out.iter_mut().zip(flux.coeffs()).zip(deriv) {
                *o -= c * d;
            }
        }
        out[0] = Complex::new(T::zero(), T::zero());
        let n = SpectralField::from_coeffs(&self.grid, out)?;
        if !n.is_finite() {
            return Err(Error::NonFinite("nonlinear term".into()));
        }
        Ok(n)
    }
}

/// `-∇·(u∇ψ)` for a one-off evaluation; prefer [`Model::nonlinear_term`] in loops.
pub fn nonlinear_term<T: Scalar>(u: &SpectralField<T>, alpha: T) -> Result<SpectralField<T>> {
    Model::new(u.grid(), alpha, true)?.nonlinear_term(u)
}

use num_complex::Complex;

use super::model::Model;
use crate::spectral::SpectralField;
use crate::{Error, Result, Scalar};

/// Exponential time-differencing schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Integrator {
    /// First-order exponential Euler.
    Etd1,
    /// Second-order Runge–Kutta variant of Cox and Matthews.
    #[default]
    Etd2rk,
}

impl Integrator {
    pub fn name(self) -> &'static str {
        match self {
            Integrator::Etd1 => "etd1",
            Integrator::Etd2rk => "etd2rk",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "etd1" => Ok(Integrator::Etd1),
            "etd2rk" => Ok(Integrator::Etd2rk),
            other => Err(Error::Config(format!("unknown integrator '{other}' (etd1 | etd2rk)"))),
        }
    }
}

/// `φ₁(z) = (e^z - 1)/z`, with its Taylor series near 0.
pub fn phi1<T: Scalar>(z: T) -> T {
    if z.abs() < T::lit(0.5) {
        taylor_tail(z, 1)
    } else {
        z.exp_m1() / z
    }
}

/// `φ₂(z) = (e^z - 1 - z)/z²`, with its Taylor series near 0.
pub fn phi2<T: Scalar>(z: T) -> T {
    if z.abs() < T::lit(0.5) {
        taylor_tail(z, 2)
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

/// `Σ_{k≥0} z^k/(k+m)!`, truncated well below round-off for `|z| < 1/2`.
fn taylor_tail<T: Scalar>(z: T, m: u32) -> T {
    let mut fact = T::one();
    for i in 2..=m {
        fact *= T::from_usize_lossy(i as usize);
    }
    let mut term = fact.recip();
    let mut sum = term;
    for k in 1..24 {
        term = term * z / T::from_usize_lossy((k + m) as usize);
        sum += term;
    }
    sum
}

/// Precomputed step coefficients for one `(model, dt)` pair.
#[derive(Clone, Debug)]
pub struct EtdStepper<T: Scalar> {
    model: Model<T>,
    dt: T,
    scheme: Integrator,
    /// `e^{-dt|ξ|^α}`.
    propagator: Vec<T>,
    /// `dt·φ₁(-dt|ξ|^α)`.
    q1: Vec<T>,
    /// `dt·φ₂(-dt|ξ|^α)`.
    q2: Vec<T>,
}

impl<T: Scalar> EtdStepper<T> {
    pub fn new(model: &Model<T>, dt: T, scheme: Integrator) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        let lin = model.linear_symbol();
        let propagator = lin.iter().map(|&l| (-dt * l).exp()).collect();
        let q1 = lin.iter().map(|&l| dt * phi1(-dt * l)).collect();
        let q2 = lin.iter().map(|&l| dt * phi2(-dt * l)).collect();
        Ok(Self { model: model.clone(), dt, scheme, propagator, q1, q2 })
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn scheme(&self) -> Integrator {
        self.scheme
    }

    pub fn model(&self) -> &Model<T> {
        &self.model
    }

    /// Advances `u` by one step of `dt`.
    pub fn step(&self, u: &SpectralField<T>) -> Result<SpectralField<T>> {
        let n0 = self.model.nonlinear_term(u)?;
        let a = self.combine(u, &n0, None);
        let next = match self.scheme {
            Integrator::Etd1 => a,
            Integrator::Etd2rk => {
                let n1 = self.model.nonlinear_term(&a)?;
                self.combine(u, &n0, Some(&n1))
            }
        };
        if !next.is_finite() {
            return Err(Error::NonFinite(format!("state after a step of {}", self.dt)));
        }
        Ok(next)
    }

    /// `e^{-dtL}u + Q₁N₀`, plus `Q₂(N₁ - N₀)` when `n1` is given.
    fn combine(
        &self,
        u: &SpectralField<T>,
        n0: &SpectralField<T>,
        n1: Option<&SpectralField<T>>,
    ) -> SpectralField<T> {
        let mut out: Vec<Complex<T>> = u
            .coeffs()
            .iter()
            .zip(n0.coeffs())
            .zip(self.propagator.iter().zip(&self.q1))
            .map(|((&c, &n), (&e, &q))| c * e + n * q)
            .collect();
        if let Some(n1) = n1 {
            for (((o, &a), &b), &q) in out.iter_mut().zip(n1.coeffs()).zip(n0.coeffs()).zip(&self.q2) {
                *o += (a - b) * q;
            }
        }
        SpectralField::from_coeffs(u.grid(), out).expect("stepper preserves the grid")
    }
}

/// One step without a cached stepper.
pub fn etd_step<T: Scalar>(
    u: &SpectralField<T>,
    dt: T,
    model: &Model<T>,
    scheme: Integrator,
) -> Result<SpectralField<T>> {
    EtdStepper::new(model, dt, scheme)?.step(u)
}

/// Default step `0.1/|ξ_cut|^α`, with `ξ_cut` the dealias wavenumber.
pub fn default_dt<T: Scalar>(model: &Model<T>) -> T {
    T::lit(0.1) / model.grid().dealias_wavenumber().powf(model.alpha())
}

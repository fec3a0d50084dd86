use num_complex::Complex;

use crate::littlewood_paley::{dyadic_weight, BesovParams, DyadicFilterBank};
use crate::spectral::{Grid, SpectralField};
use crate::{Error, Result, Scalar};

/// Largest amplification handled by plain multiplication; beyond it the lift
/// is kept as log-amplitudes.
pub const LOG_SPACE_THRESHOLD: f64 = 1e12;

/// Default Gevrey rate: 1 for `α > 1`, `1/(2n)` for `α = 1`.
pub fn default_theta<T: Scalar>(alpha: T, dim: usize) -> T {
    if alpha > T::one() {
        T::one()
    } else {
        (T::lit(2.0) * T::from_usize_lossy(dim)).recip()
    }
}

/// Exponent `a = θ t^{1/α}` of the lift `e^{a Λ₁}`.
pub fn gevrey_exponent<T: Scalar>(t: T, alpha: T, theta: T) -> T {
    theta * t.powf(alpha.recip())
}

/// `e^{θ t^{1/α} Λ₁} u`, stored directly when every amplification factor is
/// below [`LOG_SPACE_THRESHOLD`] and as `(log|û| + a|ξ|₁, phase)` otherwise.
#[derive(Clone, Debug)]
pub enum GevreyLift<T: Scalar> {
    Direct(SpectralField<T>),
    LogSpace {
        grid: Grid<T>,
        /// `ln|û(ξ)| + a|ξ|₁`, or `-∞` where `û(ξ) = 0`.
        log_amplitude: Vec<T>,
        /// `û(ξ)/|û(ξ)|`, or 0 where `û(ξ) = 0`.
        phase: Vec<Complex<T>>,
    },
}

pub fn gevrey_lift<T: Scalar>(u: &SpectralField<T>, t: T, alpha: T, theta: T) -> Result<GevreyLift<T>> {
    if t < T::zero() || !(T::one()..=T::lit(2.0)).contains(&alpha) || theta < T::zero() {
        return Err(Error::Config(format!(
            "Gevrey lift needs t ≥ 0, α ∈ [1, 2], θ ≥ 0 (got t={t}, α={alpha}, θ={theta})"
        )));
    }
    let grid = u.grid();
    let a = gevrey_exponent(t, alpha, theta);
    let max_exponent = (0..grid.len()).fold(T::zero(), |m, i| m.max(a * grid.l1_modulus(i)));
    if max_exponent <= T::lit(LOG_SPACE_THRESHOLD).ln() {
        return Ok(GevreyLift::Direct(u.map_indexed(|i, c| c * (a * grid.l1_modulus(i)).exp())));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let (log_amplitude, phase) = u
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let r = c.norm();
            if r == T::zero() {
                (T::neg_infinity(), zero)
            } else {
                (r.ln() + a * grid.l1_modulus(i), c / r)
            }
        })
        .unzip();
    Ok(GevreyLift::LogSpace { grid: grid.clone(), log_amplitude, phase })
}

impl<T: Scalar> GevreyLift<T> {
    pub fn grid(&self) -> &Grid<T> {
        match self {
            GevreyLift::Direct(f) => f.grid(),
            GevreyLift::LogSpace { grid, .. } => grid,
        }
    }

    pub fn is_log_space(&self) -> bool {
        matches!(self, GevreyLift::LogSpace { .. })
    }

    /// `ln|Û(ξ)|` at one mode.
    pub fn log_modulus(&self, flat: usize) -> T {
        match self {
            GevreyLift::Direct(f) => f.coeffs()[flat].norm().ln(),
            GevreyLift::LogSpace { log_amplitude, .. } => log_amplitude[flat],
        }
    }

    /// Plain coefficients, failing if any of them overflows.
    pub fn to_field(&self) -> Result<SpectralField<T>> {
        match self {
            GevreyLift::Direct(f) => Ok(f.clone()),
            GevreyLift::LogSpace { grid, log_amplitude, phase } => {
                let coeffs: Vec<Complex<T>> =
                    log_amplitude.iter().zip(phase).map(|(&l, &p)| p * l.exp()).collect();
                let field = SpectralField::from_coeffs(grid, coeffs)?;
                if !field.is_finite() {
                    return Err(Error::NonFinite("Gevrey lift exceeds the floating-point range".into()));
                }
                Ok(field)
            }
        }
    }

    /// `ln ‖Δ_j U‖_{L^p}` for every resolved shell; `-∞` for empty blocks.
    ///
    /// In log space every block is rescaled by its largest coefficient
    /// before the `L^p` norm is taken, so no intermediate value overflows.
    pub fn log_block_norms(&self, p: T, bank: &DyadicFilterBank<T>) -> Result<Vec<T>> {
        bank.grid().check_same(self.grid())?;
        let grid = self.grid();
        let mut out = Vec::with_capacity(bank.shell_count());
        for j in bank.indices() {
            let shell = bank.shell(j)?;
            let peak = shell
                .iter()
                .fold(T::neg_infinity(), |m, &(flat, w)| m.max(self.log_modulus(flat) + w.ln()));
            if peak == T::neg_infinity() {
                out.push(T::neg_infinity());
                continue;
            }
            let mut coeffs = vec![Complex::new(T::zero(), T::zero()); grid.len()];
            for &(flat, w) in shell {
                coeffs[flat] = match self {
                    GevreyLift::Direct(f) => f.coeffs()[flat] * w * (-peak).exp(),
                    GevreyLift::LogSpace { log_amplitude, phase, .. } => {
                        phase[flat] * (log_amplitude[flat] + w.ln() - peak).exp()
                    }
                };
            }
            let scaled = SpectralField::from_coeffs(grid, coeffs)?;
            out.push(peak + crate::littlewood_paley::lp_norm(&scaled, p)?.ln());
        }
        Ok(out)
    }

    /// `ln ‖U‖_{Ḃ^s_{p,q}}`, finite even when the norm itself overflows.
    pub fn log_besov_norm(&self, params: &BesovParams<T>, bank: &DyadicFilterBank<T>) -> Result<T> {
        params.validate()?;
        let logs: Vec<T> = self
            .log_block_norms(params.p, bank)?
            .iter()
            .enumerate()
            .map(|(i, &l)| l + dyadic_weight(bank.j_min() + i as i32, params.s).ln())
            .collect();
        Ok(log_lq_sum(&logs, params.q))
    }

    /// `‖U‖_{Ḃ^s_{p,q}}`; may be `+∞` when the value exceeds the type's range.
    pub fn besov_norm(&self, params: &BesovParams<T>, bank: &DyadicFilterBank<T>) -> Result<T> {
        Ok(self.log_besov_norm(params, bank)?.exp())
    }
}

/// `ln (Σ e^{q l_i})^{1/q}`, or the maximum for `q = ∞`.
pub(crate) fn log_lq_sum<T: Scalar>(logs: &[T], q: T) -> T {
    let peak = logs.iter().fold(T::neg_infinity(), |m, &l| m.max(l));
    if q.is_infinite() || peak == T::neg_infinity() {
        return peak;
    }
    let sum = logs.iter().fold(T::zero(), |acc, &l| acc + (q * (l - peak)).exp());
    peak + sum.ln() / q
}

/// Critical-space Besov norm of the Gevrey-lifted field.
pub fn gevrey_besov_norm<T: Scalar>(
    u: &SpectralField<T>,
    t: T,
    alpha: T,
    theta: T,
    params: &BesovParams<T>,
    bank: &DyadicFilterBank<T>,
) -> Result<T> {
    gevrey_lift(u, t, alpha, theta)?.besov_norm(params, bank)
}

use crate::fit::linear_fit;
use crate::spectral::SpectralField;
use crate::{Error, Result, Scalar};

/// Shells whose maximal amplitude lies in `[WINDOW_LOW, WINDOW_HIGH]·peak`
/// enter the radius fit.
pub const WINDOW_LOW: f64 = 1e-12;
pub const WINDOW_HIGH: f64 = 1e-2;
/// Amplitudes below this fraction of the largest coefficient (mean included)
/// are treated as roundoff.
pub const NOISE_FLOOR: f64 = 1e-14;
pub const MIN_SHELLS: usize = 5;

/// Slope of `-ln max_{|ξ|₁=s} |û(ξ)|` against `s` over the fit window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusFit<T> {
    pub radius: T,
    /// `|ξ|₁` at the first and last shell of the window.
    pub window: (T, T),
    pub residual: T,
    pub shells: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GevreyReport<T> {
    pub t: T,
    pub fit: RadiusFit<T>,
    /// `θ t^{1/α}`.
    pub predicted: T,
}

/// Largest coefficient modulus on each `ℓ¹` shell `Σ|k_i| = m`, `m ≥ 1`,
/// restricted to the dealiased (resolved) modes. Index `m - 1`.
pub fn shell_maxima<T: Scalar>(u: &SpectralField<T>) -> Vec<T> {
    let grid = u.grid();
    let dim = grid.dim();
    let shells = dim * grid.dealias_cutoff();
    let mut out = vec![T::zero(); shells];
    for (flat, c) in u.coeffs().iter().enumerate() {
        if flat == 0 || !grid.is_dealiased(flat) {
            continue;
        }
        let k = grid.wave_index(flat);
        let m = k[..dim].iter().map(|v| v.unsigned_abs() as usize).sum::<usize>();
        let slot = &mut out[m - 1];
        *slot = slot.max(c.norm());
    }
    out
}

/// Fits the exponential decay rate of the `ℓ¹`-shell spectrum.
///
/// The mean is excluded. Shells enter the fit when their maximum lies in the
/// window relative to the largest non-mean shell and above the roundoff floor.
pub fn analyticity_radius<T: Scalar>(u: &SpectralField<T>) -> Result<RadiusFit<T>> {
    let maxima = shell_maxima(u);
    let peak = maxima.iter().copied().fold(T::zero(), T::max);
    let top = u.max_abs();
    if !(peak > T::zero()) || !peak.is_finite() {
        return Err(Error::DegenerateFit("spectrum vanishes away from the mean".into()));
    }
    let lo = (peak * T::lit(WINDOW_LOW)).max(top * T::lit(NOISE_FLOOR));
    let hi = peak * T::lit(WINDOW_HIGH);
    let scale = u.grid().wave_scale();
    let (xs, ys): (Vec<T>, Vec<T>) = maxima
        .iter()
        .enumerate()
        .filter(|(_, &m)| m >= lo && m <= hi)
        .map(|(i, &m)| (T::from_usize_lossy(i + 1) * scale, -m.ln()))
        .unzip();
    if xs.len() < MIN_SHELLS {
        return Err(Error::DegenerateFit(format!(
            "{} shells above the noise floor inside the fit window, {MIN_SHELLS} required",
            xs.len()
        )));
    }
    let fit = linear_fit(&xs, &ys, MIN_SHELLS)?;
    Ok(RadiusFit {
        radius: fit.slope.max(T::zero()),
        window: (xs[0], xs[xs.len() - 1]),
        residual: fit.residual,
        shells: xs.len(),
    })
}

/// Radius fit at time `t` alongside the predicted `θ t^{1/α}`.
pub fn gevrey_report<T: Scalar>(u: &SpectralField<T>, t: T, alpha: T, theta: T) -> Result<GevreyReport<T>> {
    Ok(GevreyReport {
        t,
        fit: analyticity_radius(u)?,
        predicted: super::gevrey_exponent(t, alpha, theta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use num_complex::Complex;
    use std::f64::consts::TAU;

    fn from_modulus(n: usize, dim: usize, f: impl Fn(f64, f64) -> f64) -> SpectralField<f64> {
        let g = make_grid(dim, n, TAU).unwrap();
        SpectralField::from_spectrum(&g, |k| {
            let l1: f64 = k[..dim].iter().map(|v| v.abs() as f64).sum();
            let l2: f64 = k[..dim].iter().map(|v| (v * v) as f64).sum::<f64>().sqrt();
            Complex::new(f(l1, l2), 0.0)
        })
    }

    #[test]
    fn exact_exponential_spectrum() {
        let u = from_modulus(64, 2, |l1, _| (-0.7 * l1).exp());
        let fit = analyticity_radius(&u).unwrap();
        assert!((fit.radius - 0.7).abs() < 1e-6, "{fit:?}");
        assert!(fit.residual < 1e-9);
    }

    #[test]
    fn euclidean_decay_is_sandwiched() {
        let t = 0.9;
        let u = from_modulus(64, 2, |_, l2| (-t * l2).exp());
        let fit = analyticity_radius(&u).unwrap();
        assert!(fit.radius >= t / 2f64.sqrt() - 1e-3 && fit.radius <= t + 1e-3, "{fit:?}");
    }

    #[test]
    fn flat_spectrum_has_no_window() {
        let u = from_modulus(32, 2, |_, _| 1.0);
        assert!(analyticity_radius(&u).is_err());
        let zero = SpectralField::<f64>::zeros(&make_grid(2, 16, TAU).unwrap());
        assert!(analyticity_radius(&zero).is_err());
    }

    #[test]
    fn report_carries_prediction() {
        let u = from_modulus(64, 2, |l1, _| (-0.5 * l1).exp());
        let r = gevrey_report(&u, 8.0, 1.5, 1.0).unwrap();
        assert!((r.predicted - 4.0).abs() < 1e-12);
        assert!((r.fit.radius - 0.5).abs() < 1e-6);
    }
}

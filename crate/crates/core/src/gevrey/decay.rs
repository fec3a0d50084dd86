use crate::fit::linear_fit;
use crate::{Error, Result, Scalar};

pub const MIN_DECAY_SAMPLES: usize = 8;

/// `value ≈ prefactor · t^{exponent}` fitted in log-log coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit<T> {
    pub exponent: T,
    pub prefactor: T,
    /// RMS residual in natural-log units.
    pub residual: T,
    pub samples: usize,
    pub window: (T, T),
}

/// Fits a power law to `(times, values)` restricted to `window` (inclusive)
/// when given. Requires at least eight positive samples spanning a decade.
pub fn decay_fit<T: Scalar>(times: &[T], values: &[T], window: Option<(T, T)>) -> Result<DecayFit<T>> {
    if times.len() != values.len() {
        return Err(Error::ShapeMismatch { expected: times.len(), actual: values.len() });
    }
    let (lo, hi) = window.unwrap_or((T::neg_infinity(), T::infinity()));
    let picked: Vec<(T, T)> = times
        .iter()
        .zip(values)
        .filter(|(&t, _)| t >= lo && t <= hi)
        .map(|(&t, &v)| (t, v))
        .collect();
    if picked.len() < MIN_DECAY_SAMPLES {
        return Err(Error::DegenerateFit(format!(
            "{} samples in the window, {MIN_DECAY_SAMPLES} required",
            picked.len()
        )));
    }
    if let Some(&(t, v)) = picked.iter().find(|(t, v)| !(*t > T::zero()) || !(*v > T::zero())) {
        return Err(Error::DegenerateFit(format!("non-positive sample ({t}, {v})")));
    }
    let t_first = picked.iter().map(|p| p.0).fold(T::infinity(), T::min);
    let t_last = picked.iter().map(|p| p.0).fold(T::zero(), T::max);
    if t_last < T::lit(10.0) * t_first * (T::one() - T::lit(1e-9)) {
        return Err(Error::DegenerateFit(format!(
            "window [{t_first}, {t_last}] spans less than a decade"
        )));
    }
    let (xs, ys): (Vec<T>, Vec<T>) = picked.iter().map(|&(t, v)| (t.ln(), v.ln())).unzip();
    let fit = linear_fit(&xs, &ys, MIN_DECAY_SAMPLES)?;
    Ok(DecayFit {
        exponent: fit.slope,
        prefactor: fit.intercept.exp(),
        residual: fit.residual,
        samples: picked.len(),
        window: (t_first, t_last),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_times(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
    }

    #[test]
    fn exact_power_law() {
        let t = log_times(12, 0.5, 5.0);
        let v: Vec<f64> = t.iter().map(|t| 3.0 * t.powf(-0.75)).collect();
        let fit = decay_fit(&t, &v, None).unwrap();
        assert!((fit.exponent + 0.75).abs() < 1e-9);
        assert!((fit.prefactor - 3.0).abs() < 1e-9);
    }

    #[test]
    fn constant_series() {
        let t = log_times(9, 1.0, 20.0);
        let fit = decay_fit(&t, &[2.5; 9], None).unwrap();
        assert!(fit.exponent.abs() < 1e-12);
    }

    #[test]
    fn window_selects_samples() {
        let t = log_times(30, 0.01, 100.0);
        let v: Vec<f64> = t.iter().map(|&t| if t < 0.5 { 1.0 } else { t.powf(-1.0) }).collect();
        let fit = decay_fit(&t, &v, Some((0.5, 100.0))).unwrap();
        assert!((fit.exponent + 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_short_or_nonpositive() {
        let t = log_times(12, 1.0, 5.0);
        assert!(decay_fit(&t, &[1.0; 12], None).is_err());
        let t = log_times(7, 1.0, 50.0);
        assert!(decay_fit(&t, &[1.0; 7], None).is_err());
        let t = log_times(10, 1.0, 50.0);
        let mut v = vec![1.0; 10];
        v[3] = 0.0;
        assert!(decay_fit(&t, &v, None).is_err());
    }
}

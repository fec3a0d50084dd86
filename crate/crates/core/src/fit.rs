//! Ordinary least-squares line fits.

use crate::{Error, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Root-mean-square residual of the fitted line.
    pub residual: T,
    pub samples: usize,
}

/// Fits `y ≈ slope·x + intercept`. Needs at least `min_samples` points and
/// two distinct abscissae.
pub fn linear_fit<T: Scalar>(x: &[T], y: &[T], min_samples: usize) -> Result<LinearFit<T>> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch { expected: x.len(), actual: y.len() });
    }
    let n = x.len();
    if n < min_samples.max(2) {
        return Err(Error::DegenerateFit(format!(
            "{n} samples, at least {} required",
            min_samples.max(2)
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFit("non-finite sample".into()));
    }
    let nf = T::from_usize_lossy(n);
    let mx = x.iter().fold(T::zero(), |a, &v| a + v) / nf;
    let my = y.iter().fold(T::zero(), |a, &v| a + v) / nf;
    let (sxx, sxy) = x.iter().zip(y).fold((T::zero(), T::zero()), |(sxx, sxy), (&xi, &yi)| {
        let dx = xi - mx;
        (sxx + dx * dx, sxy + dx * (yi - my))
    });
    if sxx <= T::zero() {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss = x.iter().zip(y).fold(T::zero(), |a, (&xi, &yi)| {
        let r = yi - (slope * xi + intercept);
        a + r * r
    });
    Ok(LinearFit { slope, intercept, residual: (ss / nf).sqrt(), samples: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let x = [0.0, 1.0, 2.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| -0.75 * v + 2.0).collect();
        let fit = linear_fit(&x, &y, 3).unwrap();
        assert!((fit.slope + 0.75).abs() < 1e-14);
        assert!((fit.intercept - 2.0).abs() < 1e-14);
        assert!(fit.residual < 1e-14);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(linear_fit(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0], 3).is_err());
        assert!(linear_fit(&[1.0, 2.0], &[0.0, 1.0], 3).is_err());
        assert!(linear_fit(&[1.0, 2.0, 3.0], &[0.0, f64::NAN, 1.0], 3).is_err());
    }
}

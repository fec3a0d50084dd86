use num_complex::Complex;

use super::field::SpectralField;
use crate::{Result, Scalar};

/// Spectral coefficients of `f·g` with the 2/3 rule applied.
///
/// Both inputs are truncated to the dealias cutoff, multiplied at the grid
/// points, transformed back, and truncated again. Every retained mode of the
/// result is the exact convolution of the truncated inputs.
pub fn pointwise_product_dealiased<T: Scalar>(
    f: &SpectralField<T>,
    g: &SpectralField<T>,
) -> Result<SpectralField<T>> {
    f.grid().check_same(g.grid())?;
    let fp = f.clone().dealiased().inverse_complex();
    let gp = g.clone().dealiased().inverse_complex();
    product_of_samples(f, &fp, &gp)
}

/// Dealiased product of one field with several others, sharing the first
/// inverse transform.
pub fn products_with<T: Scalar>(
    f: &SpectralField<T>,
    others: &[&SpectralField<T>],
) -> Result<Vec<SpectralField<T>>> {
    let fp = f.clone().dealiased().inverse_complex();
    others
        .iter()
        .map(|g| {
            f.grid().check_same(g.grid())?;
            let gp = (*g).clone().dealiased().inverse_complex();
            product_of_samples(f, &fp, &gp)
        })
        .collect()
}

fn product_of_samples<T: Scalar>(
    like: &SpectralField<T>,
    fp: &[Complex<T>],
    gp: &[Complex<T>],
) -> Result<SpectralField<T>> {
    let prod: Vec<Complex<T>> = fp.iter().zip(gp).map(|(a, b)| a * b).collect();
    Ok(SpectralField::forward_complex(&prod, like.grid())?.dealiased())
}

use num_complex::Complex;

use super::filter::DyadicFilterBank;
use crate::spectral::SpectralField;
use crate::{Result, Scalar};

/// Bony decomposition `fg = T_f g + T_g f + R(f, g)`.
#[derive(Clone, Debug)]
pub struct Paraproduct<T: Scalar> {
    /// `T_f g = Σ_j S_{j-1}f · Δ_j g`.
    pub low_high: SpectralField<T>,
    /// `T_g f = Σ_j S_{j-1}g · Δ_j f`.
    pub high_low: SpectralField<T>,
    /// `R(f, g) = Σ_{|j-j'|≤1} Δ_j f · Δ_{j'} g`, plus the product of the
    /// means, which no dyadic block carries on the torus.
    pub remainder: SpectralField<T>,
}

impl<T: Scalar> Paraproduct<T> {
    /// `T_f g + T_g f + R(f, g)`.
    pub fn sum(&self) -> SpectralField<T> {
        &(&self.low_high + &self.high_low) + &self.remainder
    }
}

/// Samples of every dyadic block and low-pass filter of a dealiased field.
struct Pieces<T> {
    mean: Complex<T>,
    blocks: Vec<Vec<Complex<T>>>,
    /// `lows[k]` holds `S_{j-1}` for `j = j_min + k`.
    lows: Vec<Vec<Complex<T>>>,
}

fn pieces<T: Scalar>(f: &SpectralField<T>, bank: &DyadicFilterBank<T>) -> Result<Pieces<T>> {
    let f = f.clone().dealiased();
    let mut blocks = Vec::with_capacity(bank.shell_count());
    let mut lows = Vec::with_capacity(bank.shell_count());
    for j in bank.indices() {
        blocks.push(super::dyadic_block(&f, j, bank)?.inverse_complex());
        lows.push(super::low_pass(&f, j - 1, bank)?.inverse_complex());
    }
    Ok(Pieces { mean: f.coeffs()[0], blocks, lows })
}

/// Bony paraproduct of two fields. Both inputs are dealiased first and the
/// three parts are dealiased after multiplication, so their sum reproduces
/// [`pointwise_product_dealiased`](crate::spectral::pointwise_product_dealiased).
pub fn paraproduct<T: Scalar>(
    f: &SpectralField<T>,
    g: &SpectralField<T>,
    bank: &DyadicFilterBank<T>,
) -> Result<Paraproduct<T>> {
    bank.grid().check_same(f.grid())?;
    bank.grid().check_same(g.grid())?;
    let grid = bank.grid();
    let pf = pieces(f, bank)?;
    let pg = pieces(g, bank)?;
    let zero = Complex::new(T::zero(), T::zero());
    let mut low_high = vec![zero; grid.len()];
    let mut high_low = vec![zero; grid.len()];
    let mut remainder = vec![pf.mean * pg.mean; grid.len()];
    let shells = bank.shell_count();
    for k in 0..shells {
        for (i, (lh, hl)) in low_high.iter_mut().zip(high_low.iter_mut()).enumerate() {
            *lh += pf.lows[k][i] * pg.blocks[k][i];
            *hl += pg.lows[k][i] * pf.blocks[k][i];
        }
        for kk in k.saturating_sub(1)..(k + 2).min(shells) {
            for (r, (a, b)) in remainder.iter_mut().zip(pf.blocks[k].iter().zip(&pg.blocks[kk])) {
                *r += a * b;
            }
        }
    }
    let finish = |samples: Vec<Complex<T>>| -> Result<SpectralField<T>> {
        Ok(SpectralField::forward_complex(&samples, grid)?.dealiased())
    };
    Ok(Paraproduct {
        low_high: finish(low_high)?,
        high_low: finish(high_low)?,
        remainder: finish(remainder)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::build_filter_bank;
    use crate::spectral::{make_grid, pointwise_product_dealiased};
    use std::f64::consts::TAU;

    #[test]
    fn zero_factor_gives_zero_parts() {
        let g = make_grid(2, 16, TAU).unwrap();
        let bank = build_filter_bank(&g);
        let f = SpectralField::zeros(&g);
        let h = SpectralField::from_fn(&g, |x| x[0].cos() + x[1].sin());
        let p = paraproduct(&f, &h, &bank).unwrap();
        for part in [&p.low_high, &p.high_low, &p.remainder] {
            assert_eq!(part.max_abs(), 0.0);
        }
    }

    #[test]
    fn low_times_high_is_pure_paraproduct() {
        // |ξ| = 1 is in shells -1 and 0 only, so S_{j-1} keeps it from j = 2
        // on (2^{-1}·1 ≤ 3/4). |η| = 8 is in shells 2 and 3. Every product term
        // therefore has the low factor in S_{j-1} and falls into T_f g.
        let g = make_grid(2, 32, TAU).unwrap();
        let bank = build_filter_bank(&g);
        let f = SpectralField::cosine_mode(&g, &[1, 0], 1.0).unwrap();
        let h = SpectralField::cosine_mode(&g, &[0, 8], 1.0).unwrap();
        let p = paraproduct(&f, &h, &bank).unwrap();
        let full = pointwise_product_dealiased(&f, &h).unwrap();
        assert!((&p.low_high - &full).max_abs() < 1e-14);
        assert!(p.high_low.max_abs() < 1e-14);
        assert!(p.remainder.max_abs() < 1e-14);
    }

    #[test]
    fn reconstruction_with_means() {
        let g = make_grid(2, 32, TAU).unwrap();
        let bank = build_filter_bank(&g);
        let f = SpectralField::from_fn(&g, |x| 1.5 + (x[0] + 2.0 * x[1]).cos() + (5.0 * x[0]).sin());
        let h = SpectralField::from_fn(&g, |x| -0.5 + (3.0 * x[1]).cos() * x[0].sin());
        let p = paraproduct(&f, &h, &bank).unwrap();
        let full = pointwise_product_dealiased(&f, &h).unwrap();
        assert!((&p.sum() - &full).max_abs() < 1e-12 * full.max_abs());
    }
}

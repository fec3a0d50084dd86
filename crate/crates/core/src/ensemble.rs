//! Seeded random and structured initial data.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::spectral::{Grid, SpectralField};
use crate::{Error, Result, Scalar};

/// Independent generator for member `stream` of the ensemble seeded by `seed`.
pub fn member_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Real field whose coefficients are `amplitude(ξ)·Z_ξ`, with `Z` drawn by
/// `draw` on one representative of each `±ξ` pair and mirrored to keep
/// Hermitian symmetry. The mean and all Nyquist modes are zero.
fn hermitian_field<T: Scalar>(
    grid: &Grid<T>,
    mut draw: impl FnMut() -> Complex<T>,
    amplitude: impl Fn(usize) -> T,
) -> SpectralField<T> {
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    for flat in 1..grid.len() {
        let conj = grid.conjugate_index(flat);
        if conj < flat || grid.has_nyquist(flat) {
            continue;
        }
        let a = amplitude(flat);
        if a == T::zero() {
            continue;
        }
        let z = draw() * a;
        coeffs[flat] = z;
        coeffs[conj] = z.conj();
    }
    SpectralField::from_coeffs(grid, coeffs).expect("length matches grid")
}

/// Gaussian random field with envelope `|ξ|^{-exponent}` restricted to
/// `max_i |k_i| ≤ band`, normalized to unit `L²` mean square.
pub fn gaussian_field<T: Scalar, R: Rng>(grid: &Grid<T>, rng: &mut R, exponent: T, band: usize) -> SpectralField<T> {
    let mut draw = || {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex::new(T::lit(re), T::lit(im))
    };
    let field = hermitian_field(grid, &mut draw, |flat| {
        let k = grid.wave_index(flat);
        let kmax = k[..grid.dim()].iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0);
        if kmax > band {
            T::zero()
        } else {
            grid.modulus(flat).powf(-exponent)
        }
    });
    normalize(field)
}

/// The default bilinear-check law: envelope `|ξ|^{-(n+1)/2}`, band-limited
/// to half the dealias index.
pub fn bilinear_member<T: Scalar>(grid: &Grid<T>, seed: u64, member: u64) -> SpectralField<T> {
    let mut rng = member_rng(seed, member);
    let exponent = T::from_usize_lossy(grid.dim() + 1) * T::lit(0.5);
    gaussian_field(grid, &mut rng, exponent, (grid.dealias_cutoff() / 2).max(1))
}

/// Deterministic amplitudes `|ξ|^{-exponent}` with uniformly random phases on
/// `0 < max_i |k_i| ≤ band`, scaled so that the largest coefficient is `amplitude`.
pub fn random_phase_field<T: Scalar, R: Rng>(
    grid: &Grid<T>,
    rng: &mut R,
    exponent: T,
    band: usize,
    amplitude: T,
) -> SpectralField<T> {
    let mut draw = || {
        let angle = T::lit(rng.random::<f64>()) * T::TAU();
        Complex::new(angle.cos(), angle.sin())
    };
    let field = hermitian_field(grid, &mut draw, |flat| {
        let k = grid.wave_index(flat);
        let kmax = k[..grid.dim()].iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0);
        if kmax > band {
            T::zero()
        } else {
            grid.modulus(flat).powf(-exponent)
        }
    });
    let peak = field.max_abs();
    if peak > T::zero() {
        field.scaled(amplitude / peak)
    } else {
        field
    }
}

fn normalize<T: Scalar>(field: SpectralField<T>) -> SpectralField<T> {
    let e = field.coeff_energy();
    if e > T::zero() {
        field.scaled(e.sqrt().recip())
    } else {
        field
    }
}

/// Periodized Gaussian bump of total mass `mass` and standard deviation
/// `width`, centred in the box.
pub fn gaussian_bump<T: Scalar>(grid: &Grid<T>, mass: T, width: T) -> Result<SpectralField<T>> {
    if !(width > T::zero()) {
        return Err(Error::Config(format!("bump width {width} must be positive")));
    }
    // Spectrum of the Gaussian: mass/L^n · e^{-σ²|ξ|²/2}, with mode phases
    // placing the centre at L/2.
    let l = grid.period();
    let scale = mass / grid.volume();
    let centre = l * T::lit(0.5);
    let half_var = width * width * T::lit(0.5);
    Ok(SpectralField::from_spectrum(grid, |k| {
        let flat = grid.flat_of_wave(&k[..grid.dim()]).expect("index from lattice");
        let xi = grid.wave_vector(flat);
        let r2 = xi[..grid.dim()].iter().fold(T::zero(), |a, &v| a + v * v);
        let phase = xi[..grid.dim()].iter().fold(T::zero(), |a, &v| a - v * centre);
        Complex::from_polar(scale * (-half_var * r2).exp(), phase)
    }))
}

/// Scale-critical data: `û(ξ) ∝ |ξ|^{α-n} e^{-t₀|ξ|^α}` plus a mean,
/// which is the free evolution over `t₀` of a profile homogeneous of degree `-α`.
/// `amplitude` is the coefficient at `|ξ| = 1`.
pub fn critical_profile<T: Scalar>(grid: &Grid<T>, alpha: T, smoothing: T, amplitude: T, mean: T) -> SpectralField<T> {
    let n = T::from_usize_lossy(grid.dim());
    let mut field = SpectralField::from_spectrum(grid, |k| {
        let flat = grid.flat_of_wave(&k[..grid.dim()]).expect("index from lattice");
        if flat == 0 || grid.has_nyquist(flat) {
            return Complex::new(T::zero(), T::zero());
        }
        let r = grid.modulus(flat);
        Complex::new(amplitude * r.powf(alpha - n) * (-smoothing * r.powf(alpha)).exp(), T::zero())
    });
    field.coeffs_mut()[0] = Complex::new(mean, T::zero());
    field
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use std::f64::consts::TAU;

    #[test]
    fn members_are_reproducible_and_distinct() {
        let g = make_grid(2, 16, TAU).unwrap();
        let a = bilinear_member::<f64>(&g, 7, 3);
        let b = bilinear_member::<f64>(&g, 7, 3);
        let c = bilinear_member::<f64>(&g, 7, 4);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.is_hermitian(1e-15));
        assert!((a.coeff_energy() - 1.0).abs() < 1e-12);
        assert_eq!(a.coeffs()[0], Complex::new(0.0, 0.0));
    }

    #[test]
    fn band_limit_respected() {
        let g = make_grid(2, 32, TAU).unwrap();
        let f = bilinear_member::<f64>(&g, 1, 0);
        let band = (g.dealias_cutoff() / 2) as i64;
        for (i, c) in f.coeffs().iter().enumerate() {
            let k = g.wave_index(i);
            if k[0].abs() > band || k[1].abs() > band {
                assert_eq!(c.norm(), 0.0);
            }
        }
    }

    #[test]
    fn bump_mass_and_peak() {
        let g = make_grid(2, 64, TAU).unwrap();
        let u = gaussian_bump(&g, 2.0, 0.4).unwrap();
        assert!((u.mass() - 2.0).abs() < 1e-12);
        let phys = u.inverse();
        let peak = phys.iter().cloned().fold(f64::MIN, f64::max);
        let expect = 2.0 / (TAU * 0.16);
        assert!((peak - expect).abs() < 1e-6 * expect, "{peak} vs {expect}");
        assert!(u.is_hermitian(1e-14));
    }

    #[test]
    fn random_phase_amplitudes() {
        let g = make_grid(2, 32, TAU).unwrap();
        let mut rng = member_rng(5, 0);
        let f = random_phase_field(&g, &mut rng, 0.0f64, 8, 1e-3);
        assert!((f.max_abs() - 1e-3).abs() < 1e-15);
        assert!(f.is_hermitian(1e-15));
    }
}

use num_complex::Complex;

use crate::spectral::{Grid, SpectralField};
use crate::{Error, Result, Scalar};

/// Inner edge of the transition region of `χ`.
pub const CHI_INNER: f64 = 0.75;
/// Outer edge of the transition region of `χ`.
pub const CHI_OUTER: f64 = 4.0 / 3.0;

/// Radial low-pass profile: 1 up to 3/4, 0 from 4/3 on, and a quintic
/// smoothstep (C²) in between.
pub fn chi<T: Scalar>(r: T) -> T {
    let inner = T::lit(CHI_INNER);
    let outer = T::lit(CHI_OUTER);
    if r <= inner {
        return T::one();
    }
    if r >= outer {
        return T::zero();
    }
    let x = (r - inner) / (outer - inner);
    let x3 = x * x * x;
    let step = x3 * (T::lit(10.0) + x * (T::lit(-15.0) + x * T::lit(6.0)));
    T::one() - step
}

/// Shell profile `φ(r) = χ(r/2) − χ(r)`, supported in `(3/4, 8/3)`.
pub fn phi<T: Scalar>(r: T) -> T {
    chi(r * T::lit(0.5)) - chi(r)
}

/// The family `φ(2^{-j}ξ)` sampled on a grid's frequency lattice.
///
/// Every nonzero lattice vector lies in at most two shells, so each shell is
/// stored sparsely as `(flat index, weight)` pairs. The range `j_min..=j_max`
/// contains every `j` for which some lattice vector has a positive weight,
/// which makes `Σ_j φ(2^{-j}ξ) = 1` hold on every nonzero mode.
#[derive(Clone, Debug)]
pub struct DyadicFilterBank<T: Scalar> {
    grid: Grid<T>,
    j_min: i32,
    j_max: i32,
    shells: Vec<Vec<(usize, T)>>,
    moduli: Vec<T>,
}

impl<T: Scalar> DyadicFilterBank<T> {
    pub fn new(grid: &Grid<T>) -> Self {
        let moduli: Vec<T> = (0..grid.len()).map(|i| grid.modulus(i)).collect();
        let mut entries: Vec<(i32, usize, T)> = Vec::new();
        for (flat, &r) in moduli.iter().enumerate() {
            if r == T::zero() {
                continue;
            }
            // φ(2^{-j} r) > 0 needs 3/4 < 2^{-j} r < 8/3.
            let centre = r.log2().floor().to_i32().unwrap_or(0);
            for j in centre - 2..=centre + 2 {
                let w = phi(r * T::lit(2.0).powi(-j));
                if w > T::zero() {
                    entries.push((j, flat, w));
                }
            }
        }
        let j_min = entries.iter().map(|e| e.0).min().unwrap_or(0);
        let j_max = entries.iter().map(|e| e.0).max().unwrap_or(-1);
        let mut shells = vec![Vec::new(); (j_max - j_min + 1).max(0) as usize];
        for (j, flat, w) in entries {
            shells[(j - j_min) as usize].push((flat, w));
        }
        for shell in &mut shells {
            shell.sort_by_key(|e| e.0);
        }
        Self { grid: grid.clone(), j_min, j_max, shells, moduli }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// All resolved dyadic indices in increasing order.
    pub fn indices(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min..=self.j_max
    }

    pub fn shell_count(&self) -> usize {
        self.shells.len()
    }

    pub fn check_index(&self, j: i32) -> Result<()> {
        if j < self.j_min || j > self.j_max {
            return Err(Error::OutOfRange { j, j_min: self.j_min, j_max: self.j_max });
        }
        Ok(())
    }

    /// Nonzero `(flat index, φ(2^{-j}ξ))` entries of shell `j`.
    pub fn shell(&self, j: i32) -> Result<&[(usize, T)]> {
        self.check_index(j)?;
        Ok(&self.shells[(j - self.j_min) as usize])
    }

    /// `φ(2^{-j}ξ)` at one lattice point; zero outside the shell.
    pub fn weight(&self, j: i32, flat: usize) -> T {
        phi(self.moduli[flat] * T::lit(2.0).powi(-j))
    }

    /// Symbol of `S_j`, namely `χ(2^{-j}ξ)`.
    pub fn low_pass_weight(&self, j: i32, flat: usize) -> T {
        chi(self.moduli[flat] * T::lit(2.0).powi(-j))
    }

    /// Dense table of `φ(2^{-j}ξ)` over the lattice.
    pub fn phi_values(&self, j: i32) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.grid.len()];
        for &(flat, w) in self.shell(j)? {
            out[flat] = w;
        }
        Ok(out)
    }

    /// Largest deviation of `Σ_j φ(2^{-j}ξ)` from 1 over nonzero modes.
    pub fn partition_residual(&self) -> T {
        let mut sum = vec![T::zero(); self.grid.len()];
        for shell in &self.shells {
            for &(flat, w) in shell {
                sum[flat] += w;
            }
        }
        sum.iter()
            .zip(&self.moduli)
            .filter(|(_, &r)| r > T::zero())
            .fold(T::zero(), |acc, (&s, _)| acc.max((s - T::one()).abs()))
    }

    /// Valid arguments of [`low_pass`]: one step beyond each end of the
    /// resolved range, where `S_j` is the mean projection and the identity.
    pub fn low_pass_range(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min - 1..=self.j_max + 1
    }
}

pub fn build_filter_bank<T: Scalar>(grid: &Grid<T>) -> DyadicFilterBank<T> {
    DyadicFilterBank::new(grid)
}

/// `Δ_j f`.
pub fn dyadic_block<T: Scalar>(
    f: &SpectralField<T>,
    j: i32,
    bank: &DyadicFilterBank<T>,
) -> Result<SpectralField<T>> {
    bank.grid().check_same(f.grid())?;
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); f.grid().len()];
    for &(flat, w) in bank.shell(j)? {
        coeffs[flat] = f.coeffs()[flat] * w;
    }
    SpectralField::from_coeffs(f.grid(), coeffs)
}

/// `S_j f`, the multiplier `χ(2^{-j}ξ)`. It equals the mean of `f` plus
/// `Σ_{k≤j-1} Δ_k f`.
pub fn low_pass<T: Scalar>(
    f: &SpectralField<T>,
    j: i32,
    bank: &DyadicFilterBank<T>,
) -> Result<SpectralField<T>> {
    bank.grid().check_same(f.grid())?;
    if !bank.low_pass_range().contains(&j) {
        return Err(Error::OutOfRange { j, j_min: bank.j_min() - 1, j_max: bank.j_max() + 1 });
    }
    Ok(f.map_indexed(|flat, c| c * bank.low_pass_weight(j, flat)))
}

/// `S_j f` assembled block by block, as the mean plus `Σ_{k≤j-1} Δ_k f`.
pub fn low_pass_by_blocks<T: Scalar>(
    f: &SpectralField<T>,
    j: i32,
    bank: &DyadicFilterBank<T>,
) -> Result<SpectralField<T>> {
    bank.grid().check_same(f.grid())?;
    if !bank.low_pass_range().contains(&j) {
        return Err(Error::OutOfRange { j, j_min: bank.j_min() - 1, j_max: bank.j_max() + 1 });
    }
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); f.grid().len()];
    coeffs[0] = f.coeffs()[0];
    for k in bank.j_min()..j {
        for &(flat, w) in bank.shell(k)? {
            coeffs[flat] += f.coeffs()[flat] * w;
        }
    }
    SpectralField::from_coeffs(f.grid(), coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use std::f64::consts::TAU;

    #[test]
    fn profile_edges() {
        assert_eq!(chi(0.75f64), 1.0);
        assert_eq!(chi(4.0f64 / 3.0), 0.0);
        assert_eq!(phi(0.75f64), 0.0);
        assert_eq!(phi(8.0f64 / 3.0), 0.0);
        assert_eq!(phi(1.0f64), 1.0 - chi(1.0));
        // Smoothstep symmetric about the midpoint.
        let mid = 0.5 * (0.75 + 4.0 / 3.0);
        assert!((chi(mid) - 0.5f64).abs() < 1e-15);
    }

    #[test]
    fn bank_on_64_square() {
        let g = make_grid(2, 64, TAU).unwrap();
        let bank = build_filter_bank(&g);
        // Smallest |ξ| is 1, so φ(2^{-j}) > 0 first at j = -1.
        assert_eq!(bank.j_min(), -1);
        // Corner |ξ| = 32√2 ≈ 45.25 lies in shell 5 (45.25/32 ≈ 1.41 > 3/4).
        assert_eq!(bank.j_max(), 5);
        assert!(bank.partition_residual() < 1e-12);
    }

    #[test]
    fn support_is_exact() {
        let g = make_grid(2, 32, TAU).unwrap();
        let bank = build_filter_bank(&g);
        for j in bank.indices() {
            for i in 0..g.len() {
                let r = g.modulus(i) * 2f64.powi(-j);
                if r <= 0.75 || r >= 8.0 / 3.0 {
                    assert_eq!(bank.weight(j, i), 0.0);
                }
            }
        }
    }

    #[test]
    fn low_pass_forms_agree() {
        let g = make_grid(2, 32, TAU).unwrap();
        let bank = build_filter_bank(&g);
        let f = SpectralField::from_fn(&g, |x| (x[0] * 3.0).sin() + (x[1] - x[0]).cos().exp());
        for j in bank.low_pass_range() {
            let a = low_pass(&f, j, &bank).unwrap();
            let b = low_pass_by_blocks(&f, j, &bank).unwrap();
            let err = (&a - &b).max_abs();
            assert!(err < 1e-12 * f.max_abs(), "j={j} err={err}");
        }
        assert!(low_pass(&f, bank.j_max() + 2, &bank).is_err());
    }

    #[test]
    fn out_of_range_block_errors() {
        let g = make_grid(1, 16, TAU).unwrap();
        let bank = build_filter_bank(&g);
        let f = SpectralField::zeros(&g);
        assert!(matches!(
            dyadic_block(&f, bank.j_max() + 1, &bank),
            Err(Error::OutOfRange { .. })
        ));
    }
}

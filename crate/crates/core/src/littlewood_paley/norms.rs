use num_complex::Complex;
use rayon::prelude::*;

use super::filter::DyadicFilterBank;
use crate::spectral::SpectralField;
use crate::{Error, Result, Scalar};

/// Regularity and integrability indices of `Ḃ^s_{p,q}`. `p` and `q` may be
/// `T::infinity()`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovParams<T> {
    pub s: T,
    pub p: T,
    pub q: T,
}

impl<T: Scalar> BesovParams<T> {
    pub fn new(s: T, p: T, q: T) -> Result<Self> {
        let params = Self { s, p, q };
        params.validate()?;
        Ok(params)
    }

    /// The scaling-critical space `Ḃ^{-α+n/p}_{p,q}`.
    pub fn critical(alpha: T, dim: usize, p: T, q: T) -> Result<Self> {
        Self::new(-alpha + T::from_usize_lossy(dim) / p, p, q)
    }

    pub fn validate(&self) -> Result<()> {
        check_exponent("p", self.p)?;
        check_exponent("q", self.q)?;
        if !self.s.is_finite() {
            return Err(Error::Config(format!("Besov regularity s = {} is not finite", self.s)));
        }
        Ok(())
    }

    /// Whether `s < n/p`, or `s = n/p` with `q = 1`: the range in which the
    /// homogeneous space is realized by tempered distributions on `ℝⁿ`.
    /// Outside it the norm is still computed, formally, from the blocks.
    pub fn is_realizable(&self, dim: usize) -> bool {
        let np = T::from_usize_lossy(dim) / self.p;
        self.s < np || (self.s == np && self.q == T::one())
    }
}

/// Parameters of `L̃^ρ_T(Ḃ^s_{p,q})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedNormParams<T> {
    pub rho: T,
    pub besov: BesovParams<T>,
}

impl<T: Scalar> MixedNormParams<T> {
    pub fn new(rho: T, besov: BesovParams<T>) -> Result<Self> {
        check_exponent("rho", rho)?;
        besov.validate()?;
        Ok(Self { rho, besov })
    }
}

fn check_exponent<T: Scalar>(name: &str, v: T) -> Result<()> {
    if v.is_nan() || v < T::one() {
        return Err(Error::Config(format!("exponent {name} = {v} must lie in [1, ∞]")));
    }
    Ok(())
}

/// `L^p` norm over the torus of a (possibly complex) field sampled on its grid.
///
/// Uses Parseval for `p = 2` and a uniform Riemann sum otherwise; `p = ∞`
/// is the largest modulus over grid points.
pub fn lp_norm<T: Scalar>(f: &SpectralField<T>, p: T) -> Result<T> {
    lp_norm_vector(&[f], p)
}

/// `L^p` norm of the pointwise Euclidean magnitude of a vector field.
pub fn lp_norm_vector<T: Scalar>(components: &[&SpectralField<T>], p: T) -> Result<T> {
    check_exponent("p", p)?;
    let Some(first) = components.first() else {
        return Ok(T::zero());
    };
    for c in components {
        first.grid().check_same(c.grid())?;
    }
    if p == T::lit(2.0) {
        let energy = components.iter().fold(T::zero(), |acc, c| acc + c.coeff_energy());
        return Ok((energy * first.grid().volume()).sqrt());
    }
    let samples: Vec<Vec<Complex<T>>> = components.iter().map(|c| c.inverse_complex()).collect();
    Ok(lp_of_samples(&samples, p, first.grid().cell_volume()))
}

/// Riemann-sum `L^p` norm of a field, without the Parseval shortcut.
pub fn lp_norm_quadrature<T: Scalar>(f: &SpectralField<T>, p: T) -> Result<T> {
    check_exponent("p", p)?;
    Ok(lp_of_samples(&[f.inverse_complex()], p, f.grid().cell_volume()))
}

pub(crate) fn lp_of_samples<T: Scalar>(samples: &[Vec<Complex<T>>], p: T, cell: T) -> T {
    let len = samples.first().map_or(0, Vec::len);
    let magnitude = |i: usize| {
        if samples.len() == 1 {
            samples[0][i].norm()
        } else {
            samples.iter().fold(T::zero(), |acc, s| acc + s[i].norm_sqr()).sqrt()
        }
    };
    if p.is_infinite() {
        return (0..len).fold(T::zero(), |acc, i| acc.max(magnitude(i)));
    }
    // Scale by the maximum so that large p cannot overflow.
    let peak = (0..len).fold(T::zero(), |acc, i| acc.max(magnitude(i)));
    if peak == T::zero() {
        return T::zero();
    }
    let sum = (0..len).fold(T::zero(), |acc, i| acc + (magnitude(i) / peak).powf(p));
    peak * (sum * cell).powf(p.recip())
}

/// `‖Δ_j f‖_{L^p}` for every resolved `j`, indexed by `j - j_min`.
pub fn block_lp_norms<T: Scalar>(
    f: &SpectralField<T>,
    p: T,
    bank: &DyadicFilterBank<T>,
) -> Result<Vec<T>> {
    block_lp_norms_vector(&[f], p, bank)
}

/// Block norms of a vector field, measuring each block by the `L^p` norm of
/// its pointwise Euclidean magnitude.
pub fn block_lp_norms_vector<T: Scalar>(
    components: &[&SpectralField<T>],
    p: T,
    bank: &DyadicFilterBank<T>,
) -> Result<Vec<T>> {
    check_exponent("p", p)?;
    for c in components {
        bank.grid().check_same(c.grid())?;
    }
    let grid = bank.grid();
    let volume = grid.volume();
    let js: Vec<i32> = bank.indices().collect();
    js.par_iter()
        .map(|&j| {
            let shell = bank.shell(j)?;
            if p == T::lit(2.0) {
                let energy = components.iter().fold(T::zero(), |acc, c| {
                    shell.iter().fold(acc, |a, &(flat, w)| a + (c.coeffs()[flat] * w).norm_sqr())
                });
                return Ok((energy * volume).sqrt());
            }
            let samples: Vec<Vec<Complex<T>>> = components
                .iter()
                .map(|c| {
                    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); grid.len()];
                    for &(flat, w) in shell {
                        coeffs[flat] = c.coeffs()[flat] * w;
                    }
                    SpectralField::from_coeffs(grid, coeffs).map(|b| b.inverse_complex())
                })
                .collect::<Result<_>>()?;
            Ok(lp_of_samples(&samples, p, grid.cell_volume()))
        })
        .collect()
}

/// `ℓ^q` combination `(Σ_j (2^{js} b_j)^q)^{1/q}` of block norms starting at `j_min`.
pub fn combine_blocks<T: Scalar>(blocks: &[T], j_min: i32, s: T, q: T) -> T {
    let weighted = blocks
        .iter()
        .enumerate()
        .map(|(i, &b)| dyadic_weight(j_min + i as i32, s) * b);
    lq_sum(weighted, q)
}

pub(crate) fn lq_sum<T: Scalar>(values: impl Iterator<Item = T>, q: T) -> T {
    let values: Vec<T> = values.collect();
    let peak = values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    if q.is_infinite() || peak == T::zero() {
        return peak;
    }
    let sum = values.iter().fold(T::zero(), |acc, v| acc + (v.abs() / peak).powf(q));
    peak * sum.powf(q.recip())
}

/// `2^{js}`.
pub fn dyadic_weight<T: Scalar>(j: i32, s: T) -> T {
    (T::from_i64_lossy(j as i64) * s * T::LN_2()).exp()
}

/// Homogeneous Besov norm restricted to the resolved shells.
pub fn besov_norm<T: Scalar>(
    f: &SpectralField<T>,
    params: &BesovParams<T>,
    bank: &DyadicFilterBank<T>,
) -> Result<T> {
    params.validate()?;
    let blocks = block_lp_norms(f, params.p, bank)?;
    Ok(combine_blocks(&blocks, bank.j_min(), params.s, params.q))
}

/// Besov norm of a vector field (pointwise Euclidean magnitude in each block).
pub fn besov_norm_vector<T: Scalar>(
    components: &[&SpectralField<T>],
    params: &BesovParams<T>,
    bank: &DyadicFilterBank<T>,
) -> Result<T> {
    params.validate()?;
    let blocks = block_lp_norms_vector(components, params.p, bank)?;
    Ok(combine_blocks(&blocks, bank.j_min(), params.s, params.q))
}

/// Block norms of a time series, tabulated once so that mixed norms for
/// several `(s, q, ρ)` can share them.
#[derive(Clone, Debug)]
pub struct BlockNormTable<T> {
    pub times: Vec<T>,
    pub j_min: i32,
    pub p: T,
    /// `rows[sample][j - j_min] = ‖Δ_j f(t_sample)‖_{L^p}`.
    pub rows: Vec<Vec<T>>,
}

impl<T: Scalar> BlockNormTable<T> {
    pub fn from_series(
        times: &[T],
        series: &[SpectralField<T>],
        p: T,
        bank: &DyadicFilterBank<T>,
    ) -> Result<Self> {
        let parts: Vec<Vec<&SpectralField<T>>> = series.iter().map(|f| vec![f]).collect();
        Self::from_vector_series(times, &parts, p, bank)
    }

    /// Like [`from_series`](Self::from_series) for vector-valued samples.
    pub fn from_vector_series(
        times: &[T],
        series: &[Vec<&SpectralField<T>>],
        p: T,
        bank: &DyadicFilterBank<T>,
    ) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::Config("mixed norm of an empty series".into()));
        }
        if times.len() != series.len() {
            return Err(Error::ShapeMismatch { expected: series.len(), actual: times.len() });
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("sample times must be strictly increasing".into()));
        }
        let rows = series
            .iter()
            .map(|parts| block_lp_norms_vector(parts, p, bank))
            .collect::<Result<_>>()?;
        Ok(Self { times: times.to_vec(), j_min: bank.j_min(), p, rows })
    }

    pub fn shell_count(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Besov norm of one sample.
    pub fn besov_at(&self, sample: usize, s: T, q: T) -> T {
        combine_blocks(&self.rows[sample], self.j_min, s, q)
    }

    /// `(∫ ‖Δ_j f‖^ρ dt)^{1/ρ}` per shell, trapezoidal in time; `ρ = ∞` is
    /// the supremum over samples.
    pub fn time_integrated(&self, rho: T) -> Vec<T> {
        (0..self.shell_count())
            .map(|k| {
                let column = self.rows.iter().map(|r| r[k]);
                if rho.is_infinite() {
                    return column.fold(T::zero(), T::max);
                }
                let vals: Vec<T> = column.map(|b| b.powf(rho)).collect();
                let integral = self
                    .times
                    .windows(2)
                    .zip(vals.windows(2))
                    .fold(T::zero(), |acc, (t, v)| acc + (t[1] - t[0]) * (v[0] + v[1]) * T::lit(0.5));
                integral.powf(rho.recip())
            })
            .collect()
    }

    pub fn mixed_norm(&self, s: T, q: T, rho: T) -> T {
        combine_blocks(&self.time_integrated(rho), self.j_min, s, q)
    }
}

/// `‖f‖_{L̃^ρ_T(Ḃ^s_{p,q})}` of a sampled series on `[t_0, t_last]`.
pub fn mixed_norm<T: Scalar>(
    times: &[T],
    series: &[SpectralField<T>],
    params: &MixedNormParams<T>,
    bank: &DyadicFilterBank<T>,
) -> Result<T> {
    params.besov.validate()?;
    let table = BlockNormTable::from_series(times, series, params.besov.p, bank)?;
    Ok(table.mixed_norm(params.besov.s, params.besov.q, params.rho))
}

/// One row of a per-shell norm report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormRow<T> {
    pub j: i32,
    pub block_lp_norm: T,
    /// `2^{js}`.
    pub weight: T,
    /// `2^{js}·‖Δ_j f‖_{L^p}`; the Besov norm is the `ℓ^q` norm of this column.
    pub contribution: T,
}

#[derive(Clone, Debug)]
pub struct NormReport<T> {
    pub params: BesovParams<T>,
    pub rows: Vec<NormRow<T>>,
    pub value: T,
    pub j_min: i32,
    pub j_max: i32,
    pub realizable: bool,
}

pub fn norm_report<T: Scalar>(
    f: &SpectralField<T>,
    params: &BesovParams<T>,
    bank: &DyadicFilterBank<T>,
) -> Result<NormReport<T>> {
    params.validate()?;
    let blocks = block_lp_norms(f, params.p, bank)?;
    let rows = blocks
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let j = bank.j_min() + i as i32;
            let weight = dyadic_weight(j, params.s);
            NormRow { j, block_lp_norm: b, weight, contribution: weight * b }
        })
        .collect();
    Ok(NormReport {
        params: *params,
        rows,
        value: combine_blocks(&blocks, bank.j_min(), params.s, params.q),
        j_min: bank.j_min(),
        j_max: bank.j_max(),
        realizable: params.is_realizable(f.grid().dim()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::build_filter_bank;
    use crate::spectral::make_grid;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn constant_l2_norm() {
        let g = make_grid(2, 16, TAU).unwrap();
        let f = SpectralField::forward(&vec![-3.0; g.len()], &g).unwrap();
        let expect = 3.0 * TAU;
        assert!((lp_norm(&f, 2.0).unwrap() - expect).abs() < 1e-12);
        assert!((lp_norm_quadrature(&f, 2.0).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_of_cosine() {
        let g = make_grid(2, 16, TAU).unwrap();
        let f = SpectralField::from_fn(&g, |x| x[0].cos());
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn l1_norm_of_cosine() {
        // ∫|cos x| over one period is 4; the second axis contributes 2π.
        // The kink of |cos| limits the Riemann sum to second order.
        let g = make_grid(2, 64, TAU).unwrap();
        let f = SpectralField::from_fn(&g, |x| x[0].cos());
        let v = lp_norm(&f, 1.0).unwrap();
        assert!((v - 4.0 * TAU).abs() < 2e-3 * 4.0 * TAU, "{v}");
    }

    #[test]
    fn rejects_small_exponent() {
        let g = make_grid(1, 8, TAU).unwrap();
        assert!(lp_norm(&SpectralField::zeros(&g), 0.5).is_err());
        assert!(BesovParams::new(0.0, 2.0, 0.9).is_err());
    }

    #[test]
    fn single_shell_besov() {
        // |ξ| = 6 gives φ(6/4) = 1 and φ(6/8) = φ(3/4) = 0, so the mode lives
        // in shell 2 alone and the norm is 2^{2s}·‖f‖₂ = 2^{2s}·π√2.
        let g = make_grid(2, 32, TAU).unwrap();
        let bank = build_filter_bank(&g);
        let f = SpectralField::cosine_mode(&g, &[6, 0], 1.0).unwrap();
        for (s, q) in [(0.5, 1.0), (-1.0, 2.0), (0.25, f64::INFINITY)] {
            let params = BesovParams::new(s, 2.0, q).unwrap();
            let expect = 2f64.powf(2.0 * s) * PI * 2f64.sqrt();
            let got = besov_norm(&f, &params, &bank).unwrap();
            assert!((got - expect).abs() < 1e-12 * expect, "s={s} q={q}");
        }
    }

    #[test]
    fn mixed_norm_constant_series() {
        let g = make_grid(2, 16, TAU).unwrap();
        let bank = build_filter_bank(&g);
        let f = SpectralField::from_fn(&g, |x| x[0].sin() + (2.0 * x[1]).cos());
        let times: Vec<f64> = (0..11).map(|i| 0.3 * i as f64).collect();
        let series = vec![f.clone(); times.len()];
        let besov = BesovParams::new(-0.5, 2.0, 2.0).unwrap();
        let b = besov_norm(&f, &besov, &bank).unwrap();
        for rho in [1.0, 2.5] {
            let m = mixed_norm(&times, &series, &MixedNormParams::new(rho, besov).unwrap(), &bank).unwrap();
            assert!((m - 3f64.powf(1.0 / rho) * b).abs() < 1e-12 * b);
        }
        let m = mixed_norm(&times, &series, &MixedNormParams::new(f64::INFINITY, besov).unwrap(), &bank)
            .unwrap();
        assert!((m - b).abs() < 1e-12 * b);
        assert!(mixed_norm(&[], &[], &MixedNormParams::new(1.0, besov).unwrap(), &bank).is_err());
    }
}

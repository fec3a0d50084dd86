use num_complex::Complex;

use super::filter::{dyadic_block, DyadicFilterBank};
use super::norms::{lp_norm, lp_norm_vector};
use crate::fit::linear_fit;
use crate::spectral::{apply_multiplier, MultiplierSpec, SpectralField};
use crate::{Error, Result, Scalar};

/// Ratios entering the Bernstein inequalities for one dyadic block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BernsteinReport<T> {
    pub j: i32,
    /// `sup_{|β|=k} ‖∂^β Δ_j f‖_{L^r} / (2^{j(k+n(1/p-1/r))} ‖Δ_j f‖_{L^p})`.
    pub ratio: T,
    /// `sup_{|β|=k} ‖∂^β Δ_j f‖_{L^p} / (2^{jk} ‖Δ_j f‖_{L^p})`; the ring
    /// estimate bounds it above and below by constants independent of `j`.
    pub ring_ratio: T,
}

/// Summary of [`bernstein_check`] across every resolved shell.
#[derive(Clone, Debug)]
pub struct BernsteinSweep<T> {
    pub reports: Vec<BernsteinReport<T>>,
    pub max_ratio: T,
    pub min_ring_ratio: T,
    pub max_ring_ratio: T,
}

impl<T: Scalar> BernsteinSweep<T> {
    /// Shells whose ratios leave `[1/bound, bound]`.
    pub fn violations(&self, bound: T) -> Vec<i32> {
        self.reports
            .iter()
            .filter(|r| r.ratio > bound || r.ring_ratio > bound || r.ring_ratio < bound.recip())
            .map(|r| r.j)
            .collect()
    }
}

fn multi_indices(dim: usize, order: usize) -> Vec<Vec<usize>> {
    if dim == 1 {
        return vec![vec![order]];
    }
    (0..=order)
        .flat_map(|first| {
            multi_indices(dim - 1, order - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn partial<T: Scalar>(f: &SpectralField<T>, beta: &[usize]) -> SpectralField<T> {
    let grid = f.grid();
    f.map_indexed(|flat, c| {
        let xi = grid.wave_vector(flat);
        beta.iter().enumerate().fold(c, |acc, (m, &b)| {
            if b > 0 && grid.is_nyquist_along(flat, m) {
                return Complex::new(T::zero(), T::zero());
            }
            (0..b).fold(acc, |a, _| a * Complex::new(T::zero(), xi[m]))
        })
    })
}

/// Bernstein ratios for `Δ_j f` with `p ≤ r` and derivative order `k`.
pub fn bernstein_check<T: Scalar>(
    f: &SpectralField<T>,
    j: i32,
    p: T,
    r: T,
    k: usize,
    bank: &DyadicFilterBank<T>,
) -> Result<BernsteinReport<T>> {
    if r < p {
        return Err(Error::Config(format!("Bernstein check needs p ≤ r, got p={p}, r={r}")));
    }
    let block = dyadic_block(f, j, bank)?;
    let base = lp_norm(&block, p)?;
    if base == T::zero() {
        return Err(Error::UndefinedRatio(format!("Δ_{j} f vanishes")));
    }
    let n = T::from_usize_lossy(f.grid().dim());
    let kf = T::from_usize_lossy(k);
    let two_j = T::lit(2.0).powi(j);
    let mut sup_r = T::zero();
    let mut sup_p = T::zero();
    for beta in multi_indices(f.grid().dim(), k) {
        let d = partial(&block, &beta);
        sup_r = sup_r.max(lp_norm(&d, r)?);
        sup_p = sup_p.max(lp_norm(&d, p)?);
    }
    let gain = kf + n * (p.recip() - r.recip());
    Ok(BernsteinReport {
        j,
        ratio: sup_r / (two_j.powf(gain) * base),
        ring_ratio: sup_p / (two_j.powf(kf) * base),
    })
}

/// [`bernstein_check`] over every shell on which `Δ_j f` is nonzero.
pub fn bernstein_sweep<T: Scalar>(
    f: &SpectralField<T>,
    p: T,
    r: T,
    k: usize,
    bank: &DyadicFilterBank<T>,
) -> Result<BernsteinSweep<T>> {
    let mut reports = Vec::new();
    for j in bank.indices() {
        match bernstein_check(f, j, p, r, k, bank) {
            Ok(rep) => reports.push(rep),
            Err(Error::UndefinedRatio(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    if reports.is_empty() {
        return Err(Error::UndefinedRatio("every dyadic block vanishes".into()));
    }
    let max_ratio = reports.iter().fold(T::zero(), |a, r| a.max(r.ratio));
    let min_ring_ratio = reports.iter().fold(T::infinity(), |a, r| a.min(r.ring_ratio));
    let max_ring_ratio = reports.iter().fold(T::zero(), |a, r| a.max(r.ring_ratio));
    Ok(BernsteinSweep { reports, max_ratio, min_ring_ratio, max_ring_ratio })
}

/// Fitted constants of `‖e^{-tΛ^α} Δ_j f‖_{L^p} ≤ 𝒦 e^{-κ 2^{αj} t} ‖Δ_j f‖_{L^p}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemigroupDecayReport<T> {
    pub j: i32,
    /// Least-squares decay rate in units of `2^{αj}`.
    pub kappa: T,
    /// Smallest prefactor making the bound hold with the fitted `κ` on every
    /// sample; at least 1 because `t = 0` contributes the ratio 1.
    pub prefactor: T,
    pub residual: T,
    /// `‖e^{-tΛ^α} Δ_j f‖_{L^p} / ‖Δ_j f‖_{L^p}` at each sample time.
    pub normalized: Vec<T>,
}

/// Measures the exponential decay of the semigroup on shell `j`.
pub fn semigroup_decay_check<T: Scalar>(
    f: &SpectralField<T>,
    alpha: T,
    j: i32,
    times: &[T],
    p: T,
    bank: &DyadicFilterBank<T>,
) -> Result<SemigroupDecayReport<T>> {
    if times.len() < 3 {
        return Err(Error::DegenerateFit(format!("{} time samples, at least 3 required", times.len())));
    }
    let block = dyadic_block(f, j, bank)?;
    let base = lp_norm(&block, p)?;
    if base == T::zero() {
        return Err(Error::UndefinedRatio(format!("Δ_{j} f vanishes")));
    }
    let scale = T::lit(2.0).powf(alpha * T::from_i64_lossy(j as i64));
    let mut normalized = Vec::with_capacity(times.len());
    for &t in times {
        let evolved = apply_multiplier(&block, &MultiplierSpec::Semigroup { alpha, t })?;
        normalized.push(lp_norm(&evolved, p)? / base);
    }
    let x: Vec<T> = times.iter().map(|&t| -scale * t).collect();
    let y: Vec<T> = normalized.iter().map(|v| v.ln()).collect();
    let fit = linear_fit(&x, &y, 3)?;
    let kappa = fit.slope;
    let prefactor = times
        .iter()
        .zip(&normalized)
        .fold(T::one(), |acc, (&t, &v)| acc.max(v * (kappa * scale * t).exp()));
    Ok(SemigroupDecayReport { j, kappa, prefactor, residual: fit.residual, normalized })
}

/// `L^p` norm of the gradient magnitude, used by callers that need the
/// `k = 1` Bernstein quantity for a whole field.
pub fn gradient_lp_norm<T: Scalar>(f: &SpectralField<T>, p: T) -> Result<T> {
    let parts: Vec<SpectralField<T>> = (0..f.grid().dim())
        .map(|m| {
            let mut beta = vec![0; f.grid().dim()];
            beta[m] = 1;
            partial(f, &beta)
        })
        .collect();
    let refs: Vec<&SpectralField<T>> = parts.iter().collect();
    lp_norm_vector(&refs, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::build_filter_bank;
    use crate::spectral::make_grid;
    use std::f64::consts::TAU;

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(2, 1).len(), 2);
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert!(multi_indices(3, 2).iter().all(|b| b.iter().sum::<usize>() == 2));
    }

    #[test]
    fn plane_wave_ratios() {
        let g = make_grid(2, 32, TAU).unwrap();
        let bank = build_filter_bank(&g);
        let f = SpectralField::cosine_mode(&g, &[5, 0], 1.0).unwrap();
        for j in [1, 2] {
            let rep = bernstein_check(&f, j, 2.0, 2.0, 1, &bank).unwrap();
            let expect = 5.0 / 2f64.powi(j);
            assert!((rep.ratio - expect).abs() < 1e-12);
            assert!((0.75..=8.0 / 3.0).contains(&rep.ratio));
            let id = bernstein_check(&f, j, 2.0, 2.0, 0, &bank).unwrap();
            assert!((id.ratio - 1.0).abs() < 1e-14);
        }
        assert!(matches!(
            bernstein_check(&f, 4, 2.0, 2.0, 1, &bank),
            Err(Error::UndefinedRatio(_))
        ));
    }

    #[test]
    fn single_mode_decay_rate() {
        let g = make_grid(2, 32, TAU).unwrap();
        let bank = build_filter_bank(&g);
        let f = SpectralField::cosine_mode(&g, &[3, 4], 1.0).unwrap();
        let times: Vec<f64> = (0..6).map(|i| 0.01 * i as f64).collect();
        let alpha = 1.5;
        for j in [1, 2] {
            let rep = semigroup_decay_check(&f, alpha, j, &times, 2.0, &bank).unwrap();
            let expect = (5.0 / 2f64.powi(j)).powf(alpha);
            assert!((rep.kappa - expect).abs() < 1e-10, "j={j}");
            assert!(rep.prefactor >= 1.0 && rep.prefactor < 1.0 + 1e-10);
        }
        assert!(semigroup_decay_check(&f, alpha, 2, &times[..2], 2.0, &bank).is_err());
    }
}

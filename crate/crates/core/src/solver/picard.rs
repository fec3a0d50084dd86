use super::model::Model;
use crate::littlewood_paley::{build_filter_bank, BlockNormTable, DyadicFilterBank};
use crate::spectral::SpectralField;
use crate::{Error, Result, Scalar};

/// The norm of the fixed-point space.
///
/// For `1 < α ≤ 2` it is `‖·‖_{L̃^{ρ₁}(Ḃ^{s₁}_{p,q})} + ‖·‖_{L̃^{ρ₂}(Ḃ^{s₂}_{p,q})}` with
/// `s_{1,2} = -1 + n/p ± ε` and `ρ_{1,2} = α/(α - 1 ± ε)`. For `α = 1` it is
/// `L̃^∞(Ḃ^{-1+n/p}_{p,1})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContractionNorm<T> {
    pub alpha: T,
    pub p: T,
    pub q: T,
    pub epsilon: T,
    pub s1: T,
    pub s2: T,
    pub rho1: T,
    pub rho2: T,
}

impl<T: Scalar> ContractionNorm<T> {
    /// `epsilon = None` picks the midpoint `(α - 1)/2` of the admissible range.
    pub fn new(alpha: T, dim: usize, p: T, q: T, epsilon: Option<T>) -> Result<Self> {
        if !(T::one()..=T::lit(2.0)).contains(&alpha) {
            return Err(Error::Config(format!("alpha = {alpha} must lie in [1, 2]")));
        }
        let base = -T::one() + T::from_usize_lossy(dim) / p;
        if alpha == T::one() {
            return Ok(Self {
                alpha,
                p,
                q: T::one(),
                epsilon: T::zero(),
                s1: base,
                s2: base,
                rho1: T::infinity(),
                rho2: T::infinity(),
            });
        }
        let eps = epsilon.unwrap_or((alpha - T::one()) * T::lit(0.5));
        if !(eps > T::zero() && eps < alpha - T::one()) {
            return Err(Error::Hypothesis(format!("ε = {eps} must lie in (0, α - 1) = (0, {})", alpha - T::one())));
        }
        Ok(Self {
            alpha,
            p,
            q,
            epsilon: eps,
            s1: base + eps,
            s2: base - eps,
            rho1: alpha / (alpha - T::one() + eps),
            rho2: alpha / (alpha - T::one() - eps),
        })
    }

    pub fn eval(&self, table: &BlockNormTable<T>) -> T {
        if self.alpha == T::one() {
            return table.mixed_norm(self.s1, self.q, self.rho1);
        }
        table.mixed_norm(self.s1, self.q, self.rho1) + table.mixed_norm(self.s2, self.q, self.rho2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PicardConfig<T> {
    pub alpha: T,
    pub horizon: T,
    /// Number of uniform quadrature intervals on `[0, T]`.
    pub intervals: usize,
    pub max_iterations: usize,
    /// Stop once `d_k ≤ tol · ‖u^{(0)}‖`.
    pub tol: T,
    pub p: T,
    pub q: T,
    pub epsilon: Option<T>,
    pub dealias: bool,
}

impl<T: Scalar> PicardConfig<T> {
    pub fn new(alpha: T, horizon: T, intervals: usize, max_iterations: usize) -> Self {
        Self {
            alpha,
            horizon,
            intervals,
            max_iterations,
            tol: T::lit(1e-12),
            p: T::lit(2.0),
            q: T::lit(2.0),
            epsilon: None,
            dealias: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PicardStatus {
    /// Increments fell below the tolerance.
    Converged,
    /// Ran out of iterations while still contracting.
    IterationLimit,
    /// Increments grew for three consecutive iterations.
    NonContraction,
}

#[derive(Clone, Debug)]
pub struct PicardResult<T: Scalar> {
    pub times: Vec<T>,
    /// Last iterate, sampled at `times`.
    pub iterate: Vec<SpectralField<T>>,
    /// `d_k = ‖u^{(k+1)} - u^{(k)}‖` in the contraction norm.
    pub increments: Vec<T>,
    /// Norm of the free evolution `u^{(0)}`.
    pub linear_norm: T,
    pub norm: ContractionNorm<T>,
    pub status: PicardStatus,
}

impl<T: Scalar> PicardResult<T> {
    /// `d_{k+1}/d_k`.
    pub fn ratios(&self) -> Vec<T> {
        self.increments.windows(2).map(|w| w[1] / w[0]).collect()
    }

    pub fn final_state(&self) -> &SpectralField<T> {
        self.iterate.last().expect("at least one node")
    }
}

/// Applies the map `𝔽` once: the free evolution of `u₀` plus the Duhamel
/// integral of `N(u) = -∇·(u∇ψ)` by the trapezoidal rule with exact
/// semigroup factors.
pub fn picard_map<T: Scalar>(
    model: &Model<T>,
    free: &[SpectralField<T>],
    current: &[SpectralField<T>],
    h: T,
) -> Result<Vec<SpectralField<T>>> {
    let decay: Vec<T> = model.linear_symbol().iter().map(|&l| (-h * l).exp()).collect();
    let half = h * T::lit(0.5);
    let mut out = Vec::with_capacity(free.len());
    out.push(free[0].clone());
    let mut integral = SpectralField::zeros(model.grid());
    let mut prev = model.nonlinear_term(&current[0])?;
    for i in 1..free.len() {
        let next = model.nonlinear_term(&current[i])?;
        let coeffs = integral
            .coeffs()
            .iter()
            .zip(prev.coeffs())
            .zip(next.coeffs())
            .zip(&decay)
            .map(|(((&acc, &a), &b), &e)| (acc + a * half) * e + b * half)
            .collect();
        integral = SpectralField::from_coeffs(model.grid(), coeffs)?;
        out.push(&free[i] + &integral);
        prev = next;
    }
    Ok(out)
}

/// Picard iteration for the mild formulation on `[0, T]`.
pub fn picard_iterate<T: Scalar>(u0: &SpectralField<T>, config: &PicardConfig<T>) -> Result<PicardResult<T>> {
    if config.intervals < 8 {
        return Err(Error::Config(format!("{} quadrature intervals, at least 8 required", config.intervals)));
    }
    if !(config.horizon > T::zero()) {
        return Err(Error::Config(format!("horizon = {} must be positive", config.horizon)));
    }
    let grid = u0.grid();
    let model = Model::new(grid, config.alpha, config.dealias)?;
    let bank: DyadicFilterBank<T> = build_filter_bank(grid);
    let norm = ContractionNorm::new(config.alpha, grid.dim(), config.p, config.q, config.epsilon)?;
    let h = config.horizon / T::from_usize_lossy(config.intervals);
    let times: Vec<T> = (0..=config.intervals).map(|i| h * T::from_usize_lossy(i)).collect();
    let start = if config.dealias { u0.clone().dealiased() } else { u0.clone() };
    let free: Vec<SpectralField<T>> = times
        .iter()
        .map(|&t| {
            let table = model.linear_symbol();
            start.map_indexed(|i, c| c * (-t * table[i]).exp())
        })
        .collect();
    let measure = |series: &[SpectralField<T>]| -> Result<T> {
        Ok(norm.eval(&BlockNormTable::from_series(&times, series, config.p, &bank)?))
    };
    let linear_norm = measure(&free)?;
    let mut iterate = free.clone();
    let mut increments: Vec<T> = Vec::new();
    let mut status = PicardStatus::IterationLimit;
    for _ in 0..config.max_iterations {
        let next = picard_map(&model, &free, &iterate, h)?;
        if next.iter().any(|f| !f.is_finite()) {
            status = PicardStatus::NonContraction;
            break;
        }
        let diff: Vec<SpectralField<T>> = next.iter().zip(&iterate).map(|(a, b)| a - b).collect();
        let d = measure(&diff)?;
        increments.push(d);
        iterate = next;
        let k = increments.len();
        if k >= 4 && increments[k - 4..].windows(2).all(|w| w[1] > w[0]) {
            status = PicardStatus::NonContraction;
            break;
        }
        if d <= config.tol * linear_norm {
            status = PicardStatus::Converged;
            break;
        }
    }
    Ok(PicardResult { times, iterate, increments, linear_norm, norm, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use std::f64::consts::TAU;

    #[test]
    fn norm_parameters() {
        let n = ContractionNorm::<f64>::new(1.5, 2, 2.0, 2.0, None).unwrap();
        assert!((n.epsilon - 0.25).abs() < 1e-15);
        assert!((n.s1 - 0.25).abs() < 1e-15 && (n.s2 + 0.25).abs() < 1e-15);
        assert!((n.rho1 - 2.0).abs() < 1e-15 && (n.rho2 - 6.0).abs() < 1e-14);
        let n1 = ContractionNorm::<f64>::new(1.0, 2, 2.0, 2.0, None).unwrap();
        assert!(n1.rho1.is_infinite() && n1.q == 1.0);
        assert!(ContractionNorm::new(1.5, 2, 2.0, 2.0, Some(0.5)).is_err());
    }

    #[test]
    fn zero_data_has_zero_increments() {
        let g = make_grid(2, 16, TAU).unwrap();
        let res = picard_iterate(&SpectralField::zeros(&g), &PicardConfig::new(1.5, 0.1, 8, 3)).unwrap();
        assert!(res.increments.iter().all(|&d| d == 0.0));
        assert!(res.iterate.iter().all(|f| f.max_abs() == 0.0));
    }

    #[test]
    fn too_few_nodes_rejected() {
        let g = make_grid(2, 16, TAU).unwrap();
        assert!(picard_iterate(&SpectralField::zeros(&g), &PicardConfig::new(1.5, 0.1, 4, 3)).is_err());
    }

    #[test]
    fn small_data_contracts() {
        let g = make_grid(2, 32, TAU).unwrap();
        let u0 = SpectralField::from_fn(&g, |x| 0.2 * (x[0].cos() + (x[0] + x[1]).sin()));
        let res = picard_iterate(&u0, &PicardConfig::new(1.5, 0.2, 16, 8)).unwrap();
        assert_ne!(res.status, PicardStatus::NonContraction);
        assert!(res.ratios().iter().take(4).all(|&r| r < 0.8), "{:?}", res.ratios());
    }
}

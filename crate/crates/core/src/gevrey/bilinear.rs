use rayon::prelude::*;

use crate::ensemble::bilinear_member;
use crate::littlewood_paley::{build_filter_bank, BlockNormTable, DyadicFilterBank};
use crate::solver::poisson_attractant;
use crate::spectral::{apply_multiplier, make_grid, products_with, MultiplierSpec, SpectralField};
use crate::{Error, Result, Scalar};

/// The three product estimates for `u∇(−Δ)^{-1}v + v∇(−Δ)^{-1}u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BilinearEstimate {
    /// `s > 0`, `p < ∞`, regularities shifted by `±ε` between the factors.
    Shifted,
    /// `p = ∞`, `q = 1`, `1 ≤ α < 2`: `L̃^∞(Ḃ^{-α})` against `L̃^1(Ḃ^0)`.
    Endpoint,
    /// Both factors and the output in `L̃^∞(Ḃ^{-1+n/p}_{p,1})`.
    Critical,
}

impl BilinearEstimate {
    pub const ALL: [Self; 3] = [Self::Shifted, Self::Endpoint, Self::Critical];

    pub fn name(self) -> &'static str {
        match self {
            Self::Shifted => "shifted",
            Self::Endpoint => "endpoint",
            Self::Critical => "critical",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown bilinear estimate '{s}' (shifted, endpoint, critical)")))
    }
}

/// `‖B(u,v)‖_{L̃^ρ(Ḃ^s_{p,q})} ≲ ‖u‖_{L̃^{ρ₁}(Ḃ^{s₁}_{p,q})}‖v‖_{L̃^{ρ₂}(Ḃ^{s₂}_{p,q})} + (u ↔ v)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BilinearParams<T> {
    pub estimate: BilinearEstimate,
    /// Dissipation order of the semigroup that generates the time series.
    pub alpha: T,
    pub p: T,
    pub q: T,
    pub epsilon: T,
    pub s: T,
    pub s1: T,
    pub s2: T,
    pub rho: T,
    pub rho1: T,
    pub rho2: T,
}

impl<T: Scalar> BilinearParams<T> {
    /// Shifted estimate with the time exponents of the contraction argument,
    /// `ρ₁,₂ = α/(α-1±ε)`.
    pub fn shifted(alpha: T, s: T, p: T, q: T, epsilon: T, dim: usize) -> Self {
        let base = T::from_usize_lossy(dim) / p - T::one();
        let rho1 = alpha / (alpha - T::one() + epsilon);
        let rho2 = alpha / (alpha - T::one() - epsilon);
        Self {
            estimate: BilinearEstimate::Shifted,
            alpha,
            p,
            q,
            epsilon,
            s,
            s1: s + epsilon,
            s2: base - epsilon,
            rho: (rho1.recip() + rho2.recip()).recip(),
            rho1,
            rho2,
        }
    }

    pub fn endpoint(alpha: T) -> Self {
        Self {
            estimate: BilinearEstimate::Endpoint,
            alpha,
            p: T::infinity(),
            q: T::one(),
            epsilon: T::zero(),
            s: T::one() - alpha,
            s1: -alpha,
            s2: T::zero(),
            rho: T::one(),
            rho1: T::infinity(),
            rho2: T::one(),
        }
    }

    pub fn critical(alpha: T, p: T, dim: usize) -> Self {
        let s = T::from_usize_lossy(dim) / p - T::one();
        Self {
            estimate: BilinearEstimate::Critical,
            alpha,
            p,
            q: T::one(),
            epsilon: T::zero(),
            s,
            s1: s,
            s2: s,
            rho: T::infinity(),
            rho1: T::infinity(),
            rho2: T::infinity(),
        }
    }

    /// Default parameter set of each estimate.
    pub fn defaults(estimate: BilinearEstimate, dim: usize) -> Self {
        match estimate {
            BilinearEstimate::Shifted => {
                let alpha = T::lit(1.5);
                let eps = T::lit(0.5).min((alpha - T::one()) * T::lit(0.5));
                Self::shifted(alpha, T::lit(0.5), T::lit(2.0), T::lit(2.0), eps, dim)
            }
            BilinearEstimate::Endpoint => Self::endpoint(T::lit(1.5)),
            BilinearEstimate::Critical => Self::critical(T::one(), T::lit(2.0), dim),
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let fail = |msg: String| Err(Error::Hypothesis(format!("{}: {msg}", self.estimate.name())));
        let close = |a: T, b: T| (a - b).abs() <= T::lit(1e-12) * (T::one() + a.abs());
        if !(T::one()..=T::lit(2.0)).contains(&self.alpha) {
            return fail(format!("α = {} outside [1, 2]", self.alpha));
        }
        if !(self.p >= T::one()) || !(self.q >= T::one()) {
            return fail(format!("p = {}, q = {} must be ≥ 1", self.p, self.q));
        }
        if [self.rho, self.rho1, self.rho2].iter().any(|r| !(*r >= T::one())) {
            return fail(format!("time exponents {}, {}, {} must be ≥ 1", self.rho, self.rho1, self.rho2));
        }
        if !close(self.rho.recip(), self.rho1.recip() + self.rho2.recip()) {
            return fail(format!(
                "1/ρ = 1/ρ₁ + 1/ρ₂ fails for ρ = {}, ρ₁ = {}, ρ₂ = {}",
                self.rho, self.rho1, self.rho2
            ));
        }
        let base = T::from_usize_lossy(dim) / self.p - T::one();
        match self.estimate {
            BilinearEstimate::Shifted => {
                if !(self.s > T::zero()) {
                    return fail(format!("needs s > 0, got {}", self.s));
                }
                if self.p.is_infinite() {
                    return fail("needs p < ∞".into());
                }
                if !(self.epsilon >= T::zero()) {
                    return fail(format!("needs ε ≥ 0, got {}", self.epsilon));
                }
                if self.epsilon == T::zero() && self.q != T::one() {
                    return fail("ε = 0 is only covered for q = 1".into());
                }
                if !close(self.s1, self.s + self.epsilon) || !close(self.s2, base - self.epsilon) {
                    return fail(format!(
                        "regularities must be s₁ = s + ε and s₂ = -1 + n/p - ε, got {} and {}",
                        self.s1, self.s2
                    ));
                }
            }
            BilinearEstimate::Endpoint => {
                if !(self.alpha < T::lit(2.0)) {
                    return fail("needs α < 2".into());
                }
                if !self.p.is_infinite() || self.q != T::one() {
                    return fail("needs p = ∞ and q = 1".into());
                }
                let expected = [T::one() - self.alpha, -self.alpha, T::zero()];
                if !close(self.s, expected[0]) || !close(self.s1, expected[1]) || !close(self.s2, expected[2]) {
                    return fail("regularities must be (1-α, -α, 0)".into());
                }
                if self.rho != T::one() || !self.rho1.is_infinite() || self.rho2 != T::one() {
                    return fail("time exponents must be (1, ∞, 1)".into());
                }
            }
            BilinearEstimate::Critical => {
                if self.q != T::one() {
                    return fail("needs q = 1".into());
                }
                if ![self.s, self.s1, self.s2].iter().all(|&v| close(v, base)) {
                    return fail(format!("all regularities must equal -1 + n/p = {base}"));
                }
                if ![self.rho, self.rho1, self.rho2].iter().all(|r| r.is_infinite()) {
                    return fail("all time exponents must be ∞".into());
                }
            }
        }
        Ok(())
    }
}

/// Seeded ensemble of field pairs, each evolved by the free semigroup over
/// `[0, horizon]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleConfig<T> {
    pub members: usize,
    pub seed: u64,
    pub points: usize,
    pub dim: usize,
    pub period: T,
    pub horizon: T,
    /// Sample count including `t = 0`; the rest are log-spaced down to
    /// `horizon·1e-3`.
    pub samples: usize,
}

impl<T: Scalar> EnsembleConfig<T> {
    pub fn new(members: usize, seed: u64, points: usize) -> Self {
        Self { members, seed, points, dim: 2, period: T::TAU(), horizon: T::one(), samples: 24 }
    }

    pub fn times(&self) -> Vec<T> {
        let n = self.samples.max(3) - 1;
        let lo = self.horizon * T::lit(1e-3);
        let ratio = self.horizon / lo;
        std::iter::once(T::zero())
            .chain((0..n).map(|i| lo * ratio.powf(T::from_usize_lossy(i) / T::from_usize_lossy(n - 1))))
            .collect()
    }
}

/// One ensemble member's two sides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BilinearSample<T> {
    pub member: usize,
    pub lhs: T,
    pub rhs: T,
    pub ratio: T,
}

#[derive(Clone, Debug)]
pub struct BilinearCheckReport<T> {
    pub params: BilinearParams<T>,
    pub ensemble: EnsembleConfig<T>,
    pub samples: Vec<BilinearSample<T>>,
    pub max_ratio: T,
    pub median_ratio: T,
}

/// Components of `u∇(−Δ)^{-1}v + v∇(−Δ)^{-1}u`, dealiased.
pub fn bilinear_form<T: Scalar>(u: &SpectralField<T>, v: &SpectralField<T>) -> Result<Vec<SpectralField<T>>> {
    u.grid().check_same(v.grid())?;
    let gu = poisson_attractant(u)?.grad;
    let gv = poisson_attractant(v)?.grad;
    let left = products_with(u, &gv.iter().collect::<Vec<_>>())?;
    let right = products_with(v, &gu.iter().collect::<Vec<_>>())?;
    left.into_iter()
        .zip(right)
        .map(|(mut a, b)| {
            a.axpy(T::one(), &b)?;
            Ok(a)
        })
        .collect()
}

/// Both sides of the estimate for sampled series `u(t_i)`, `v(t_i)`.
/// The ratio is 0 when the left side vanishes.
pub fn bilinear_sides<T: Scalar>(
    params: &BilinearParams<T>,
    times: &[T],
    us: &[SpectralField<T>],
    vs: &[SpectralField<T>],
    bank: &DyadicFilterBank<T>,
) -> Result<(T, T, T)> {
    if us.len() != vs.len() {
        return Err(Error::ShapeMismatch { expected: us.len(), actual: vs.len() });
    }
    let forms = us.iter().zip(vs).map(|(u, v)| bilinear_form(u, v)).collect::<Result<Vec<_>>>()?;
    let refs: Vec<Vec<&SpectralField<T>>> = forms.iter().map(|f| f.iter().collect()).collect();
    let lhs_table = BlockNormTable::from_vector_series(times, &refs, params.p, bank)?;
    let lhs = lhs_table.mixed_norm(params.s, params.q, params.rho);
    let tu = BlockNormTable::from_series(times, us, params.p, bank)?;
    let tv = BlockNormTable::from_series(times, vs, params.p, bank)?;
    let (q, s1, s2) = (params.q, params.s1, params.s2);
    let rhs = tu.mixed_norm(s1, q, params.rho1) * tv.mixed_norm(s2, q, params.rho2)
        + tv.mixed_norm(s1, q, params.rho1) * tu.mixed_norm(s2, q, params.rho2);
    let ratio = if lhs == T::zero() {
        T::zero()
    } else if rhs > T::zero() {
        lhs / rhs
    } else {
        return Err(Error::UndefinedRatio(format!("left side {lhs} over a vanishing right side")));
    };
    Ok((lhs, rhs, ratio))
}

/// Runs the estimate over a seeded ensemble. Members are independent and
/// evaluated in parallel; the result does not depend on the thread count.
pub fn bilinear_estimate_check<T: Scalar>(
    params: &BilinearParams<T>,
    ensemble: &EnsembleConfig<T>,
) -> Result<BilinearCheckReport<T>> {
    params.validate(ensemble.dim)?;
    if ensemble.members == 0 {
        return Err(Error::Config("ensemble needs at least one member".into()));
    }
    let grid = make_grid(ensemble.dim, ensemble.points, ensemble.period)?;
    let bank = build_filter_bank(&grid);
    let times = ensemble.times();
    let evolve = |u0: &SpectralField<T>| -> Result<Vec<SpectralField<T>>> {
        times
            .iter()
            .map(|&t| apply_multiplier(u0, &MultiplierSpec::Semigroup { alpha: params.alpha, t }))
            .collect()
    };
    let samples = (0..ensemble.members)
        .into_par_iter()
        .map(|m| {
            let u0 = bilinear_member(&grid, ensemble.seed, 2 * m as u64);
            let v0 = bilinear_member(&grid, ensemble.seed, 2 * m as u64 + 1);
            let (lhs, rhs, ratio) = bilinear_sides(params, &times, &evolve(&u0)?, &evolve(&v0)?, &bank)?;
            if !ratio.is_finite() {
                return Err(Error::NonFinite(format!("ratio of member {m}")));
            }
            Ok(BilinearSample { member: m, lhs, rhs, ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sorted: Vec<T> = samples.iter().map(|s| s.ratio).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
    let mid = sorted.len() / 2;
    let median_ratio = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) * T::lit(0.5)
    };
    Ok(BilinearCheckReport {
        params: *params,
        ensemble: *ensemble,
        max_ratio: sorted[sorted.len() - 1],
        median_ratio,
        samples,
    })
}

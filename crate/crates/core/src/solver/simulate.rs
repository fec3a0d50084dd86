use super::integrator::{default_dt, EtdStepper, Integrator};
use super::model::Model;
use crate::gevrey::{default_theta, gevrey_besov_norm};
use crate::littlewood_paley::{besov_norm, build_filter_bank, lp_norm, BesovParams, DyadicFilterBank};
use crate::spectral::SpectralField;
use crate::{Error, Result, Scalar};

/// Blow-up indicators relative to the initial state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlowupCriteria<T> {
    /// Fires when `‖u‖_∞` exceeds this multiple of `‖u₀‖_∞`.
    pub linf_factor: T,
    /// Fires when the share of fluctuation energy in the top third of the
    /// retained spectrum exceeds this fraction.
    pub tail_fraction: T,
}

impl<T: Scalar> Default for BlowupCriteria<T> {
    fn default() -> Self {
        Self { linf_factor: T::lit(1e3), tail_fraction: T::lit(0.2) }
    }
}

/// Absolute thresholds used by [`detect_blowup`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlowupThresholds<T> {
    pub linf_max: T,
    pub tail_fraction: T,
}

impl<T: Scalar> BlowupCriteria<T> {
    pub fn thresholds(&self, initial_linf: T) -> BlowupThresholds<T> {
        let linf_max = if initial_linf > T::zero() { self.linf_factor * initial_linf } else { T::infinity() };
        BlowupThresholds { linf_max, tail_fraction: self.tail_fraction }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T> {
    pub alpha: T,
    /// Apply the 2/3 rule to the quadratic term.
    pub dealias: bool,
    /// Include the chemotactic drift; `false` gives the fractional heat flow.
    pub nonlinear: bool,
    /// Largest admissible step; `None` selects `0.1/|ξ_cut|^α`.
    pub dt: Option<T>,
    /// Time at which the initial state is given.
    pub t_start: T,
    /// Length of the simulated interval.
    pub horizon: T,
    /// Number of equal sampling intervals over the horizon.
    pub samples: usize,
    pub integrator: Integrator,
    pub blowup: BlowupCriteria<T>,
    /// Integrability indices of the recorded critical norm `Ḃ^{-α+n/p}_{p,q}`.
    pub norm_p: T,
    pub norm_q: T,
    /// Gevrey rate; `None` selects the default for `α`.
    pub gevrey_theta: Option<T>,
    pub keep_snapshots: bool,
}

impl<T: Scalar> SolverConfig<T> {
    pub fn new(alpha: T, horizon: T, samples: usize) -> Self {
        Self {
            alpha,
            dealias: true,
            nonlinear: true,
            dt: None,
            t_start: T::zero(),
            horizon,
            samples,
            integrator: Integrator::Etd2rk,
            blowup: BlowupCriteria::default(),
            norm_p: T::lit(2.0),
            norm_q: T::lit(2.0),
            gevrey_theta: None,
            keep_snapshots: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(T::one()..=T::lit(2.0)).contains(&self.alpha) {
            return Err(Error::Config(format!("alpha = {} must lie in [1, 2]", self.alpha)));
        }
        if !(self.horizon > T::zero()) || !self.horizon.is_finite() {
            return Err(Error::Config(format!("horizon = {} must be positive", self.horizon)));
        }
        if !(self.t_start >= T::zero()) {
            return Err(Error::Config(format!("t_start = {} must be nonnegative", self.t_start)));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if let Some(dt) = self.dt {
            if !(dt > T::zero()) || dt > self.horizon {
                return Err(Error::Config(format!("dt = {dt} must lie in (0, horizon]")));
            }
        }
        if !(self.blowup.linf_factor > T::zero()) || !(self.blowup.tail_fraction > T::zero()) {
            return Err(Error::Config("blow-up thresholds must be positive".into()));
        }
        BesovParams::new(T::zero(), self.norm_p, self.norm_q)?;
        Ok(())
    }

    pub fn theta(&self, dim: usize) -> T {
        self.gevrey_theta.unwrap_or_else(|| default_theta(self.alpha, dim))
    }

    pub fn model(&self, u0: &SpectralField<T>) -> Result<Model<T>> {
        let model = Model::new(u0.grid(), self.alpha, self.dealias)?;
        Ok(if self.nonlinear { model } else { model.linear_only() })
    }

    /// Steps per sampling interval and the resulting step size.
    pub fn step_plan(&self, model: &Model<T>) -> (usize, T) {
        let dt_max = self.dt.unwrap_or_else(|| default_dt(model));
        let interval = self.horizon / T::from_usize_lossy(self.samples);
        let per_sample = (interval / dt_max).ceil().to_usize().unwrap_or(1).max(1);
        (per_sample, interval / T::from_usize_lossy(per_sample))
    }
}

/// Norm diagnostics at one sample time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormRecord<T> {
    pub t: T,
    pub mass: T,
    pub linf: T,
    pub besov_critical: T,
    pub gevrey_norm: T,
    pub tail_fraction: T,
}

#[derive(Clone, Debug)]
pub struct Trajectory<T: Scalar> {
    pub times: Vec<T>,
    /// Empty unless snapshots were requested.
    pub snapshots: Vec<SpectralField<T>>,
    pub norms: Vec<NormRecord<T>>,
    pub dt: T,
}

impl<T: Scalar> Trajectory<T> {
    pub fn last_state(&self) -> Option<&SpectralField<T>> {
        self.snapshots.last()
    }

    /// Largest relative drift of the mass from its initial value.
    pub fn mass_drift(&self) -> T {
        let Some(first) = self.norms.first() else { return T::zero() };
        let scale = first.mass.abs();
        self.norms.iter().fold(T::zero(), |m, r| {
            let d = (r.mass - first.mass).abs();
            m.max(if scale > T::zero() { d / scale } else { d })
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Status<T> {
    Completed,
    /// Heuristic indicator: a threshold fired at this time.
    BlowupIndicated { t: T },
    /// The state stopped being finite after this time.
    ResolutionExhausted { t: T },
}

impl<T: Scalar> Status<T> {
    pub fn label(&self) -> String {
        match self {
            Status::Completed => "completed".into(),
            Status::BlowupIndicated { t } => format!("blowup_indicated(t={t})"),
            Status::ResolutionExhausted { t } => format!("resolution_exhausted(t={t})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationOutcome<T> {
    pub status: Status<T>,
    pub diagnostics: String,
}

/// Energy share of the modes with `max_i |k_i| > 2k_c/3` among all
/// retained nonzero modes, `k_c` being the dealias index.
pub fn tail_fraction<T: Scalar>(u: &SpectralField<T>) -> T {
    let grid = u.grid();
    let kc = grid.dealias_cutoff() as i64;
    let (mut tail, mut total) = (T::zero(), T::zero());
    for (flat, c) in u.coeffs().iter().enumerate().skip(1) {
        let k = grid.wave_index(flat);
        let kmax = k[..grid.dim()].iter().map(|v| v.abs()).max().unwrap_or(0);
        if kmax > kc {
            continue;
        }
        let e = c.norm_sqr();
        total += e;
        if 3 * kmax > 2 * kc {
            tail += e;
        }
    }
    if total > T::zero() { tail / total } else { T::zero() }
}

/// Computes the recorded diagnostics for one state.
pub struct Recorder<T: Scalar> {
    bank: DyadicFilterBank<T>,
    critical: BesovParams<T>,
    alpha: T,
    theta: T,
}

impl<T: Scalar> Recorder<T> {
    pub fn new(config: &SolverConfig<T>, u0: &SpectralField<T>) -> Result<Self> {
        let dim = u0.grid().dim();
        Ok(Self {
            bank: build_filter_bank(u0.grid()),
            critical: BesovParams::critical(config.alpha, dim, config.norm_p, config.norm_q)?,
            alpha: config.alpha,
            theta: config.theta(dim),
        })
    }

    pub fn bank(&self) -> &DyadicFilterBank<T> {
        &self.bank
    }

    pub fn critical(&self) -> &BesovParams<T> {
        &self.critical
    }

    pub fn record(&self, t: T, u: &SpectralField<T>) -> Result<NormRecord<T>> {
        Ok(NormRecord {
            t,
            mass: u.mass(),
            linf: lp_norm(u, T::infinity())?,
            besov_critical: besov_norm(u, &self.critical, &self.bank)?,
            gevrey_norm: gevrey_besov_norm(u, t, self.alpha, self.theta, &self.critical, &self.bank)?,
            tail_fraction: tail_fraction(u),
        })
    }
}

/// First sample at which either threshold fires.
pub fn detect_blowup<T: Scalar>(
    records: &[NormRecord<T>],
    thresholds: &BlowupThresholds<T>,
) -> SimulationOutcome<T> {
    for r in records {
        let linf = r.linf > thresholds.linf_max;
        let tail = r.tail_fraction > thresholds.tail_fraction;
        if linf || tail {
            let which = match (linf, tail) {
                (true, true) => "sup norm and spectral tail",
                (true, false) => "sup norm",
                _ => "spectral tail",
            };
            return SimulationOutcome {
                status: Status::BlowupIndicated { t: r.t },
                diagnostics: format!(
                    "heuristic blow-up indicator ({which}) fired at t={}: linf={} (max {}), tail={} (max {})",
                    r.t, r.linf, thresholds.linf_max, r.tail_fraction, thresholds.tail_fraction
                ),
            };
        }
    }
    SimulationOutcome { status: Status::Completed, diagnostics: "no threshold fired".into() }
}

/// Integrates from `u₀` over `[t_start, t_start + horizon]`, sampling
/// `samples + 1` equally spaced states, and stops early when a blow-up
/// indicator fires or the state stops being finite.
pub fn simulate<T: Scalar>(
    u0: &SpectralField<T>,
    config: &SolverConfig<T>,
) -> Result<(Trajectory<T>, SimulationOutcome<T>)> {
    config.validate()?;
    if !u0.is_finite() {
        return Err(Error::NonFinite("initial state".into()));
    }
    let model = config.model(u0)?;
    let (per_sample, dt) = config.step_plan(&model);
    let stepper = EtdStepper::new(&model, dt, config.integrator)?;
    let recorder = Recorder::new(config, u0)?;

    let mut u = if config.dealias { u0.clone().dealiased() } else { u0.clone() };
    let first = recorder.record(config.t_start, &u)?;
    let thresholds = config.blowup.thresholds(first.linf);
    let mut traj = Trajectory { times: vec![config.t_start], snapshots: Vec::new(), norms: vec![first], dt };
    if config.keep_snapshots {
        traj.snapshots.push(u.clone());
    }
    let interval = config.horizon / T::from_usize_lossy(config.samples);
    for sample in 1..=config.samples {
        let t = config.t_start + interval * T::from_usize_lossy(sample);
        for _ in 0..per_sample {
            match stepper.step(&u) {
                Ok(next) => u = next,
                Err(Error::NonFinite(what)) => {
                    let last = *traj.times.last().expect("trajectory starts with a sample");
                    let outcome = SimulationOutcome {
                        status: Status::ResolutionExhausted { t: last },
                        diagnostics: format!("non-finite {what} while advancing from t={last}"),
                    };
                    return Ok((traj, outcome));
                }
                Err(e) => return Err(e),
            }
        }
        let rec = recorder.record(t, &u)?;
        traj.times.push(t);
        traj.norms.push(rec);
        if config.keep_snapshots {
            traj.snapshots.push(u.clone());
        }
        let outcome = detect_blowup(std::slice::from_ref(&rec), &thresholds);
        if outcome.status != Status::Completed {
            return Ok((traj, outcome));
        }
    }
    let outcome = SimulationOutcome {
        status: Status::Completed,
        diagnostics: format!("reached t={} with dt={dt}", config.t_start + config.horizon),
    };
    Ok((traj, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{apply_multiplier, make_grid, MultiplierSpec};
    use std::f64::consts::TAU;

    fn record(t: f64, linf: f64, tail: f64) -> NormRecord<f64> {
        NormRecord { t, mass: 1.0, linf, besov_critical: 1.0, gevrey_norm: 1.0, tail_fraction: tail }
    }

    #[test]
    fn detector_reports_first_crossing() {
        let th = BlowupThresholds { linf_max: 10.0, tail_fraction: 0.2 };
        let calm: Vec<_> = (0..5).map(|i| record(0.1 * i as f64, 1.0 / (1.0 + i as f64), 0.01)).collect();
        assert_eq!(detect_blowup(&calm, &th).status, Status::Completed);
        let spike = vec![record(0.1, 2.0, 0.0), record(0.2, 5.0, 0.0), record(0.3, 11.0, 0.0)];
        assert_eq!(detect_blowup(&spike, &th).status, Status::BlowupIndicated { t: 0.3 });
        // The tail crosses first, at t = 0.2, while the sup norm crosses later.
        let focus = vec![record(0.1, 2.0, 0.1), record(0.2, 5.0, 0.3), record(0.3, 20.0, 0.5)];
        assert_eq!(detect_blowup(&focus, &th).status, Status::BlowupIndicated { t: 0.2 });
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = make_grid(2, 16, TAU).unwrap();
        let u0 = SpectralField::zeros(&g);
        let (traj, outcome) = simulate(&u0, &SolverConfig::new(1.5, 0.5, 5)).unwrap();
        assert_eq!(outcome.status, Status::Completed);
        assert!(traj.snapshots.iter().all(|s| s.max_abs() == 0.0));
        assert_eq!(traj.times.len(), 6);
    }

    #[test]
    fn linear_run_matches_semigroup() {
        let g = make_grid(2, 32, TAU).unwrap();
        let u0 = SpectralField::from_fn(&g, |x| 1.0 + 0.3 * (x[0] - 2.0 * x[1]).cos() + 0.1 * (5.0 * x[1]).sin());
        let mut cfg = SolverConfig::new(1.5, 0.4, 4);
        cfg.nonlinear = false;
        let (traj, _) = simulate(&u0, &cfg).unwrap();
        for (t, snap) in traj.times.iter().zip(&traj.snapshots) {
            let exact = apply_multiplier(&u0.clone().dealiased(), &MultiplierSpec::Semigroup { alpha: 1.5, t: *t })
                .unwrap();
            assert!((snap - &exact).max_abs() < 1e-12 * u0.max_abs());
        }
    }

    #[test]
    fn mass_is_conserved() {
        let g = make_grid(2, 32, TAU).unwrap();
        let u0 = SpectralField::from_fn(&g, |x| 1.0 + 0.5 * x[0].cos() * x[1].sin());
        let (traj, outcome) = simulate(&u0, &SolverConfig::new(2.0, 0.2, 4)).unwrap();
        assert_eq!(outcome.status, Status::Completed);
        assert!(traj.mass_drift() < 1e-12);
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_bad_config() {
        let g = make_grid(2, 16, TAU).unwrap();
        let u0 = SpectralField::zeros(&g);
        assert!(simulate(&u0, &SolverConfig::new(2.5, 1.0, 2)).is_err());
        assert!(simulate(&u0, &SolverConfig::new(2.0, 0.0, 2)).is_err());
        let mut cfg = SolverConfig::new(2.0, 1.0, 2);
        cfg.dt = Some(2.0);
        assert!(simulate(&u0, &cfg).is_err());
    }
}

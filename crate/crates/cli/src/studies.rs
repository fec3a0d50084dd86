//! One runner per study. Each writes its CSV tables and plots into the run
//! directory and records summary notes for the metadata sidecar.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use fracks::ensemble::{critical_profile, gaussian_bump, gaussian_field, member_rng, random_phase_field};
use fracks::fit::linear_fit;
use fracks::gevrey::{
    bilinear_estimate_check, decay_fit, gevrey_report, kernel_l1_norm, write_bilinear_report, write_gevrey_study,
    write_kernel_norms, BilinearCheckReport, BilinearEstimate, BilinearParams, EnsembleConfig,
};
use fracks::littlewood_paley::{
    besov_norm, build_filter_bank, exponent_label, norm_report, write_besov_summary, write_norm_report, BesovParams,
};
use fracks::solver::{
    picard_iterate, scaling_transform, simulate, write_trajectory_csv, NormRecord, PicardConfig, PicardStatus, RunMetadata,
    SolverConfig, Status, Trajectory,
};
use fracks::spectral::{apply_multiplier, make_grid, read_snapshot, write_snapshot, MultiplierSpec};
use fracks::{Error, Field64, Grid64};
use num_complex::Complex;

use crate::config::{ExperimentConfig, InitialData, Study};
use crate::error::CliError;
use crate::plot::LinePlot;

/// Why a study stopped early.
#[derive(Debug)]
pub enum StudyError {
    Cli(CliError),
    /// The computation itself broke down.
    Numerical(String),
}

impl From<CliError> for StudyError {
    fn from(e: CliError) -> Self {
        StudyError::Cli(e)
    }
}

impl From<std::io::Error> for StudyError {
    fn from(e: std::io::Error) -> Self {
        StudyError::Cli(e.into())
    }
}

impl From<Error> for StudyError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFinite(_) | Error::DegenerateFit(_) | Error::UndefinedRatio(_) | Error::SupportOverflow(_) => {
                StudyError::Numerical(e.to_string())
            }
            Error::Io(io) => StudyError::Cli(io.into()),
            Error::Csv(csv) => StudyError::Cli(CliError::Other(format!("csv error: {csv}"))),
            other => StudyError::Cli(CliError::Schema(vec![other.to_string()])),
        }
    }
}

type StudyResult<T = ()> = Result<T, StudyError>;

/// The run directory plus everything recorded so far.
pub struct RunContext {
    dir: PathBuf,
    pub files: Vec<String>,
    pub notes: Vec<(String, String)>,
}

impl RunContext {
    fn new(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Other(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new(), notes: Vec::new() })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.dir.join(name)
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    fn text(&mut self, name: &str, content: &str) -> StudyResult {
        std::fs::write(self.path(name), content)?;
        Ok(())
    }

    fn csv(&mut self, name: &str, write: impl FnOnce(&mut Vec<u8>) -> fracks::Result<()>) -> StudyResult {
        let mut buf = Vec::new();
        write(&mut buf)?;
        std::fs::write(self.path(name), buf)?;
        Ok(())
    }

    fn plot(&mut self, name: &str, plot: LinePlot<'_>, xs: &[f64], ys: &[f64]) -> StudyResult {
        self.text(name, &plot.render(xs, ys))
    }

    fn snapshot(&mut self, name: &str, field: &Field64) -> StudyResult {
        let path = self.path(name);
        write_snapshot(field, path)?;
        Ok(())
    }
}

/// Files written and notes recorded by a finished run.
pub struct RunSummary {
    pub dir: PathBuf,
    pub files: Vec<String>,
    pub notes: Vec<(String, String)>,
}

/// Runs a resolved configuration. The echo, the metadata sidecar and, on a
/// numerical failure, a diagnostics file are always written.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunSummary, CliError> {
    let mut ctx = RunContext::new(cfg.out_dir())?;
    let echo = cfg.to_toml();
    let result = ctx.text("config.toml", &echo).and_then(|_| run_study(cfg, &mut ctx));
    let mut meta = RunMetadata::new(cfg.study.name(), cfg.seed, &echo);
    for (k, v) in &ctx.notes {
        meta.note(k, v);
    }
    match result {
        Ok(()) => {
            let path = ctx.path("metadata.txt");
            std::fs::write(path, meta.to_text())?;
            Ok(RunSummary { dir: ctx.dir, files: ctx.files, notes: ctx.notes })
        }
        Err(StudyError::Numerical(message)) => {
            meta.note("failure", &message);
            let path = ctx.path("metadata.txt");
            std::fs::write(path, meta.to_text())?;
            let diagnostics = ctx.path("diagnostics.txt");
            let mut text = format!("study: {}\nseed: {}\nfailure: {message}\n", cfg.study, cfg.seed);
            for (k, v) in &ctx.notes {
                text.push_str(&format!("{k}: {v}\n"));
            }
            text.push_str(&format!("files written: {}\n", ctx.files.join(", ")));
            std::fs::write(&diagnostics, text)?;
            Err(CliError::Numerical { message, diagnostics })
        }
        Err(StudyError::Cli(e)) => Err(e),
    }
}

fn run_study(cfg: &ExperimentConfig, ctx: &mut RunContext) -> StudyResult {
    match cfg.study {
        Study::Simulate => run_simulate(cfg, ctx),
        Study::DecayStudy => run_decay(cfg, ctx),
        Study::GevreyStudy => run_gevrey(cfg, ctx),
        Study::BesovNorm => run_besov(cfg, ctx),
        Study::BilinearCheck => run_bilinear(cfg, ctx),
        Study::KernelNorms => run_kernel(cfg, ctx),
        Study::PicardStudy => run_picard(cfg, ctx),
        Study::ScalingCheck => run_scaling(cfg, ctx),
    }
}

fn config_grid(cfg: &ExperimentConfig) -> StudyResult<Grid64> {
    Ok(make_grid(cfg.grid.dim, cfg.grid.points, cfg.grid.period)?)
}

fn with_mean(mut f: Field64, mean: f64) -> Field64 {
    f.coeffs_mut()[0] = Complex::new(mean, 0.0);
    f
}

/// Builds the initial state described by `[initial]` on the configured grid.
pub fn initial_field(cfg: &ExperimentConfig) -> StudyResult<Field64> {
    let g = config_grid(cfg)?;
    let band = |b: &Option<usize>| b.unwrap_or(g.dealias_cutoff());
    Ok(match &cfg.initial {
        InitialData::Bump { mass, width } => gaussian_bump(&g, *mass, *width)?,
        InitialData::Critical { smoothing, amplitude, mean } => {
            critical_profile(&g, cfg.solver.alpha, *smoothing, *amplitude, *mean)
        }
        InitialData::RandomPhase { exponent, band: b, amplitude, mean } => {
            let f = random_phase_field(&g, &mut member_rng(cfg.seed, 0), *exponent, band(b), *amplitude);
            with_mean(f, *mean)
        }
        InitialData::Gaussian { exponent, band: b, amplitude, mean } => {
            let f = gaussian_field(&g, &mut member_rng(cfg.seed, 0), *exponent, band(b)).scaled(*amplitude);
            with_mean(f, *mean)
        }
        InitialData::Modes { mean, terms } => {
            let scale = TAU / g.period();
            Field64::from_fn(&g, |x| {
                terms.iter().fold(*mean, |acc, term| {
                    let phase = term.k.iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum::<f64>() * scale;
                    acc + term.amplitude * (phase + term.phase).cos()
                })
            })
        }
        InitialData::Snapshot { path } => {
            if !path.exists() {
                return Err(CliError::Missing(path.clone()).into());
            }
            let f: Field64 = read_snapshot(path)
                .map_err(|e| CliError::field("initial.path", format!("{}: {e}", path.display())))?;
            if f.grid() != &g {
                return Err(CliError::field(
                    "initial.path",
                    format!(
                        "snapshot grid (dim {}, {} points, period {}) differs from [grid]",
                        f.grid().dim(),
                        f.grid().points_per_axis(),
                        f.grid().period()
                    ),
                )
                .into());
            }
            f
        }
        InitialData::Zero => Field64::zeros(&g),
    })
}

type Metric = fn(&NormRecord<f64>) -> f64;

/// Integrates, writes the trajectory table and plots, and fails on a
/// non-finite state. `require_completed` also fails on a fired indicator.
fn integrate(
    cfg: &ExperimentConfig,
    u0: &Field64,
    ctx: &mut RunContext,
    require_completed: bool,
) -> StudyResult<Trajectory<f64>> {
    let solver = cfg.solver.to_solver()?;
    let (traj, outcome) = simulate(u0, &solver)?;
    ctx.csv("trajectory.csv", |w| write_trajectory_csv(&traj.norms, w))?;
    let t: Vec<f64> = traj.norms.iter().map(|r| r.t).collect();
    let metrics: [(&str, Metric, bool); 5] = [
        ("mass", |r| r.mass, false),
        ("linf", |r| r.linf, true),
        ("besov_critical", |r| r.besov_critical, true),
        ("gevrey_norm", |r| r.gevrey_norm, true),
        ("tail_fraction", |r| r.tail_fraction, true),
    ];
    for (name, get, log) in metrics {
        let ys: Vec<f64> = traj.norms.iter().map(get).collect();
        let plot = LinePlot::linear(name, "t", name);
        ctx.plot(&format!("{name}.svg"), if log { plot.log_y() } else { plot }, &t, &ys)?;
    }
    ctx.note("status", outcome.status.label());
    ctx.note("diagnostics", &outcome.diagnostics);
    ctx.note("dt", traj.dt);
    ctx.note("mass_drift", traj.mass_drift());
    match outcome.status {
        Status::ResolutionExhausted { .. } => Err(StudyError::Numerical(outcome.diagnostics)),
        Status::BlowupIndicated { .. } if require_completed => Err(StudyError::Numerical(format!(
            "{} needs a completed run: {}",
            cfg.study,
            outcome.diagnostics
        ))),
        _ => Ok(traj),
    }
}

fn run_simulate(cfg: &ExperimentConfig, ctx: &mut RunContext) -> StudyResult {
    let u0 = initial_field(cfg)?;
    ctx.snapshot("initial.snap", &u0)?;
    let traj = integrate(cfg, &u0, ctx, false)?;
    if let Some(last) = traj.last_state() {
        ctx.snapshot("final.snap", last)?;
    }
    Ok(())
}

fn run_decay(cfg: &ExperimentConfig, ctx: &mut RunContext) -> StudyResult {
    let d = cfg.decay.clone().unwrap_or_default();
    let u0 = initial_field(cfg)?;
    let traj = integrate(cfg, &u0, ctx, true)?;
    let bank = build_filter_bank(u0.grid());
    let critical = BesovParams::critical(cfg.solver.alpha, u0.grid().dim(), d.p, d.q)?;
    let values = traj
        .snapshots
        .iter()
        .map(|u| besov_norm(&apply_multiplier(u, &MultiplierSpec::Power { sigma: d.sigma })?, &critical, &bank))
        .collect::<fracks::Result<Vec<_>>>()?;
    ctx.csv("decay.csv", |w| {
        let mut w = csv::Writer::from_writer(w);
        w.write_record(["t", "value"])?;
        for (t, v) in traj.times.iter().zip(&values) {
            w.write_record([t.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    })?;
    ctx.plot("decay.svg", LinePlot::linear("derivative norm", "t", "value").log_log(), &traj.times, &values)?;
    let fit = decay_fit(&traj.times, &values, Some((d.window[0], d.window[1])))?;
    let predicted = -d.sigma / cfg.solver.alpha;
    ctx.csv("decay_fit.csv", |w| {
        let mut w = csv::Writer::from_writer(w);
        w.write_record(["exponent", "prefactor", "residual", "samples", "window_lo", "window_hi", "predicted_exponent"])?;
        w.write_record([
            fit.exponent.to_string(),
            fit.prefactor.to_string(),
            fit.residual.to_string(),
            fit.samples.to_string(),
            fit.window.0.to_string(),
            fit.window.1.to_string(),
            predicted.to_string(),
        ])?;
        w.flush()?;
        Ok(())
    })?;
    ctx.note("decay_exponent", fit.exponent);
    ctx.note("predicted_exponent", predicted);
    Ok(())
}

fn run_gevrey(cfg: &ExperimentConfig, ctx: &mut RunContext) -> StudyResult {
    let g = cfg.gevrey.clone().unwrap_or_default();
    let alpha = cfg.solver.alpha;
    let u0 = initial_field(cfg)?;
    let traj = integrate(cfg, &u0, ctx, true)?;
    let theta = g.theta.unwrap_or(1.0);
    let reports = traj
        .times
        .iter()
        .zip(&traj.snapshots)
        .filter(|(&t, _)| t > g.t_min && t > 0.0)
        .map(|(&t, u)| gevrey_report(u, t, alpha, theta))
        .collect::<fracks::Result<Vec<_>>>()?;
    ctx.csv("gevrey_study.csv", |w| write_gevrey_study(&reports, w))?;
    let ts: Vec<f64> = reports.iter().map(|r| r.t).collect();
    let radii: Vec<f64> = reports.iter().map(|r| r.fit.radius).collect();
    ctx.plot("radius.svg", LinePlot::linear("fitted analyticity radius", "t", "radius").log_log(), &ts, &radii)?;
    if reports.len() >= 5 {
        let lt: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
        let lr: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
        let fit = linear_fit(&lt, &lr, 5)?;
        ctx.note("radius_slope", fit.slope);
        ctx.note("predicted_slope", 1.0 / alpha);
    }
    Ok(())
}

fn run_besov(cfg: &ExperimentConfig, ctx: &mut RunContext) -> StudyResult {
    let norms = cfg.besov.clone().unwrap_or_default().norms;
    let u0 = initial_field(cfg)?;
    let bank = build_filter_bank(u0.grid());
    let mut reports = Vec::new();
    for (i, n) in norms.iter().enumerate() {
        let s = n.s.unwrap_or(-cfg.solver.alpha + u0.grid().dim() as f64 / n.p);
        let report = norm_report(&u0, &BesovParams::new(s, n.p, n.q)?, &bank)?;
        ctx.csv(&format!("norm_report_{i}.csv"), |w| write_norm_report(&report, w))?;
        let js: Vec<f64> = report.rows.iter().map(|r| r.j as f64).collect();
        let cs: Vec<f64> = report.rows.iter().map(|r| r.contribution).collect();
        let title = format!("block contributions, s={s}, p={}, q={}", exponent_label(n.p), exponent_label(n.q));
        ctx.plot(&format!("norm_report_{i}.svg"), LinePlot::linear(&title, "j", "contribution").log_y(), &js, &cs)?;
        reports.push(report);
    }
    ctx.csv("besov_summary.csv", |w| write_besov_summary(&reports, w))?;
    Ok(())
}

fn bilinear_run(cfg: &ExperimentConfig, params: &BilinearParams<f64>, points: usize) -> StudyResult<BilinearCheckReport<f64>> {
    let b = cfg.bilinear.clone().unwrap_or_default();
    let mut ensemble = EnsembleConfig::new(b.members, cfg.seed, points);
    ensemble.dim = cfg.grid.dim;
    ensemble.period = cfg.grid.period;
    ensemble.horizon = b.horizon;
    ensemble.samples = b.samples;
    Ok(bilinear_estimate_check(params, &ensemble)?)
}

fn run_bilinear(cfg: &ExperimentConfig, ctx: &mut RunContext) -> StudyResult {
    let b = cfg.bilinear.clone().unwrap_or_default();
    let estimate = BilinearEstimate::parse(&b.estimate)?;
    let params = BilinearParams::defaults(estimate, cfg.grid.dim);
    let report = bilinear_run(cfg, &params, cfg.grid.points)?;
    ctx.csv("bilinear.csv", |w| write_bilinear_report(&report, w))?;
    let plot_ratios = |r: &BilinearCheckReport<f64>| -> (Vec<f64>, Vec<f64>) {
        r.samples.iter().map(|s| (s.member as f64, s.ratio)).unzip()
    };
    let (m, r) = plot_ratios(&report);
    ctx.plot("bilinear_ratio.svg", LinePlot::linear("LHS/RHS by member", "member", "ratio"), &m, &r)?;
    ctx.note("estimate", estimate.name());
    ctx.note("max_ratio", report.max_ratio);
    ctx.note("median_ratio", report.median_ratio);
    if b.compare_doubled {
        let fine = bilinear_run(cfg, &params, 2 * cfg.grid.points)?;
        ctx.csv("bilinear_doubled.csv", |w| write_bilinear_report(&fine, w))?;
        let (m, r) = plot_ratios(&fine);
        ctx.plot("bilinear_doubled_ratio.svg", LinePlot::linear("LHS/RHS by member, doubled grid", "member", "ratio"), &m, &r)?;
        ctx.note("doubled_max_ratio", fine.max_ratio);
        ctx.note("max_ratio_drift", (fine.max_ratio / report.max_ratio - 1.0).abs());
    }
    Ok(())
}

fn run_kernel(cfg: &ExperimentConfig, ctx: &mut RunContext) -> StudyResult {
    let k = cfg.kernel.clone().unwrap_or_default();
    let mut estimates = Vec::new();
    let mut warnings = 0;
    for &sigma in &k.sigma {
        for &alpha in &k.alpha {
            let row = k
                .t
                .iter()
                .map(|&t| kernel_l1_norm(sigma, alpha, k.theta, t, cfg.grid.dim, cfg.grid.points, cfg.grid.period))
                .collect::<fracks::Result<Vec<_>>>()?;
            warnings += row.iter().filter(|e| e.resolution_warning).count();
            let rescaled: Vec<f64> = row.iter().map(|e| e.rescaled).collect();
            let lo = rescaled.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = rescaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            ctx.note(&format!("rescaled_drift(sigma={sigma},alpha={alpha})"), hi / lo - 1.0);
            let title = format!("rescaled kernel constant, sigma={sigma}, alpha={alpha}");
            let plot = LinePlot { x_scale: crate::plot::Scale::Log, ..LinePlot::linear(&title, "t", "value * t^(sigma/alpha)") };
            ctx.plot(&format!("kernel_sigma{sigma}_alpha{alpha}.svg"), plot, &k.t, &rescaled)?;
            estimates.extend(row);
        }
    }
    ctx.csv("kernel_norms.csv", |w| write_kernel_norms(&estimates, w))?;
    ctx.note("resolution_warnings", warnings);
    Ok(())
}

fn picard_label(status: PicardStatus) -> &'static str {
    match status {
        PicardStatus::Converged => "converged",
        PicardStatus::IterationLimit => "iteration_limit",
        PicardStatus::NonContraction => "non_contraction",
    }
}

fn run_picard(cfg: &ExperimentConfig, ctx: &mut RunContext) -> StudyResult {
    let p = cfg.picard.clone().unwrap_or_default();
    let u0 = initial_field(cfg)?;
    let mut pc = PicardConfig::new(cfg.solver.alpha, p.horizon, p.intervals, p.iterations);
    pc.tol = p.tol;
    pc.p = p.p;
    pc.q = p.q;
    pc.epsilon = p.epsilon;
    pc.dealias = cfg.solver.dealias;
    let res = picard_iterate(&u0, &pc)?;
    if res.increments.iter().any(|d| !d.is_finite()) {
        return Err(StudyError::Numerical("non-finite Picard increment".into()));
    }
    let ratios = res.ratios();
    ctx.csv("picard.csv", |w| {
        let mut w = csv::Writer::from_writer(w);
        w.write_record(["k", "increment", "ratio"])?;
        for (i, d) in res.increments.iter().enumerate() {
            let ratio = if i == 0 { String::new() } else { ratios[i - 1].to_string() };
            w.write_record([(i + 1).to_string(), d.to_string(), ratio])?;
        }
        w.flush()?;
        Ok(())
    })?;
    let ks: Vec<f64> = (1..=res.increments.len()).map(|k| k as f64).collect();
    ctx.plot("picard_increments.svg", LinePlot::linear("Picard increments", "k", "d_k").log_y(), &ks, &res.increments)?;
    ctx.note("status", picard_label(res.status));
    ctx.note("linear_norm", res.linear_norm);
    ctx.note("max_ratio", ratios.iter().copied().fold(0.0, f64::max));
    if let Some(dt) = p.reference_dt {
        let mut sc = SolverConfig::new(cfg.solver.alpha, p.horizon, 1);
        sc.dt = Some(dt);
        sc.dealias = cfg.solver.dealias;
        let (traj, outcome) = simulate(&u0, &sc)?;
        if outcome.status != Status::Completed {
            return Err(StudyError::Numerical(format!("reference run: {}", outcome.diagnostics)));
        }
        let etd = traj.last_state().expect("snapshots kept");
        let gap = (etd - res.final_state()).coeff_energy().sqrt() / etd.coeff_energy().sqrt();
        ctx.note("reference_gap", gap);
    }
    Ok(())
}

fn run_scaling(cfg: &ExperimentConfig, ctx: &mut RunContext) -> StudyResult {
    let s = cfg.scaling.clone().unwrap_or_default();
    let alpha = cfg.solver.alpha;
    let u0 = initial_field(cfg)?;
    let scaled = scaling_transform(&u0, s.lambda, alpha)?;
    let (bank, scaled_bank) = (build_filter_bank(u0.grid()), build_filter_bank(scaled.grid()));
    let dim = u0.grid().dim();
    let mut rows = Vec::new();
    for &p in &s.p {
        let params = BesovParams::critical(alpha, dim, p, s.q)?;
        let before = besov_norm(&u0, &params, &bank)?;
        let after = besov_norm(&scaled, &params, &scaled_bank)?;
        rows.push((p, before, after));
    }
    ctx.csv("scaling.csv", |w| {
        let mut w = csv::Writer::from_writer(w);
        w.write_record(["alpha", "p", "q", "lambda", "before", "after", "relative_change"])?;
        for &(p, before, after) in &rows {
            w.write_record([
                alpha.to_string(),
                exponent_label(p),
                exponent_label(s.q),
                s.lambda.to_string(),
                before.to_string(),
                after.to_string(),
                (after / before - 1.0).abs().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;
    let worst = rows.iter().map(|&(_, b, a)| (a / b - 1.0).abs()).fold(0.0, f64::max);
    ctx.note("max_norm_change", worst);
    if s.flow {
        let factor = s.lambda.powf(alpha);
        let base = cfg.solver.to_solver()?;
        let (plain, plain_out) = simulate(&u0, &base)?;
        let mut fast = base.clone();
        fast.horizon = base.horizon / factor;
        fast.t_start = base.t_start / factor;
        fast.dt = base.dt.map(|dt| dt / factor);
        let (rescaled, rescaled_out) = simulate(&scaled, &fast)?;
        if plain_out.status != Status::Completed || rescaled_out.status != Status::Completed {
            return Err(StudyError::Numerical(format!(
                "flow comparison needs completed runs: {} / {}",
                plain_out.diagnostics, rescaled_out.diagnostics
            )));
        }
        let gaps: Vec<f64> = plain
            .snapshots
            .iter()
            .zip(&rescaled.snapshots)
            .map(|(a, b)| {
                let diff = a.coeffs().iter().zip(b.coeffs()).fold(0.0f64, |m, (x, y)| m.max((x - y / factor).norm()));
                diff / a.max_abs().max(f64::MIN_POSITIVE)
            })
            .collect();
        ctx.csv("scaling_flow.csv", |w| {
            let mut w = csv::Writer::from_writer(w);
            w.write_record(["t", "relative_gap"])?;
            for (t, g) in plain.times.iter().zip(&gaps) {
                w.write_record([t.to_string(), g.to_string()])?;
            }
            w.flush()?;
            Ok(())
        })?;
        ctx.plot("scaling_flow.svg", LinePlot::linear("flow covariance gap", "t", "relative gap").log_y(), &plain.times, &gaps)?;
        ctx.note("max_flow_gap", gaps.iter().copied().fold(0.0, f64::max));
    }
    Ok(())
}

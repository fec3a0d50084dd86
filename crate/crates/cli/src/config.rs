//! Experiment configuration: the TOML schema, unknown-key detection and
//! resolution of defaults into an explicit, re-runnable form.

use std::fmt;
use std::path::{Path, PathBuf};

use fracks::gevrey::{default_theta, BilinearEstimate};
use fracks::solver::{default_dt, Integrator, Model, SolverConfig};
use fracks::spectral::make_grid;
use serde::{Deserialize, Serialize};
use toml::Value;

use crate::error::CliError;

// Variant names mirror the study names used on the command line.
#[allow(clippy::enum_variant_names)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Study {
    Simulate,
    DecayStudy,
    GevreyStudy,
    BesovNorm,
    BilinearCheck,
    KernelNorms,
    PicardStudy,
    ScalingCheck,
}

impl Study {
    pub const ALL: [Study; 8] = [
        Study::Simulate,
        Study::DecayStudy,
        Study::GevreyStudy,
        Study::BesovNorm,
        Study::BilinearCheck,
        Study::KernelNorms,
        Study::PicardStudy,
        Study::ScalingCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Study::Simulate => "simulate",
            Study::DecayStudy => "decay-study",
            Study::GevreyStudy => "gevrey-study",
            Study::BesovNorm => "besov-norm",
            Study::BilinearCheck => "bilinear-check",
            Study::KernelNorms => "kernel-norms",
            Study::PicardStudy => "picard-study",
            Study::ScalingCheck => "scaling-check",
        }
    }

    /// The optional section holding this study's parameters.
    fn section(self) -> Option<&'static str> {
        match self {
            Study::Simulate => None,
            Study::DecayStudy => Some("decay"),
            Study::GevreyStudy => Some("gevrey"),
            Study::BesovNorm => Some("besov"),
            Study::BilinearCheck => Some("bilinear"),
            Study::KernelNorms => Some("kernel"),
            Study::PicardStudy => Some("picard"),
            Study::ScalingCheck => Some("scaling"),
        }
    }
}

impl fmt::Display for Study {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const STUDY_SECTIONS: [&str; 7] = ["decay", "gevrey", "besov", "bilinear", "kernel", "picard", "scaling"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub study: Study,
    pub seed: u64,
    /// Output directory; filled in during resolution when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub initial: InitialData,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay: Option<DecaySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gevrey: Option<GevreySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub besov: Option<BesovSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bilinear: Option<BilinearSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub picard: Option<PicardSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub dim: usize,
    pub points: usize,
    pub period: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { dim: 2, points: 64, period: std::f64::consts::TAU }
    }
}

/// Initial data, selected by `kind`. Random kinds draw from the run seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialData {
    /// Centred Gaussian of the given total mass and standard deviation.
    Bump { mass: f64, width: f64 },
    /// Smoothed profile homogeneous of degree `-α`, plus a mean.
    Critical { smoothing: f64, amplitude: f64, mean: f64 },
    /// Power-law amplitudes with random phases; `amplitude` is the largest
    /// coefficient modulus. `band` defaults to the dealias index.
    RandomPhase { exponent: f64, band: Option<usize>, amplitude: f64, mean: f64 },
    /// Gaussian coefficients with a power-law envelope, normalized to unit
    /// coefficient energy before scaling by `amplitude`.
    Gaussian { exponent: f64, band: Option<usize>, amplitude: f64, mean: f64 },
    /// `mean + Σ amplitude·cos(k·x + phase)` sampled on the grid.
    Modes { mean: f64, terms: Vec<ModeTerm> },
    /// A state previously written as a binary snapshot.
    Snapshot { path: PathBuf },
    Zero,
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::Bump { mass: 0.4 * std::f64::consts::PI, width: 0.3 }
    }
}

impl InitialData {
    const KINDS: [&'static str; 7] = ["bump", "critical", "random-phase", "gaussian", "modes", "snapshot", "zero"];

    /// One instance of each kind with every optional field present.
    fn template(kind: &str) -> Option<Self> {
        Some(match kind {
            "bump" => InitialData::Bump { mass: 1.0, width: 1.0 },
            "critical" => InitialData::Critical { smoothing: 1.0, amplitude: 1.0, mean: 0.0 },
            "random-phase" => InitialData::RandomPhase { exponent: 0.0, band: Some(1), amplitude: 1.0, mean: 0.0 },
            "gaussian" => InitialData::Gaussian { exponent: 0.0, band: Some(1), amplitude: 1.0, mean: 0.0 },
            "modes" => InitialData::Modes { mean: 0.0, terms: vec![ModeTerm { k: vec![1], amplitude: 1.0, phase: 0.0 }] },
            "snapshot" => InitialData::Snapshot { path: PathBuf::new() },
            "zero" => InitialData::Zero,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeTerm {
    /// Integer wave vector, one entry per axis.
    pub k: Vec<i64>,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub alpha: f64,
    pub horizon: f64,
    pub samples: usize,
    /// Largest step; resolved to `0.1/|ξ_cut|^α` when absent.
    pub dt: Option<f64>,
    pub t_start: f64,
    pub integrator: String,
    pub dealias: bool,
    pub nonlinear: bool,
    pub linf_factor: f64,
    pub tail_fraction: f64,
    pub norm_p: f64,
    pub norm_q: f64,
    /// Gevrey rate of the recorded lifted norm.
    pub theta: Option<f64>,
}

impl Default for SolverSection {
    fn default() -> Self {
        let base = SolverConfig::<f64>::new(2.0, 1.0, 20);
        Self {
            alpha: base.alpha,
            horizon: base.horizon,
            samples: base.samples,
            dt: None,
            t_start: base.t_start,
            integrator: base.integrator.name().to_string(),
            dealias: base.dealias,
            nonlinear: base.nonlinear,
            linf_factor: base.blowup.linf_factor,
            tail_fraction: base.blowup.tail_fraction,
            norm_p: base.norm_p,
            norm_q: base.norm_q,
            theta: None,
        }
    }
}

impl SolverSection {
    pub fn to_solver(&self) -> Result<SolverConfig<f64>, CliError> {
        let mut cfg = SolverConfig::new(self.alpha, self.horizon, self.samples);
        cfg.dt = self.dt;
        cfg.t_start = self.t_start;
        cfg.integrator = Integrator::parse(&self.integrator).map_err(|e| CliError::field("solver.integrator", e))?;
        cfg.dealias = self.dealias;
        cfg.nonlinear = self.nonlinear;
        cfg.blowup.linf_factor = self.linf_factor;
        cfg.blowup.tail_fraction = self.tail_fraction;
        cfg.norm_p = self.norm_p;
        cfg.norm_q = self.norm_q;
        cfg.gevrey_theta = self.theta;
        cfg.validate().map_err(|e| CliError::field("solver", e))?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecaySection {
    /// Order of the derivative `Λ^σ` whose critical norm is tracked.
    pub sigma: f64,
    pub p: f64,
    pub q: f64,
    /// Inclusive fit window in time.
    pub window: [f64; 2],
}

impl Default for DecaySection {
    fn default() -> Self {
        Self { sigma: 1.0, p: 2.0, q: 2.0, window: [0.5, 5.0] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GevreySection {
    /// Rate in the predicted radius `θ t^{1/α}`; defaults per `α`.
    pub theta: Option<f64>,
    /// Samples at or before this time are skipped.
    pub t_min: f64,
}

impl Default for GevreySection {
    fn default() -> Self {
        Self { theta: None, t_min: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    /// Regularity index; the critical `-α + n/p` when absent.
    #[serde(default)]
    pub s: Option<f64>,
    pub p: f64,
    pub q: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BesovSection {
    pub norms: Vec<NormSpec>,
}

impl Default for BesovSection {
    fn default() -> Self {
        Self { norms: vec![NormSpec { s: None, p: 2.0, q: 2.0 }] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BilinearSection {
    /// `shifted`, `endpoint` or `critical`.
    pub estimate: String,
    pub members: usize,
    pub horizon: f64,
    pub samples: usize,
    /// Repeat the ensemble with twice the points per axis.
    pub compare_doubled: bool,
}

impl Default for BilinearSection {
    fn default() -> Self {
        Self { estimate: "shifted".into(), members: 20, horizon: 1.0, samples: 24, compare_doubled: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelSection {
    pub sigma: Vec<f64>,
    pub alpha: Vec<f64>,
    pub t: Vec<f64>,
    pub theta: f64,
}

impl Default for KernelSection {
    fn default() -> Self {
        Self { sigma: vec![0.0, 1.0], alpha: vec![1.5, 2.0], t: vec![0.5, 1.0, 2.0, 4.0], theta: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PicardSection {
    pub horizon: f64,
    pub intervals: usize,
    pub iterations: usize,
    pub tol: f64,
    pub p: f64,
    pub q: f64,
    pub epsilon: Option<f64>,
    /// Step of an integrator run compared against the fixed point; no
    /// comparison when absent.
    pub reference_dt: Option<f64>,
}

impl Default for PicardSection {
    fn default() -> Self {
        Self {
            horizon: 0.5,
            intervals: 64,
            iterations: 7,
            tol: 0.0,
            p: 2.0,
            q: 2.0,
            epsilon: None,
            reference_dt: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingSection {
    pub lambda: f64,
    pub p: Vec<f64>,
    pub q: f64,
    /// Also compare the flows of the data and of its rescaling.
    pub flow: bool,
}

impl Default for ScalingSection {
    fn default() -> Self {
        Self { lambda: 2.0, p: vec![2.0, f64::INFINITY], q: 2.0, flow: true }
    }
}

/// Keys of a configuration with every section and optional field present.
fn template(initial_kind: Option<&str>) -> Value {
    let initial = initial_kind.and_then(InitialData::template).unwrap_or(InitialData::Zero);
    let full = ExperimentConfig {
        study: Study::Simulate,
        seed: 0,
        out: Some(PathBuf::from(".")),
        grid: GridSection::default(),
        initial,
        solver: SolverSection { dt: Some(1.0), theta: Some(1.0), ..SolverSection::default() },
        decay: Some(DecaySection::default()),
        gevrey: Some(GevreySection { theta: Some(1.0), ..GevreySection::default() }),
        besov: Some(BesovSection { norms: vec![NormSpec { s: Some(0.0), p: 2.0, q: 2.0 }] }),
        bilinear: Some(BilinearSection::default()),
        kernel: Some(KernelSection::default()),
        picard: Some(PicardSection { epsilon: Some(0.1), reference_dt: Some(0.1), ..PicardSection::default() }),
        scaling: Some(ScalingSection::default()),
    };
    Value::try_from(&full).expect("template serializes")
}

fn collect_unknown(actual: &Value, allowed: &Value, path: &str, out: &mut Vec<String>) {
    let join = |key: &str| if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
    match (actual, allowed) {
        (Value::Table(a), Value::Table(t)) => {
            for (key, value) in a {
                match t.get(key) {
                    None => out.push(join(key)),
                    Some(inner) => collect_unknown(value, inner, &join(key), out),
                }
            }
        }
        (Value::Array(a), Value::Array(t)) => {
            if let Some(first) = t.first().filter(|v| v.is_table()) {
                for (i, value) in a.iter().enumerate() {
                    collect_unknown(value, first, &format!("{path}[{i}]"), out);
                }
            }
        }
        _ => {}
    }
}

/// Every key of `doc` that the schema does not know, with dotted paths, plus
/// study sections that the selected study does not read.
pub fn offending_keys(doc: &Value) -> Vec<String> {
    let kind = doc.get("initial").and_then(|i| i.get("kind")).and_then(Value::as_str);
    let mut out = Vec::new();
    if let Some(k) = kind.filter(|k| !InitialData::KINDS.contains(k)) {
        out.push(format!("initial.kind (unknown kind \"{k}\", expected one of {})", InitialData::KINDS.join(", ")));
    }
    collect_unknown(doc, &template(kind), "", &mut out);
    let study = doc.get("study").and_then(Value::as_str);
    if let Some(name) = study {
        match Study::ALL.iter().find(|s| s.name() == name) {
            Some(s) => {
                for section in STUDY_SECTIONS {
                    if doc.get(section).is_some() && s.section() != Some(section) {
                        out.push(format!("{section} (not read by study {name})"));
                    }
                }
            }
            None => {
                let names: Vec<_> = Study::ALL.iter().map(|s| s.name()).collect();
                out.push(format!("study (unknown study \"{name}\", expected one of {})", names.join(", ")));
            }
        }
    }
    out
}

/// Parses configuration text, reporting all unknown keys at once.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let doc: Value = text.parse::<toml::Table>().map(Value::Table).map_err(|e| CliError::Schema(vec![e.to_string()]))?;
    let unknown = offending_keys(&doc);
    if !unknown.is_empty() {
        return Err(CliError::Schema(unknown));
    }
    toml::from_str(text).map_err(|e| CliError::Schema(vec![e.message().to_string() + &location(&e)]))
}

fn location(e: &toml::de::Error) -> String {
    e.span().map(|s| format!(" (at byte {})", s.start)).unwrap_or_default()
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::Missing(path.to_path_buf()),
        _ => CliError::Other(format!("cannot read {}: {e}", path.display())),
    })?;
    parse_config(&text)
}

impl ExperimentConfig {
    /// Fills every default that depends on other settings so that the
    /// serialized result re-runs identically on its own.
    pub fn resolve(mut self, default_out: &Path) -> Result<Self, CliError> {
        if self.seed > i64::MAX as u64 {
            return Err(CliError::field("seed", format!("{} exceeds {}", self.seed, i64::MAX)));
        }
        self.out.get_or_insert_with(|| default_out.to_path_buf());
        let grid = make_grid::<f64>(self.grid.dim, self.grid.points, self.grid.period)
            .map_err(|e| CliError::field("grid", e))?;
        let s = &mut self.solver;
        let model = Model::new(&grid, s.alpha, s.dealias).map_err(|e| CliError::field("solver.alpha", e))?;
        s.dt.get_or_insert_with(|| default_dt(&model));
        s.theta.get_or_insert_with(|| default_theta(s.alpha, grid.dim()));
        s.to_solver()?;

        match &mut self.initial {
            InitialData::RandomPhase { band, .. } | InitialData::Gaussian { band, .. } => {
                band.get_or_insert(grid.dealias_cutoff());
            }
            InitialData::Bump { width, .. } if !(*width > 0.0) => {
                return Err(CliError::field("initial.width", "must be positive"));
            }
            InitialData::Modes { terms, .. } => {
                if let Some(i) = terms.iter().position(|t| t.k.len() != grid.dim()) {
                    return Err(CliError::field(&format!("initial.terms[{i}].k"), format!("needs {} entries", grid.dim())));
                }
            }
            _ => {}
        }

        let (alpha, dim) = (self.solver.alpha, grid.dim());
        match self.study {
            Study::Simulate => {}
            Study::DecayStudy => {
                let d = self.decay.get_or_insert_with(Default::default);
                if !(d.window[0] > 0.0 && d.window[1] > d.window[0]) {
                    return Err(CliError::field("decay.window", "needs 0 < lo < hi"));
                }
            }
            Study::GevreyStudy => {
                let g = self.gevrey.get_or_insert_with(Default::default);
                g.theta.get_or_insert_with(|| default_theta(alpha, dim));
            }
            Study::BesovNorm => {
                let b = self.besov.get_or_insert_with(Default::default);
                if b.norms.is_empty() {
                    return Err(CliError::field("besov.norms", "at least one norm required"));
                }
                for n in &mut b.norms {
                    n.s.get_or_insert(-alpha + dim as f64 / n.p);
                }
            }
            Study::BilinearCheck => {
                let b = self.bilinear.get_or_insert_with(Default::default);
                BilinearEstimate::parse(&b.estimate).map_err(|e| CliError::field("bilinear.estimate", e))?;
            }
            Study::KernelNorms => {
                let k = self.kernel.get_or_insert_with(Default::default);
                if k.sigma.is_empty() || k.alpha.is_empty() || k.t.is_empty() {
                    return Err(CliError::field("kernel", "sigma, alpha and t lists must be nonempty"));
                }
            }
            Study::PicardStudy => {
                self.picard.get_or_insert_with(Default::default);
            }
            Study::ScalingCheck => {
                let s = self.scaling.get_or_insert_with(Default::default);
                if !(s.lambda > 0.0) {
                    return Err(CliError::field("scaling.lambda", "must be positive"));
                }
            }
        }
        Ok(self)
    }

    pub fn out_dir(&self) -> &Path {
        self.out.as_deref().unwrap_or(Path::new("."))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses() {
        let cfg = parse_config("study = \"simulate\"\nseed = 3\n").unwrap();
        assert_eq!(cfg.study, Study::Simulate);
        assert_eq!(cfg.grid, GridSection::default());
    }

    #[test]
    fn unknown_keys_are_all_reported() {
        let text = r#"
study = "decay-study"
seed = 1
colour = "red"
[grid]
dim = 2
pionts = 64
[solver]
alpha = 2.0
stepsize = 0.1
[kernel]
sigma = [1.0]
"#;
        let Err(CliError::Schema(keys)) = parse_config(text) else { panic!("expected a schema error") };
        assert!(keys.contains(&"colour".to_string()), "{keys:?}");
        assert!(keys.contains(&"grid.pionts".to_string()));
        assert!(keys.contains(&"solver.stepsize".to_string()));
        assert!(keys.iter().any(|k| k.starts_with("kernel (not read")));
    }

    #[test]
    fn initial_keys_depend_on_the_kind() {
        let ok = "study = \"simulate\"\nseed = 1\n[initial]\nkind = \"bump\"\nmass = 1.0\nwidth = 0.5\n";
        assert!(parse_config(ok).is_ok());
        let bad = "study = \"simulate\"\nseed = 1\n[initial]\nkind = \"bump\"\nmass = 1.0\nwidth = 0.5\nband = 3\n";
        let Err(CliError::Schema(keys)) = parse_config(bad) else { panic!() };
        assert_eq!(keys, vec!["initial.band".to_string()]);
        let Err(CliError::Schema(keys)) = parse_config("study = \"simulate\"\nseed = 1\n[initial]\nkind = \"blob\"\n")
        else {
            panic!()
        };
        assert!(keys[0].starts_with("initial.kind"));
    }

    #[test]
    fn nested_norm_lists_are_checked() {
        let text = "study = \"besov-norm\"\nseed = 1\n[besov]\nnorms = [{ p = 2.0, q = inf }, { p = 2.0, q = 1.0, r = 3 }]\n";
        let Err(CliError::Schema(keys)) = parse_config(text) else { panic!() };
        assert_eq!(keys, vec!["besov.norms[1].r".to_string()]);
    }

    #[test]
    fn type_errors_are_schema_violations() {
        assert!(matches!(parse_config("study = \"simulate\"\nseed = \"x\"\n"), Err(CliError::Schema(_))));
        assert!(matches!(parse_config("seed = 1\n"), Err(CliError::Schema(_))));
    }

    #[test]
    fn resolved_config_round_trips() {
        for study in Study::ALL {
            let text = format!("study = \"{}\"\nseed = 5\n[initial]\nkind = \"random-phase\"\nexponent = 1.0\namplitude = 0.1\nmean = 0.0\n", study.name());
            let resolved = parse_config(&text).unwrap().resolve(Path::new("out")).unwrap();
            assert!(resolved.solver.dt.is_some());
            let again = parse_config(&resolved.to_toml()).unwrap();
            assert_eq!(again, resolved, "{study}");
            assert_eq!(again.resolve(Path::new("elsewhere")).unwrap(), resolved);
        }
    }

    #[test]
    fn infinite_exponents_survive_the_echo() {
        let text = "study = \"besov-norm\"\nseed = 1\n[besov]\nnorms = [{ p = inf, q = 1.0 }]\n";
        let resolved = parse_config(text).unwrap().resolve(Path::new("o")).unwrap();
        let norms = &resolved.besov.as_ref().unwrap().norms;
        assert!(norms[0].p.is_infinite() && norms[0].s == Some(-2.0));
        assert_eq!(parse_config(&resolved.to_toml()).unwrap(), resolved);
    }

    #[test]
    fn invalid_values_are_rejected() {
        let bad_grid = parse_config("study = \"simulate\"\nseed = 1\n[grid]\npoints = 63\n").unwrap();
        assert!(matches!(bad_grid.resolve(Path::new("o")), Err(CliError::Schema(_))));
        let bad_alpha = parse_config("study = \"simulate\"\nseed = 1\n[solver]\nalpha = 3.0\n").unwrap();
        assert!(matches!(bad_alpha.resolve(Path::new("o")), Err(CliError::Schema(_))));
        let bad_estimate = parse_config("study = \"bilinear-check\"\nseed = 1\n[bilinear]\nestimate = \"x\"\n").unwrap();
        assert!(matches!(bad_estimate.resolve(Path::new("o")), Err(CliError::Schema(_))));
    }
}

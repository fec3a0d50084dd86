//! Shipped experiment presets, written in the same TOML schema as user
//! configurations and listed in a fixed order.

use crate::config::{parse_config, ExperimentConfig};
use crate::error::CliError;

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "smalldata-2d",
        description: "small-mass Gaussian bump, alpha=2, 32^2 grid, relaxes to the mean",
        config: r#"
study = "simulate"
seed = 0

[grid]
dim = 2
points = 32
period = 6.283185307179586

[initial]
kind = "bump"
mass = 1.2566370614359172
width = 0.3

[solver]
alpha = 2.0
horizon = 1.0
samples = 50
"#,
    },
    Preset {
        name: "blowup-2d",
        description: "large-mass Gaussian bump, alpha=2, 128^2 grid, concentrates until an indicator fires",
        config: r#"
study = "simulate"
seed = 0

[grid]
dim = 2
points = 128
period = 6.283185307179586

[initial]
kind = "bump"
mass = 50.26548245743669
width = 0.3

[solver]
alpha = 2.0
horizon = 1.0
samples = 1000
"#,
    },
    Preset {
        name: "decay-alpha2-sigma1",
        description: "decay of the critical norm of the first derivative, alpha=2, sigma=1",
        config: r#"
study = "decay-study"
seed = 42

[grid]
dim = 2
points = 128
period = 50.26548245743669

[initial]
kind = "bump"
mass = 1.2566370614359172
width = 0.3

[solver]
alpha = 2.0
horizon = 5.0
samples = 50
dt = 0.01
tail_fraction = 2.0

[decay]
sigma = 1.0
window = [0.5, 5.0]
"#,
    },
    Preset {
        name: "decay-alpha15-sigma1",
        description: "decay of the critical norm of the first derivative, alpha=1.5, sigma=1",
        config: r#"
study = "decay-study"
seed = 42

[grid]
dim = 2
points = 128
period = 50.26548245743669

[initial]
kind = "critical"
smoothing = 0.05
amplitude = 2e-4
mean = 1e-4

[solver]
alpha = 1.5
horizon = 5.0
samples = 50
dt = 0.01
tail_fraction = 2.0

[decay]
sigma = 1.0
window = [0.5, 5.0]
"#,
    },
    Preset {
        name: "decay-alpha1-sigma1",
        description: "decay of the critical norm of the first derivative, alpha=1, sigma=1",
        config: r#"
study = "decay-study"
seed = 42

[grid]
dim = 2
points = 128
period = 50.26548245743669

[initial]
kind = "critical"
smoothing = 0.05
amplitude = 2e-4
mean = 1e-4

[solver]
alpha = 1.0
horizon = 5.0
samples = 50
dt = 0.01
tail_fraction = 2.0

[decay]
sigma = 1.0
window = [0.5, 5.0]
"#,
    },
    Preset {
        name: "gevrey-alpha15",
        description: "analyticity radius growth from flat-spectrum data, alpha=1.5",
        config: r#"
study = "gevrey-study"
seed = 42

[grid]
dim = 2
points = 128
period = 6.283185307179586

[initial]
kind = "random-phase"
exponent = 0.0
amplitude = 1e-6
mean = 1e-6

[solver]
alpha = 1.5
horizon = 1.0
samples = 10

[gevrey]
theta = 1.0
"#,
    },
    Preset {
        name: "besov-critical",
        description: "block-by-block Besov norms of a random field at several indices",
        config: r#"
study = "besov-norm"
seed = 7

[grid]
dim = 2
points = 64
period = 6.283185307179586

[initial]
kind = "gaussian"
exponent = 1.0
amplitude = 1.0
mean = 0.0

[solver]
alpha = 1.5

[besov]
norms = [
    { p = 2.0, q = 2.0 },
    { p = 2.0, q = 1.0 },
    { p = 4.0, q = 2.0 },
    { p = inf, q = inf },
    { s = 0.0, p = 2.0, q = 2.0 },
]
"#,
    },
    Preset {
        name: "bilinear-shifted",
        description: "bilinear estimate with shifted regularity indices, 64^2 against 128^2",
        config: r#"
study = "bilinear-check"
seed = 2024

[grid]
dim = 2
points = 64
period = 6.283185307179586

[bilinear]
estimate = "shifted"
members = 50
compare_doubled = true
"#,
    },
    Preset {
        name: "bilinear-endpoint",
        description: "bilinear estimate at the L-infinity endpoint, 64^2 against 128^2",
        config: r#"
study = "bilinear-check"
seed = 2024

[grid]
dim = 2
points = 64
period = 6.283185307179586

[bilinear]
estimate = "endpoint"
members = 50
compare_doubled = true
"#,
    },
    Preset {
        name: "bilinear-critical",
        description: "bilinear estimate in the critical alpha=1 space, 64^2 against 128^2",
        config: r#"
study = "bilinear-check"
seed = 2024

[grid]
dim = 2
points = 64
period = 6.283185307179586

[bilinear]
estimate = "critical"
members = 50
compare_doubled = true
"#,
    },
    Preset {
        name: "kernel-scaling",
        description: "L1 norms of the Gevrey-damped derivative kernels across times",
        config: r#"
study = "kernel-norms"
seed = 0

[grid]
dim = 2
points = 2048
period = 215.0

[kernel]
sigma = [0.0, 1.0]
alpha = [1.5, 2.0]
t = [0.5, 1.0, 2.0, 4.0]
theta = 1.0
"#,
    },
    Preset {
        name: "picard-contraction",
        description: "Picard increments for trigonometric data, checked against the integrator",
        config: r#"
study = "picard-study"
seed = 0

[grid]
dim = 2
points = 32
period = 6.283185307179586

[initial]
kind = "modes"
mean = 1.0
terms = [
    { k = [1, 1], amplitude = 0.25, phase = -1.5707963267948966 },
    { k = [1, -1], amplitude = 0.25, phase = 1.5707963267948966 },
    { k = [0, 2], amplitude = 0.3 },
]

[solver]
alpha = 1.5

[picard]
horizon = 0.5
intervals = 64
iterations = 7
tol = 0.0
reference_dt = 1e-4
"#,
    },
    Preset {
        name: "scaling-dyadic",
        description: "critical norms and the flow under the dyadic rescaling lambda=2",
        config: r#"
study = "scaling-check"
seed = 11

[grid]
dim = 2
points = 64
period = 6.283185307179586

[initial]
kind = "gaussian"
exponent = 1.0
amplitude = 0.5
mean = 0.5
band = 10

[solver]
alpha = 1.5
horizon = 0.2
samples = 4

[scaling]
lambda = 2.0
p = [2.0, inf]
q = 2.0
flow = true
"#,
    },
];

pub fn find(name: &str) -> Result<&'static Preset, CliError> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        CliError::Schema(vec![format!("preset \"{name}\" is unknown; available: {}", names.join(", "))])
    })
}

impl Preset {
    pub fn load(&self) -> Result<ExperimentConfig, CliError> {
        parse_config(self.config)
    }
}

/// One line per preset, names padded to a common width.
pub fn listing() -> String {
    let width = PRESETS.iter().map(|p| p.name.len()).max().unwrap_or(0);
    PRESETS.iter().map(|p| format!("{:width$}  {}\n", p.name, p.description)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    #[test]
    fn every_preset_parses_and_resolves() {
        for p in PRESETS {
            let cfg = p.load().unwrap_or_else(|e| panic!("{}: {e}", p.name));
            cfg.resolve(Path::new("out")).unwrap_or_else(|e| panic!("{}: {e}", p.name));
        }
    }

    #[test]
    fn names_are_unique_and_listed_in_order() {
        let text = listing();
        let names: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
        let expected: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        assert_eq!(names, expected);
        let mut sorted = expected.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), expected.len());
    }

    #[test]
    fn unknown_preset_is_a_schema_error() {
        assert!(matches!(find("nope"), Err(CliError::Schema(_))));
    }
}

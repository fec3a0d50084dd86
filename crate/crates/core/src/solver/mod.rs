//! Time integration of the fractional Keller–Segel system: exponential
//! integrators, Picard iteration on the mild formulation, blow-up
//! indicators, and the scaling transform.

mod integrator;
mod io;
mod model;
mod picard;
mod scaling;
mod simulate;

pub use integrator::{default_dt, etd_step, phi1, phi2, EtdStepper, Integrator};
pub use io::{version_string, write_trajectory_csv, RunMetadata};
pub use model::{nonlinear_term, poisson_attractant, Attractant, Model};
pub use picard::{picard_iterate, picard_map, ContractionNorm, PicardConfig, PicardResult, PicardStatus};
pub use scaling::{scaling_transform, scaling_transform_fixed_grid};
pub use simulate::{
    detect_blowup, simulate, tail_fraction, BlowupCriteria, BlowupThresholds, NormRecord, Recorder,
    SimulationOutcome, SolverConfig, Status, Trajectory,
};

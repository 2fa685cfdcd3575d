//! System-agnostic stability machinery: level-set projection, coercivity probes,
//! perturbation experiments and conservation monitors.

pub mod adapters;
pub mod experiment;
pub mod monitor;
pub mod probe;
pub mod projection;

pub use adapters::{PlaneWavePerturbation, PlaneWaveProbe, PlaneWaveSystem, SphericalProbe, SphericalSystem};
pub use experiment::{
    distance_to_reference_orbits, fit_exponential_rate, run_stability_experiment, DeltaRun, ExperimentSystem,
    RunRecord, RunSummary, StabilityExperiment,
};
pub use monitor::{conservation_monitor, Drift, Quantity};
pub use probe::{coercivity_probe, ProbeConfig, ProbeResult, ProbeSample, ProbeTarget};
pub use projection::{
    project_to_level_set, AngularMomentumConstraint, ChargeConstraint, ConstraintMap, PROJECTION_MAX_ITER,
    PROJECTION_TOL,
};

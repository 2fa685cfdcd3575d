//! Cubic NLS on a periodic interval: plane waves, their spectra, split-step flows,
//! orbit distances and solitons.

pub mod evolve;
pub mod model;
pub mod orbit;
pub mod soliton;
pub mod spectrum;

pub use evolve::{
    manakov_evolve, manakov_evolve_with, split_step_evolve, split_step_with, FieldTrajectory, VectorField,
    BLOWUP_GUARD, MAX_DT,
};
pub use model::{
    charge, conserved, energy, hessian_apply, l2_real_inner, lyapunov, lyapunov_gradient, momentum, plane_wave,
    stationary_residual, ConservedTriple, PlaneWaveSpec, TorusNlsModel,
};
pub use orbit::{
    coercivity_gap_check, modulation_decompose, orbit_distance, orbit_fit, project_to_charge, remove_wavenumber,
    Modulation, OrbitFit, OrbitMode,
};
pub use soliton::{
    boost, boost_commutation_residual, bright_soliton, manakov_soliton, symmetry_action, ManakovSolitonParams,
};
pub use spectrum::{
    assembled_hessian, assembled_linearization, closed_form_hessian_eigenvalues, coercivity_constant,
    hessian_cross_check, hessian_mode_spectrum, linearization_growth_rates, stability_margin, stability_verdict,
    ModeEntry, ModeSpectrum,
};

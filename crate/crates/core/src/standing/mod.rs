//! Even standing waves of the inhomogeneous 1D NLS: shooting, continuation in the
//! frequency, the charge slope, the linearized operators and the small-frequency limit.

pub mod curve;
pub mod nonlinearity;
pub mod operators;
pub mod scaling;
pub mod shooting;

pub use curve::{
    charge_slope, continue_curve, continue_on, geometric_grid, intid_residual, intid_residual_from, CurvePoint,
    WaveProfileCurve,
};
pub use nonlinearity::{vk_small_xi_sign, InhomogeneousNonlinearity, NonlinearityKind};
pub use operators::{
    assemble_l_operators, spectral_conditions, spectral_conditions_of, translation_residual, xi_infinity,
    LinearizedOperators, SpectralConditions, SpectralTolerances, CONTINUUM_MARGIN,
};
pub use scaling::{amplitude_exponent, limit_ground_state, scaling_transform, sup_distance};
pub use shooting::{shoot_profile, shoot_profile_with, LineGrid, ShootOptions, StandingProfile};

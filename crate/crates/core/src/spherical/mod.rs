//! Particle in a radial potential: circular orbits as relative equilibria of the
//! rotation group.

pub mod equilibrium;
pub mod flow;
pub mod orbit;
pub mod potential;

pub use equilibrium::{
    angular_momentum, augmented_hessian, augmented_lyapunov, circular_equilibrium, circular_stability_verdict,
    hamiltonian, hessian_blocks, min_eig_in_plane, min_eig_restricted, orbit_frame, orthonormalize, momentum_jacobian,
    project_form,
    stability_margin, CircularEquilibrium, HessianBlocks, OrbitSpec, PhasePoint,
};
pub use flow::{integrate_flow, integrate_flow_strided, integrate_flow_with, Trajectory};
pub use orbit::{
    distance_to_so2_orbit, distance_to_so3_orbit, hat, poisson_bracket_fd, rotate, rotation_about,
    so2_distance_and_angle,
};
pub use potential::{PotentialSpec, RadialPotential};

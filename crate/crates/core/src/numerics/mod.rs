//! Shared numerical kernels.

pub mod banded;
pub mod fd;
pub mod grid;
pub mod interp;
pub mod ode;

pub use banded::{eig_banded, BandedSymmetricMatrix, SpectralReport};
pub use fd::{finite_diff_gradient, finite_diff_hessian, second_directional};
pub use grid::{
    gradient_energy, h1_inner, h1_inner_complex, make_grid, periodic_quadrature, spectral_derivative,
    PeriodicField, PeriodicGrid,
};
pub use interp::CubicSpline;
pub use ode::rk4_step;

// Standing waves of the inhomogeneous NLS: shooting, a continuation curve for the
// asymptotically linear nonlinearity, and the spectral conditions along it.

use orbstab::standing::{
    charge_slope, continue_curve, shoot_profile, spectral_conditions, xi_infinity, InhomogeneousNonlinearity,
    LineGrid, ShootOptions, SpectralTolerances,
};

pub fn run_example() -> orbstab::Result<()> {
    let pt = InhomogeneousNonlinearity::pt(3.0, 0.0)?;
    let grid = LineGrid::for_frequency(1.0, 0.01)?;
    let w = shoot_profile(&pt, 1.0, &grid, 1e-8)?;
    println!("homogeneous cubic, ξ = 1: w(0) = {:.8} (√2), Q = {:.8} (2)", w.peak(), w.charge());

    let al = InhomogeneousNonlinearity::al(2.0, 0.5)?;
    let grid = LineGrid::for_frequency(0.1, 0.02)?;
    let xi_inf = xi_infinity(&al, &grid)?;
    let curve = continue_curve(&al, 0.1, 0.9 * xi_inf, 6, &grid, &ShootOptions::default())?;
    println!("AL b = 0.5, σ = 2: ξ∞ = {xi_inf:.5}");
    for (i, p) in curve.points.iter().enumerate() {
        let sc = spectral_conditions(&al, p.xi, &p.profile, &SpectralTolerances::default())?;
        let slope = if i == 0 || i + 1 == curve.points.len() {
            f64::NAN
        } else {
            charge_slope(&curve, p.xi)?
        };
        println!(
            "  ξ = {:.4}: Q = {:.5}, dQ/dξ = {slope:.4}, Morse(L+) = {}, λ0(L-) = {:.1e}",
            p.xi, p.charge, sc.morse_plus, sc.lambda0_minus
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> orbstab::Result<()> {
    run_example()
}

// Circular orbits in radial potentials: verdicts, Lyapunov Hessian blocks, and a
// perturbed Verlet run measured against the rotation orbit.

use orbstab::harness::{run_stability_experiment, SphericalSystem, StabilityExperiment};
use orbstab::spherical::{circular_equilibrium, hessian_blocks, stability_margin, RadialPotential};

pub fn run_example() -> orbstab::Result<()> {
    let cases = [
        ("kepler", RadialPotential::Kepler),
        ("harmonic", RadialPotential::Harmonic),
        ("-r^-3", RadialPotential::power(-1.0, -3.0)?),
    ];
    for (name, v) in cases {
        let eq = circular_equilibrium(&v, 1.0, [0.0, 0.0, 1.0])?;
        let (verdict, margin) = stability_margin(&v, 1.0)?;
        let lag = hessian_blocks(&v, &eq, &eq.base)?.lagrangian(eq.rho);
        let sys = SphericalSystem {
            potential: v,
            eq,
            dt: 1e-3,
        };
        let run = run_stability_experiment(
            &sys,
            &StabilityExperiment {
                deltas: vec![1e-3],
                horizon: 50.0,
                stride: 100,
                seed: 1,
            },
        )?;
        println!(
            "{name:>9}: {verdict} (margin {margin:+.3}), in-plane Hessian diag ({:.3}, {:.3}), sup d/δ = {:.2}",
            lag[(1, 1)],
            lag[(2, 2)],
            run.summary.max_ratio
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> orbstab::Result<()> {
    run_example()
}

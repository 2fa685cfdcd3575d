// Randomized coercivity probes: the ratio `(ℒ(u) − ℒ(u₀)) / d²` sampled near a
// relative equilibrium, for a stable and an unstable case.

use std::f64::consts::PI;

use orbstab::harness::{coercivity_probe, PlaneWaveProbe, ProbeConfig, SphericalProbe};
use orbstab::numerics::make_grid;
use orbstab::spherical::{circular_equilibrium, RadialPotential};
use orbstab::torus::{coercivity_constant, TorusNlsModel};

pub fn run_example() -> orbstab::Result<()> {
    let cfg = ProbeConfig {
        eta: 1e-3,
        samples: 500,
        seed: 42,
    };
    for (lambda, alpha) in [(-1.0, 1.0), (1.0, 1.2)] {
        let m = TorusNlsModel::new(1.0, lambda, make_grid(64, 2.0 * PI)?)?;
        let c = coercivity_constant(&m, alpha).ok();
        let r = coercivity_probe(&PlaneWaveProbe::new(m, alpha)?, &cfg)?;
        println!("plane wave λ={lambda:+} α={alpha}: c_min = {:+.4}, predicted c = {c:?}", r.c_min);
    }
    let v = RadialPotential::power(-1.0, -3.0)?;
    let eq = circular_equilibrium(&v, 1.0, [0.0, 0.0, 1.0])?;
    let r = coercivity_probe(&SphericalProbe { potential: v, eq }, &cfg)?;
    println!("circular orbit in -r^-3: c_min = {:+.4} (negative: no coercivity)", r.c_min);
    Ok(())
}

#[allow(dead_code)]
fn main() -> orbstab::Result<()> {
    run_example()
}

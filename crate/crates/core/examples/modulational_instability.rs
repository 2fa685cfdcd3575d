// Growth of a mode-1 perturbation of an unstable focusing plane wave, fitted
// against the linearized rate.

use std::f64::consts::PI;

use orbstab::harness::{fit_exponential_rate, run_stability_experiment, PlaneWavePerturbation, PlaneWaveSystem, StabilityExperiment};
use orbstab::numerics::make_grid;
use orbstab::torus::{linearization_growth_rates, TorusNlsModel};

pub fn run_example() -> orbstab::Result<()> {
    let model = TorusNlsModel::new(1.0, 1.0, make_grid(128, 2.0 * PI)?)?;
    let alpha = 1.2;
    let predicted = linearization_growth_rates(&model, alpha, 4)?.max_growth_rate();
    let sys = PlaneWaveSystem {
        model,
        alpha,
        dt: 1e-3,
        perturbation: PlaneWavePerturbation::Mode { n: 1 },
    };
    let rec = run_stability_experiment(
        &sys,
        &StabilityExperiment {
            deltas: vec![1e-6],
            horizon: 10.0,
            stride: 20,
            seed: 3,
        },
    )?;
    let run = &rec.runs[0];
    let fitted = fit_exponential_rate(&run.times, &run.distances, 1e-5, 1e-2)?;
    println!("predicted rate {predicted:.5}, fitted {fitted:.5}, final distance {:.3e}", run.distances.last().unwrap());
    Ok(())
}

#[allow(dead_code)]
fn main() -> orbstab::Result<()> {
    run_example()
}

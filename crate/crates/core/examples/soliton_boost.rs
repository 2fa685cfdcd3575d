// Bright solitons: Galilean boost commutation and a Manakov pair evolved against
// its exact solution.

use std::f64::consts::PI;

use orbstab::numerics::make_grid;
use orbstab::torus::{
    boost_commutation_residual, bright_soliton, manakov_evolve, manakov_soliton, ManakovSolitonParams, TorusNlsModel,
};

pub fn run_example() -> orbstab::Result<()> {
    let grid = make_grid(256, 16.0 * PI)?;
    let model = TorusNlsModel::new(1.0, 1.0, grid.clone())?;
    let s = bright_soliton(&grid, 1.0, 0.0, 1.0, 0.0)?;
    let r = boost_commutation_residual(&model, &s, 1.0, 0.5, 1e-3)?;
    println!("boost commutation residual (v = 1, t = 0.5): {r:.2e}");

    let nu = ManakovSolitonParams {
        alpha: 1.0,
        c: 0.5,
        theta: PI / 5.0,
        gamma1: 0.0,
        gamma2: 1.0,
    };
    let u0 = manakov_soliton(&grid, &nu, 1.0, 0.0)?;
    let (times, fields) = manakov_evolve(&u0, 1.0, 2.0, 1e-3, 500)?;
    for (t, u) in times.iter().zip(&fields) {
        let exact = manakov_soliton(&grid, &nu, 1.0, *t)?;
        let (q1, q2) = u.component_charges();
        println!("t = {t:.1}: charges ({q1:.6}, {q2:.6}), distance to exact {:.2e}", u.l2_distance(&exact)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> orbstab::Result<()> {
    run_example()
}

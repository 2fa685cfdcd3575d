// Plane waves of the cubic NLS on a circle: sign test, coercivity constant, mode
// spectrum, and a cross-check of the closed form against the assembled Hessian.

use std::f64::consts::PI;

use orbstab::numerics::make_grid;
use orbstab::torus::{
    coercivity_constant, hessian_cross_check, linearization_growth_rates, stability_margin, stability_verdict,
    TorusNlsModel,
};

pub fn run_example() -> orbstab::Result<()> {
    for (lambda, alpha) in [(-1.0, 1.0), (1.0, 0.6), (1.0, 1.2)] {
        let m = TorusNlsModel::new(1.0, lambda, make_grid(64, 2.0 * PI)?)?;
        let verdict = stability_verdict(&m, alpha)?;
        let c = coercivity_constant(&m, alpha).map_or("-".to_string(), |c| format!("{c:.3}"));
        let rate = linearization_growth_rates(&m, alpha, 4)?.max_growth_rate();
        println!(
            "λ={lambda:+} α={alpha}: {verdict}, margin {:+.3}, c = {c}, max growth {rate:.4}, Hessian check {:.1e}",
            stability_margin(&m, alpha),
            hessian_cross_check(&m, alpha)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> orbstab::Result<()> {
    run_example()
}

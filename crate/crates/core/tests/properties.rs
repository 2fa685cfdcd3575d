use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use orbstab::cli::{format_f64, RunConfig};
use orbstab::harness::{coercivity_probe, PlaneWaveProbe, ProbeConfig};
use orbstab::numerics::{make_grid, PeriodicField};
use orbstab::torus::{charge, orbit_distance, project_to_charge, split_step_with, OrbitMode, TorusNlsModel};

fn low_mode_field(n: usize, coeffs: &[(f64, f64)]) -> PeriodicField {
    let g = make_grid(n, 2.0 * PI).unwrap();
    PeriodicField::from_fn(&g, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(m, &(a, b))| Complex64::new(a, b) * Complex64::from_polar(1.0, (m as f64 - 2.0) * x))
            .sum::<Complex64>()
            + Complex64::new(1.0, 0.0)
    })
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-0.3..0.3f64, -0.3..0.3f64), 5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csv_numbers_round_trip(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        prop_assume!(v.is_finite());
        prop_assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn orbit_distance_ignores_symmetry(c in coeffs(), gamma in -PI..PI, a in -3.0..3.0f64) {
        let u = low_mode_field(32, &c);
        let r = low_mode_field(32, &[(0.1, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.2), (0.0, 0.0)]);
        let moved = u.translate(a).scale(Complex64::from_polar(1.0, gamma));
        let d0 = orbit_distance(&u, &r, OrbitMode::GaugeTranslation).unwrap();
        let d1 = orbit_distance(&moved, &r, OrbitMode::GaugeTranslation).unwrap();
        prop_assert!((d0 - d1).abs() < 1e-9 * (1.0 + d0), "{} vs {}", d0, d1);
        let self_d = orbit_distance(&moved, &u, OrbitMode::GaugeTranslation).unwrap();
        prop_assert!(self_d < 1e-8, "{}", self_d);
        let gauge = orbit_distance(&u.scale(Complex64::from_polar(1.0, gamma)), &u, OrbitMode::GaugeOnly).unwrap();
        prop_assert!(gauge < 1e-10, "{}", gauge);
    }

    #[test]
    fn charge_projection_hits_target(c in coeffs(), alpha in 0.1..3.0f64) {
        let u = low_mode_field(32, &c);
        let p = project_to_charge(&u, alpha).unwrap();
        prop_assert!((charge(&p) + 0.5 * alpha * alpha * 2.0 * PI).abs() < 1e-11 * alpha * alpha);
    }

    #[test]
    fn split_step_conserves_charge(c in coeffs(), lambda in -2.0..2.0f64) {
        let u = low_mode_field(32, &c);
        let m = TorusNlsModel::new(1.0, lambda, u.grid().clone()).unwrap();
        let f0 = charge(&u);
        let mut worst: f64 = 0.0;
        split_step_with(&m, &u, 0.2, 1e-3, 20, |_, _, v| worst = worst.max((charge(v) - f0).abs())).unwrap();
        prop_assert!(worst < 1e-12 * f0.abs().max(1.0), "{}", worst);
    }

    #[test]
    fn config_canonical_round_trip(dt in 1e-5..1e-1f64, alpha in 0.1..3.0f64, seed in any::<u32>()) {
        let text = format!("seed = {seed}\n[numerics]\ndt = {dt:e}\n[planewave]\nalpha = {alpha:e}\n");
        let cfg = RunConfig::from_toml(&text).unwrap();
        let again = RunConfig::from_toml(&cfg.canonical()).unwrap();
        prop_assert_eq!(&cfg, &again);
        prop_assert_eq!(cfg.sha256(), again.sha256());
        prop_assert_eq!(cfg.numerics.dt, dt);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn c_min_within_is_monotone(seed in any::<u64>(), e1 in 1e-4..1e-2f64, e2 in 1e-4..1e-2f64) {
        let m = TorusNlsModel::new(1.0, -1.0, make_grid(16, 2.0 * PI).unwrap()).unwrap();
        let probe = PlaneWaveProbe::new(m, 1.0).unwrap();
        let r = coercivity_probe(&probe, &ProbeConfig { eta: 1e-2, samples: 40, seed }).unwrap();
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        prop_assert!(r.c_min_within(lo) >= r.c_min_within(hi));
        prop_assert!(r.c_min_within(1e-2) == r.c_min);
    }
}

//! Subcommand implementations. Each returns tables and a summary; the caller persists them.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{HarnessTarget, RunConfig};
use super::table::{Cell, ResultTable};
use crate::error::{invalid, Error, Result};
use crate::harness::{
    coercivity_probe, run_stability_experiment, ExperimentSystem, PlaneWaveProbe, PlaneWaveSystem, ProbeConfig,
    ProbeResult, ProbeTarget, SphericalProbe, SphericalSystem, StabilityExperiment,
};
use crate::numerics::{make_grid, PeriodicField};
use crate::spherical::{
    angular_momentum, circular_equilibrium, hamiltonian, hessian_blocks, min_eig_in_plane, min_eig_restricted,
    stability_margin as circular_margin, CircularEquilibrium, PhasePoint, RadialPotential,
};
use crate::standing::{
    charge_slope, continue_curve, intid_residual, limit_ground_state, scaling_transform, shoot_profile_with,
    spectral_conditions, sup_distance, vk_small_xi_sign, xi_infinity, InhomogeneousNonlinearity, LineGrid,
    ShootOptions, SpectralTolerances, WaveProfileCurve,
};
use crate::torus::{
    boost_commutation_residual, bright_soliton, coercivity_constant, conserved, hessian_mode_spectrum,
    linearization_growth_rates, manakov_evolve_with, manakov_soliton, orbit_distance, split_step_with,
    stability_margin, stability_verdict, ManakovSolitonParams, OrbitMode, TorusNlsModel,
};
use crate::Verdict;

/// Every runnable `<system> <action>` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    SphericalVerdict,
    SphericalHessian,
    SphericalSimulate,
    SphericalProbe,
    PlanewaveVerdict,
    PlanewaveSpectrum,
    PlanewaveRates,
    PlanewaveSimulate,
    PlanewaveProbe,
    SolitonSimulate,
    SolitonBoostCheck,
    ManakovSimulate,
    StandingShoot,
    StandingContinue,
    StandingSlope,
    StandingSpectral,
    StandingLimit,
    HarnessStability,
    HarnessCoercivity,
}

impl Task {
    pub const ALL: [Task; 19] = [
        Task::SphericalVerdict,
        Task::SphericalHessian,
        Task::SphericalSimulate,
        Task::SphericalProbe,
        Task::PlanewaveVerdict,
        Task::PlanewaveSpectrum,
        Task::PlanewaveRates,
        Task::PlanewaveSimulate,
        Task::PlanewaveProbe,
        Task::SolitonSimulate,
        Task::SolitonBoostCheck,
        Task::ManakovSimulate,
        Task::StandingShoot,
        Task::StandingContinue,
        Task::StandingSlope,
        Task::StandingSpectral,
        Task::StandingLimit,
        Task::HarnessStability,
        Task::HarnessCoercivity,
    ];

    /// `"planewave verdict"` and so on.
    pub fn command(&self) -> &'static str {
        match self {
            Task::SphericalVerdict => "spherical verdict",
            Task::SphericalHessian => "spherical hessian",
            Task::SphericalSimulate => "spherical simulate",
            Task::SphericalProbe => "spherical probe",
            Task::PlanewaveVerdict => "planewave verdict",
            Task::PlanewaveSpectrum => "planewave spectrum",
            Task::PlanewaveRates => "planewave rates",
            Task::PlanewaveSimulate => "planewave simulate",
            Task::PlanewaveProbe => "planewave probe",
            Task::SolitonSimulate => "soliton simulate",
            Task::SolitonBoostCheck => "soliton boost-check",
            Task::ManakovSimulate => "manakov simulate",
            Task::StandingShoot => "standing shoot",
            Task::StandingContinue => "standing continue",
            Task::StandingSlope => "standing slope",
            Task::StandingSpectral => "standing spectral",
            Task::StandingLimit => "standing limit",
            Task::HarnessStability => "harness stability",
            Task::HarnessCoercivity => "harness coercivity",
        }
    }

    pub fn from_command(s: &str) -> Option<Task> {
        let norm = s.split_whitespace().collect::<Vec<_>>().join(" ");
        Task::ALL.into_iter().find(|t| t.command() == norm)
    }
}

/// What a run produced, before anything touches the disk.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    /// `(file name, table)`; all are CSV.
    pub tables: Vec<(String, ResultTable)>,
    pub summary: BTreeMap<String, serde_json::Value>,
    pub verdict: Option<Verdict>,
    /// Extra JSON artifacts, excluded from the byte-determinism contract.
    pub extras: Vec<(String, serde_json::Value)>,
}

impl Outcome {
    fn table(&mut self, name: &str, t: ResultTable) {
        self.tables.push((name.to_string(), t));
    }

    fn put(&mut self, key: &str, v: impl Into<serde_json::Value>) {
        self.summary.insert(key.to_string(), v.into());
    }

    fn put_f64(&mut self, key: &str, v: f64) {
        // JSON has no NaN/inf; those go in as strings
        let val = serde_json::Number::from_f64(v).map_or_else(|| json!(v.to_string()), serde_json::Value::Number);
        self.summary.insert(key.to_string(), val);
    }
}

fn row(cells: impl IntoIterator<Item = Cell>) -> Vec<Cell> {
    cells.into_iter().collect()
}

pub fn dispatch(task: Task, cfg: &RunConfig) -> Result<Outcome> {
    match task {
        Task::SphericalVerdict => spherical_verdict(cfg),
        Task::SphericalHessian => spherical_hessian(cfg),
        Task::SphericalSimulate => spherical_simulate(cfg),
        Task::SphericalProbe => {
            let (potential, eq) = spherical_setup(cfg)?;
            probe_outcome(&SphericalProbe { potential, eq }, cfg)
        }
        Task::PlanewaveVerdict => planewave_verdict(cfg),
        Task::PlanewaveSpectrum => planewave_spectrum(cfg, false),
        Task::PlanewaveRates => planewave_spectrum(cfg, true),
        Task::PlanewaveSimulate => planewave_simulate(cfg),
        Task::PlanewaveProbe => probe_outcome(&PlaneWaveProbe::new(planewave_model(cfg)?, cfg.planewave.alpha)?, cfg),
        Task::SolitonSimulate => soliton_simulate(cfg),
        Task::SolitonBoostCheck => soliton_boost_check(cfg),
        Task::ManakovSimulate => manakov_simulate(cfg),
        Task::StandingShoot => standing_shoot(cfg),
        Task::StandingContinue => standing_curve_task(cfg, CurveTask::Continue),
        Task::StandingSlope => standing_curve_task(cfg, CurveTask::Slope),
        Task::StandingSpectral => standing_curve_task(cfg, CurveTask::Spectral),
        Task::StandingLimit => standing_limit(cfg),
        Task::HarnessStability => harness_stability(cfg),
        Task::HarnessCoercivity => match cfg.harness.system {
            HarnessTarget::Spherical => {
                let (potential, eq) = spherical_setup(cfg)?;
                probe_outcome(&SphericalProbe { potential, eq }, cfg)
            }
            HarnessTarget::Planewave => {
                probe_outcome(&PlaneWaveProbe::new(planewave_model(cfg)?, cfg.planewave.alpha)?, cfg)
            }
        },
    }
}

fn spherical_setup(cfg: &RunConfig) -> Result<(RadialPotential, CircularEquilibrium)> {
    let v = cfg.spherical.potential.build()?;
    let eq = circular_equilibrium(&v, cfg.spherical.rho, cfg.spherical.axis)?;
    Ok((v, eq))
}

fn spherical_verdict(cfg: &RunConfig) -> Result<Outcome> {
    let (v, eq) = spherical_setup(cfg)?;
    let (verdict, margin) = circular_margin(&v, eq.rho)?;
    let mut t = ResultTable::new(&["rho", "sigma", "margin", "verdict"]);
    t.push(row([eq.rho.into(), eq.sigma.into(), margin.into(), verdict.as_str().into()]))?;
    let mut out = Outcome::default();
    out.table("verdict.csv", t);
    out.put_f64("margin", margin);
    out.put("verdict", verdict.as_str());
    out.verdict = Some(verdict);
    Ok(out)
}

fn spherical_hessian(cfg: &RunConfig) -> Result<Outcome> {
    let (v, eq) = spherical_setup(cfg)?;
    let blocks = hessian_blocks(&v, &eq, &eq.base)?;
    let lag = blocks.lagrangian(eq.rho);
    let mut t = ResultTable::new(&["matrix", "row", "c1", "c2", "c3"]);
    for (name, m) in [("d2h", blocks.d2h), ("d2_momentum", blocks.d2_momentum), ("lagrangian", lag)] {
        for i in 0..3 {
            t.push(row([name.into(), (i + 1).into(), m[(i, 0)].into(), m[(i, 1)].into(), m[(i, 2)].into()]))?;
        }
    }
    let mut out = Outcome::default();
    out.table("hessian.csv", t);
    out.put_f64("min_eig_restricted", min_eig_restricted(&v, &eq, 0.0)?);
    out.put_f64("min_eig_in_plane", min_eig_in_plane(&v, &eq)?);
    Ok(out)
}

fn spherical_simulate(cfg: &RunConfig) -> Result<Outcome> {
    let (potential, eq) = spherical_setup(cfg)?;
    let sys = SphericalSystem {
        potential: potential.clone(),
        eq,
        dt: cfg.numerics.dt,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let u0 = sys.perturb(cfg.spherical.delta, &mut rng)?;
    let p0 = PhasePoint::from_slice(&u0);
    let (h0, l0) = (hamiltonian(&potential, &p0), angular_momentum(&p0));
    let mut t = ResultTable::new(&["t", "d_orbit", "H_drift", "L_drift"]);
    let mut failure = None;
    sys.evolve(&u0, cfg.numerics.t_end, cfg.numerics.stride, &mut |time, u| {
        if failure.is_some() {
            return;
        }
        let p = PhasePoint::from_slice(u);
        let d = match sys.orbit_distance(u) {
            Ok(d) => d,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let dh = hamiltonian(&potential, &p) - h0;
        let dl = (angular_momentum(&p) - l0).norm();
        t.rows.push(row([time.into(), d.into(), dh.into(), dl.into()]));
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let mut out = Outcome::default();
    out.put_f64("max_d_orbit", column_max(&t, 1));
    out.put_f64("max_abs_H_drift", column_max(&t, 2));
    out.put_f64("max_L_drift", column_max(&t, 3));
    out.table("series.csv", t);
    Ok(out)
}

fn column_max(t: &ResultTable, col: usize) -> f64 {
    t.rows
        .iter()
        .filter_map(|r| match r[col] {
            Cell::Num(v) => Some(v.abs()),
            _ => None,
        })
        .fold(0.0, f64::max)
}

fn probe_outcome(target: &dyn ProbeTarget, cfg: &RunConfig) -> Result<Outcome> {
    let pc = ProbeConfig {
        eta: cfg.numerics.eta,
        samples: cfg.numerics.samples,
        seed: cfg.seed,
    };
    let r: ProbeResult = coercivity_probe(target, &pc)?;
    let mut t = ResultTable::new(&["index", "radius", "distance", "ratio"]);
    for s in &r.samples {
        t.push(row([s.index.into(), s.radius.into(), s.distance.into(), s.ratio.into()]))?;
    }
    let mut out = Outcome::default();
    out.table("probe.csv", t);
    out.put_f64("c_min", r.c_min);
    out.put("skipped", r.skipped);
    out.put("samples", r.samples.len());
    Ok(out)
}

fn planewave_model(cfg: &RunConfig) -> Result<TorusNlsModel> {
    let p = &cfg.planewave;
    TorusNlsModel::new(p.beta, p.lambda, make_grid(p.n, p.length)?)
}

fn planewave_verdict(cfg: &RunConfig) -> Result<Outcome> {
    let m = planewave_model(cfg)?;
    let alpha = cfg.planewave.alpha;
    let verdict = stability_verdict(&m, alpha)?;
    let margin = stability_margin(&m, alpha);
    let c = coercivity_constant(&m, alpha).unwrap_or(f64::NAN);
    let mut t = ResultTable::new(&["beta", "lambda", "length", "alpha", "margin", "coercivity", "verdict"]);
    t.push(row([
        m.beta.into(),
        m.lambda.into(),
        m.length().into(),
        alpha.into(),
        margin.into(),
        c.into(),
        verdict.as_str().into(),
    ]))?;
    let mut out = Outcome::default();
    out.table("verdict.csv", t);
    out.put_f64("margin", margin);
    out.put_f64("coercivity", c);
    out.put("verdict", verdict.as_str());
    out.verdict = Some(verdict);
    Ok(out)
}

fn planewave_spectrum(cfg: &RunConfig, rates: bool) -> Result<Outcome> {
    let m = planewave_model(cfg)?;
    let alpha = cfg.planewave.alpha;
    let n_max = cfg.numerics.n_max;
    let mut out = Outcome::default();
    if rates {
        let s = linearization_growth_rates(&m, alpha, n_max)?;
        let mut t = ResultTable::new(&["n", "k", "growth", "frequency"]);
        for e in &s.entries {
            let (g, f) = e.linearization.map_or((0.0, 0.0), |p| (p[0].re.max(p[1].re), p[0].im.abs()));
            t.push(row([e.n.into(), e.wavenumber.into(), g.into(), f.into()]))?;
        }
        out.table("rates.csv", t);
        out.put_f64("max_growth_rate", s.max_growth_rate());
    } else {
        let s = hessian_mode_spectrum(&m, alpha, n_max)?;
        let mut t = ResultTable::new(&["n", "k", "hessian_re", "hessian_im"]);
        for e in &s.entries {
            t.push(row([e.n.into(), e.wavenumber.into(), e.hessian[0].into(), e.hessian[1].into()]))?;
        }
        out.table("spectrum.csv", t);
        out.put_f64("min_constrained_hessian", s.min_constrained_hessian());
    }
    Ok(out)
}

fn planewave_simulate(cfg: &RunConfig) -> Result<Outcome> {
    let model = planewave_model(cfg)?;
    let sys = PlaneWaveSystem {
        model: model.clone(),
        alpha: cfg.planewave.alpha,
        dt: cfg.numerics.dt,
        perturbation: cfg.planewave.perturbation,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let u0 = sys.perturb(cfg.planewave.delta, &mut rng)?;
    let c0 = conserved(&model, &PeriodicField::from_real_vec(&model.grid, &u0)?);
    let mut t = ResultTable::new(&["t", "d_orbit", "H_rel_drift", "F1_drift", "F2_drift"]);
    let mut failure = None;
    let res = sys.evolve(&u0, cfg.numerics.t_end, cfg.numerics.stride, &mut |time, u| {
        if failure.is_some() {
            return;
        }
        let step = || -> Result<Vec<Cell>> {
            let d = sys.orbit_distance(u)?;
            let c = conserved(&model, &PeriodicField::from_real_vec(&model.grid, u)?);
            let dh = (c.h - c0.h) / c0.h.abs().max(f64::MIN_POSITIVE);
            Ok(row([time.into(), d.into(), dh.into(), (c.f1 - c0.f1).into(), (c.f2 - c0.f2).into()]))
        };
        match step() {
            Ok(r) => t.rows.push(r),
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut out = Outcome::default();
    match res {
        Ok(()) => {}
        Err(Error::Aborted { time, reason, .. }) => {
            out.put_f64("aborted_at", time);
            out.put("abort_reason", reason);
        }
        Err(e) => return Err(e),
    }
    out.put_f64("max_d_orbit", column_max(&t, 1));
    out.put_f64("max_H_rel_drift", column_max(&t, 2));
    out.put_f64("max_F1_drift", column_max(&t, 3));
    out.put_f64("max_F2_drift", column_max(&t, 4));
    out.table("series.csv", t);
    Ok(out)
}

fn soliton_model(cfg: &RunConfig) -> Result<TorusNlsModel> {
    let s = &cfg.soliton;
    TorusNlsModel::new(1.0, s.lambda, make_grid(s.n, s.length)?)
}

fn soliton_simulate(cfg: &RunConfig) -> Result<Outcome> {
    let s = &cfg.soliton;
    let m = soliton_model(cfg)?;
    let u0 = bright_soliton(&m.grid, s.alpha, s.c, s.lambda, 0.0)?;
    let q0 = u0.l2_norm_sq();
    let mut t = ResultTable::new(&["t", "d_orbit", "d_exact", "charge_drift"]);
    let mut failure = None;
    split_step_with(&m, &u0, cfg.numerics.t_end, cfg.numerics.dt, cfg.numerics.stride, |_, time, u| {
        if failure.is_some() {
            return;
        }
        let step = || -> Result<Vec<Cell>> {
            let d = orbit_distance(u, &u0, OrbitMode::GaugeTranslation)?;
            let exact = bright_soliton(&m.grid, s.alpha, s.c, s.lambda, time)?;
            let de = u.sub(&exact)?.l2_norm();
            Ok(row([time.into(), d.into(), de.into(), (u.l2_norm_sq() - q0).into()]))
        };
        match step() {
            Ok(r) => t.rows.push(r),
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let mut out = Outcome::default();
    out.put_f64("max_d_orbit", column_max(&t, 1));
    out.put_f64("max_d_exact", column_max(&t, 2));
    out.put_f64("max_charge_drift", column_max(&t, 3));
    out.table("series.csv", t);
    Ok(out)
}

fn soliton_boost_check(cfg: &RunConfig) -> Result<Outcome> {
    let s = &cfg.soliton;
    let m = soliton_model(cfg)?;
    let u0 = bright_soliton(&m.grid, s.alpha, s.c, s.lambda, 0.0)?;
    let r = boost_commutation_residual(&m, &u0, s.velocity, cfg.numerics.t_end, cfg.numerics.dt)?;
    let mut t = ResultTable::new(&["velocity", "t", "dt", "residual"]);
    t.push(row([s.velocity.into(), cfg.numerics.t_end.into(), cfg.numerics.dt.into(), r.into()]))?;
    let mut out = Outcome::default();
    out.table("boost.csv", t);
    out.put_f64("residual", r);
    Ok(out)
}

fn manakov_simulate(cfg: &RunConfig) -> Result<Outcome> {
    let s = &cfg.manakov;
    let grid = make_grid(s.n, s.length)?;
    let nu = ManakovSolitonParams {
        alpha: s.alpha,
        c: s.c,
        theta: s.theta,
        gamma1: s.gamma1,
        gamma2: s.gamma2,
    };
    let u0 = manakov_soliton(&grid, &nu, s.lambda, 0.0)?;
    let mut t = ResultTable::new(&["t", "charge1", "charge2", "d_exact"]);
    let mut failure = None;
    manakov_evolve_with(&u0, s.lambda, cfg.numerics.t_end, cfg.numerics.dt, cfg.numerics.stride, |_, time, u| {
        if failure.is_some() {
            return;
        }
        let step = || -> Result<Vec<Cell>> {
            let exact = manakov_soliton(&grid, &nu, s.lambda, time)?;
            let (q1, q2) = u.component_charges();
            Ok(row([time.into(), q1.into(), q2.into(), u.l2_distance(&exact)?.into()]))
        };
        match step() {
            Ok(r) => t.rows.push(r),
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let (q1, q2) = u0.component_charges();
    let drift = |col: usize, q: f64| {
        t.rows
            .iter()
            .map(|r| match r[col] {
                Cell::Num(v) => (v - q).abs(),
                _ => 0.0,
            })
            .fold(0.0, f64::max)
    };
    let mut out = Outcome::default();
    out.put_f64("max_charge1_drift", drift(1, q1));
    out.put_f64("max_charge2_drift", drift(2, q2));
    out.put_f64("max_d_exact", column_max(&t, 3));
    out.table("series.csv", t);
    Ok(out)
}

fn standing_nl(cfg: &RunConfig) -> Result<InhomogeneousNonlinearity> {
    let s = &cfg.standing;
    InhomogeneousNonlinearity::new(s.kind, s.sigma, s.b)
}

fn standing_grid(cfg: &RunConfig, xi_min: f64) -> Result<LineGrid> {
    match cfg.standing.radius {
        Some(r) => LineGrid::new(r, cfg.standing.step),
        None => LineGrid::for_frequency(xi_min, cfg.standing.step),
    }
}

fn standing_shoot(cfg: &RunConfig) -> Result<Outcome> {
    let nl = standing_nl(cfg)?;
    let xi = cfg.standing.xi;
    let grid = standing_grid(cfg, xi)?;
    let p = shoot_profile_with(&nl, xi, &grid, &ShootOptions::with_tol(cfg.numerics.tol))?;
    let mut t = ResultTable::new(&["x", "w", "w_x"]);
    for j in 0..p.values.len() {
        t.push(row([grid.x(j).into(), p.values[j].into(), p.slopes[j].into()]))?;
    }
    let mut out = Outcome::default();
    out.table("profile.csv", t);
    out.put_f64("xi", xi);
    out.put_f64("peak", p.peak());
    out.put_f64("charge", p.charge());
    out.put_f64("residual", p.residual(&nl));
    Ok(out)
}

#[derive(Clone, Copy, PartialEq)]
enum CurveTask {
    Continue,
    Slope,
    Spectral,
}

fn standing_curve(cfg: &RunConfig, nl: &InhomogeneousNonlinearity) -> Result<(WaveProfileCurve, LineGrid, f64)> {
    let s = &cfg.standing;
    let grid = standing_grid(cfg, s.xi_lo)?;
    let hi = match s.xi_hi {
        Some(h) => h,
        None => match nl.kind {
            crate::standing::NonlinearityKind::Al => s.hi_fraction * xi_infinity(nl, &grid)?,
            crate::standing::NonlinearityKind::Pt => {
                return invalid("`standing.xi_hi` is required for PT nonlinearities");
            }
        },
    };
    let curve = continue_curve(nl, s.xi_lo, hi, s.points, &grid, &ShootOptions::with_tol(cfg.numerics.tol))?;
    Ok((curve, grid, hi))
}

fn standing_curve_task(cfg: &RunConfig, task: CurveTask) -> Result<Outcome> {
    let nl = standing_nl(cfg)?;
    let (curve, grid, hi) = standing_curve(cfg, &nl)?;
    let opts = ShootOptions::with_tol(cfg.numerics.tol);
    let n = curve.points.len();
    let slope_at = |i: usize| -> Result<f64> {
        if i == 0 || i + 1 >= n {
            Ok(f64::NAN)
        } else {
            charge_slope(&curve, curve.points[i].xi)
        }
    };
    let mut out = Outcome::default();
    out.put_f64("xi_hi", hi);
    out.put("points", n);
    if let Some(t) = &curve.termination {
        out.put("termination", t.as_str());
    }
    match task {
        CurveTask::Continue => {
            let mut t = ResultTable::new(&["xi", "charge", "peak", "slope"]);
            let mut min_slope = f64::INFINITY;
            for (i, p) in curve.points.iter().enumerate() {
                let s = slope_at(i)?;
                if s.is_finite() {
                    min_slope = min_slope.min(s);
                }
                t.push(row([p.xi.into(), p.charge.into(), p.peak.into(), s.into()]))?;
            }
            out.put_f64("min_slope", min_slope);
            out.table("curve.csv", t);
        }
        CurveTask::Slope => {
            let mut t = ResultTable::new(&["xi", "slope", "intid_residual"]);
            let mut worst: f64 = 0.0;
            for (i, p) in curve.points.iter().enumerate() {
                let s = slope_at(i)?;
                let dxi = cfg.standing.dxi.min(0.5 * p.xi);
                let r = intid_residual(&nl, p.xi, dxi, &grid, &opts)?;
                worst = worst.max(r);
                t.push(row([p.xi.into(), s.into(), r.into()]))?;
            }
            out.put("vk_small_xi_sign", vk_small_xi_sign(nl.sigma, nl.b));
            out.put_f64("max_intid_residual", worst);
            out.table("slope.csv", t);
        }
        CurveTask::Spectral => {
            let tol = SpectralTolerances::default();
            let mut t = ResultTable::new(&[
                "xi",
                "slope",
                "morse_plus",
                "gap_plus",
                "lambda0_minus",
                "cosine_minus",
                "c1",
                "c2",
            ]);
            let mut all = true;
            for (i, p) in curve.points.iter().enumerate() {
                let s = slope_at(i)?;
                let sc = spectral_conditions(&nl, p.xi, &p.profile, &tol)?;
                all &= sc.c1 && sc.c2 && !(s <= 0.0);
                t.push(row([
                    p.xi.into(),
                    s.into(),
                    sc.morse_plus.into(),
                    sc.gap_plus.into(),
                    sc.lambda0_minus.into(),
                    sc.cosine_minus.into(),
                    sc.c1.into(),
                    sc.c2.into(),
                ]))?;
            }
            let verdict = if all { Verdict::Stable } else { Verdict::Unstable };
            out.put("verdict", verdict.as_str());
            out.verdict = Some(verdict);
            out.table("spectral.csv", t);
        }
    }
    Ok(out)
}

fn standing_limit(cfg: &RunConfig) -> Result<Outcome> {
    let s = &cfg.standing;
    let nl = standing_nl(cfg)?;
    let opts = ShootOptions::with_tol(cfg.numerics.tol);
    let ygrid = LineGrid::new(s.limit_radius, s.step)?;
    let v0 = limit_ground_state(s.b, s.sigma, &ygrid, &opts)?;
    let mut t = ResultTable::new(&["xi", "peak", "sup_distance"]);
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    let mut xis = s.limit_xis.clone();
    xis.sort_by(|a, b| b.total_cmp(a));
    for xi in xis {
        if !(xi > 0.0) {
            return invalid("`standing.limit_xis` entries must be positive");
        }
        let k = xi.sqrt();
        let xgrid = LineGrid::new(s.limit_radius / k, s.step / k)?;
        let w = shoot_profile_with(&nl, xi, &xgrid, &opts)?;
        let v = scaling_transform(1.0 / xi, s.sigma, s.b, &w, &ygrid)?;
        let d = sup_distance(&v, &v0);
        monotone &= d < prev;
        prev = d;
        t.push(row([xi.into(), w.peak().into(), d.into()]))?;
    }
    let mut out = Outcome::default();
    out.put_f64("limit_peak", v0.peak());
    out.put("monotone", monotone);
    out.table("limit.csv", t);
    Ok(out)
}

fn harness_stability(cfg: &RunConfig) -> Result<Outcome> {
    let e = StabilityExperiment {
        deltas: cfg.harness.deltas.clone(),
        horizon: cfg.numerics.t_end,
        stride: cfg.numerics.stride,
        seed: cfg.seed,
    };
    let record = match cfg.harness.system {
        HarnessTarget::Spherical => {
            let (potential, eq) = spherical_setup(cfg)?;
            run_stability_experiment(
                &SphericalSystem {
                    potential,
                    eq,
                    dt: cfg.numerics.dt,
                },
                &e,
            )?
        }
        HarnessTarget::Planewave => run_stability_experiment(
            &PlaneWaveSystem {
                model: planewave_model(cfg)?,
                alpha: cfg.planewave.alpha,
                dt: cfg.numerics.dt,
                perturbation: cfg.planewave.perturbation,
            },
            &e,
        )?,
    };
    let mut series = ResultTable::new(&["delta", "t", "d_orbit"]);
    let mut per = ResultTable::new(&["delta", "max_distance", "max_ratio", "aborted"]);
    for r in &record.runs {
        for (time, d) in r.times.iter().zip(&r.distances) {
            series.push(row([r.delta.into(), (*time).into(), (*d).into()]))?;
        }
        per.push(row([
            r.delta.into(),
            r.max_distance.into(),
            r.max_ratio.unwrap_or(f64::NAN).into(),
            r.aborted.clone().unwrap_or_default().into(),
        ]))?;
    }
    let mut out = Outcome::default();
    out.table("series.csv", series);
    out.table("runs.csv", per);
    out.put_f64("max_ratio", record.summary.max_ratio);
    out.put_f64("max_distance", record.summary.max_distance);
    out.put("aborted", record.summary.aborted);
    out.extras.push((
        "run_record.json".into(),
        serde_json::to_value(&record).map_err(|e| Error::Unsupported(e.to_string()))?,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_round_trip() {
        for t in Task::ALL {
            assert_eq!(Task::from_command(t.command()), Some(t));
        }
        assert_eq!(Task::from_command("planewave   verdict"), Some(Task::PlanewaveVerdict));
        assert!(Task::from_command("planewave fly").is_none());
    }

    #[test]
    fn planewave_verdict_table() {
        for (lambda, alpha, v) in [(-1.0, 1.0, "stable"), (1.0, 0.6, "stable"), (1.0, 1.2, "unstable")] {
            let cfg = RunConfig::from_toml(&format!("[planewave]\nlambda = {lambda:?}\nalpha = {alpha:?}\nN = 32\n")).unwrap();
            let out = dispatch(Task::PlanewaveVerdict, &cfg).unwrap();
            assert_eq!(out.summary["verdict"], v);
            let t = &out.tables[0].1;
            assert_eq!(t.rows.len(), 1);
            assert_eq!(t.rows[0][6], Cell::Text(v.into()));
        }
    }

    #[test]
    fn spherical_simulate_schema() {
        let cfg = RunConfig::from_toml("[numerics]\nt_end = 1.0\ndt = 1e-2\nstride = 10\n").unwrap();
        let out = dispatch(Task::SphericalSimulate, &cfg).unwrap();
        let t = &out.tables[0].1;
        assert_eq!(t.columns, ["t", "d_orbit", "H_drift", "L_drift"]);
        assert_eq!(t.rows.len(), 11);
    }
}

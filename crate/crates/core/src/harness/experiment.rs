use std::time::{SystemTime, UNIX_EPOCH};

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A Hamiltonian system with a distinguished relative equilibrium.
pub trait ExperimentSystem {
    fn label(&self) -> String;
    fn base(&self) -> Vec<f64>;
    /// Initial state at distance `delta` from the base point.
    fn perturb(&self, delta: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>>;
    /// Run the flow, calling `observe(t, u)` at t = 0 and every `stride` steps.
    fn evolve(&self, u0: &[f64], horizon: f64, stride: usize, observe: &mut dyn FnMut(f64, &[f64])) -> Result<()>;
    /// Distance to the group orbit of the base point.
    fn orbit_distance(&self, u: &[f64]) -> Result<f64>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityExperiment {
    pub deltas: Vec<f64>,
    pub horizon: f64,
    pub stride: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaRun {
    pub delta: f64,
    pub times: Vec<f64>,
    pub distances: Vec<f64>,
    pub max_distance: f64,
    /// `max_distance / delta`; absent for `delta = 0`.
    pub max_ratio: Option<f64>,
    /// Abort message when the evolution stopped early.
    pub aborted: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub max_ratio: f64,
    pub max_distance: f64,
    pub aborted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub system: String,
    pub config: StabilityExperiment,
    pub runs: Vec<DeltaRun>,
    pub summary: RunSummary,
    pub started_unix: f64,
    pub finished_unix: f64,
}

impl RunRecord {
    /// Equality ignoring timestamps.
    pub fn same_results(&self, other: &Self) -> bool {
        self.system == other.system && self.config == other.config && self.runs == other.runs && self.summary == other.summary
    }
}

fn now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// For each `δ`: perturb, evolve and record the orbit distance along the run.
///
/// The equilibrium's orbit is invariant in time, so distances are measured to the fixed
/// orbit of the base point.
pub fn run_stability_experiment(system: &dyn ExperimentSystem, e: &StabilityExperiment) -> Result<RunRecord> {
    if e.deltas.iter().any(|d| !(*d >= 0.0)) {
        return invalid("perturbation sizes must be non-negative");
    }
    if !(e.horizon > 0.0) {
        return invalid("horizon must be positive");
    }
    let started_unix = now();
    let mut rng = ChaCha8Rng::seed_from_u64(e.seed);
    let mut runs = Vec::with_capacity(e.deltas.len());
    for &delta in &e.deltas {
        let u0 = if delta == 0.0 { system.base() } else { system.perturb(delta, &mut rng)? };
        let mut times = Vec::new();
        let mut distances = Vec::new();
        let mut failure: Option<Error> = None;
        let outcome = system.evolve(&u0, e.horizon, e.stride, &mut |t, u| {
            if failure.is_some() {
                return;
            }
            match system.orbit_distance(u) {
                Ok(d) => {
                    times.push(t);
                    distances.push(d);
                }
                Err(err) => failure = Some(err),
            }
        });
        if let Some(err) = failure {
            return Err(err);
        }
        let aborted = match outcome {
            Ok(()) => None,
            Err(err @ Error::Aborted { .. }) => Some(err.to_string()),
            Err(err) => return Err(err),
        };
        let max_distance = distances.iter().copied().fold(0.0, f64::max);
        runs.push(DeltaRun {
            delta,
            max_ratio: (delta > 0.0).then(|| max_distance / delta),
            times,
            distances,
            max_distance,
            aborted,
        });
    }
    let summary = RunSummary {
        max_ratio: runs.iter().filter_map(|r| r.max_ratio).fold(0.0, f64::max),
        max_distance: runs.iter().map(|r| r.max_distance).fold(0.0, f64::max),
        aborted: runs.iter().filter(|r| r.aborted.is_some()).count(),
    };
    Ok(RunRecord {
        system: system.label(),
        config: e.clone(),
        runs,
        summary,
        started_unix,
        finished_unix: now(),
    })
}

/// `inf_{t′} d(u, 𝒪_{ref(t′)})` over stored reference samples.
pub fn distance_to_reference_orbits(
    u: &[f64],
    reference: &[Vec<f64>],
    distance: impl Fn(&[f64], &[f64]) -> Result<f64>,
) -> Result<f64> {
    let mut best = f64::INFINITY;
    for r in reference {
        best = best.min(distance(u, r)?);
    }
    Ok(best)
}

/// Least-squares slope of `ln d(t)` over samples with `lo ≤ d ≤ hi`.
pub fn fit_exponential_rate(times: &[f64], distances: &[f64], lo: f64, hi: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(distances)
        .filter(|(_, &d)| d >= lo && d <= hi)
        .map(|(&t, &d)| (t, d.ln()))
        .collect();
    if pts.len() < 3 {
        return invalid(format!("only {} samples inside the fitting window", pts.len()));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_of_pure_exponential() {
        let t: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let d: Vec<f64> = t.iter().map(|t| 1e-6 * (1.3 * t).exp()).collect();
        assert!((fit_exponential_rate(&t, &d, 1e-5, 1e-2).unwrap() - 1.3).abs() < 1e-10);
        assert!(fit_exponential_rate(&t, &d, 1.0, 2.0).is_err());
    }

    #[test]
    fn reference_orbit_search() {
        let refs = vec![vec![0.0], vec![1.0], vec![2.0]];
        let d = distance_to_reference_orbits(&[1.2], &refs, |a, b| Ok((a[0] - b[0]).abs())).unwrap();
        assert!((d - 0.2).abs() < 1e-15);
    }
}

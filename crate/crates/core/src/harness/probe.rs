use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A Lyapunov functional near an equilibrium, in a flat real representation.
pub trait ProbeTarget {
    fn dim(&self) -> usize;
    fn base(&self) -> Vec<f64>;
    fn lyapunov(&self, u: &[f64]) -> Result<f64>;
    /// `ℒ(u) − ℒ(base)`; override when the plain difference cancels badly.
    fn lyapunov_gap(&self, u: &[f64]) -> Result<f64> {
        Ok(self.lyapunov(u)? - self.lyapunov(&self.base())?)
    }
    /// Map onto the constraint level set of the equilibrium.
    fn project(&self, u: &[f64]) -> Result<Vec<f64>>;
    /// Distance to the (constrained) symmetry orbit of the equilibrium.
    fn orbit_distance(&self, u: &[f64]) -> Result<f64>;
    /// Size of a perturbation direction.
    fn norm(&self, v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
    /// Size of the gradient of the Lyapunov functional at the base point.
    fn stationary_residual(&self) -> Result<f64>;
    /// Directions to try before the random ones.
    fn seeded_directions(&self) -> Vec<Vec<f64>> {
        Vec::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Largest perturbation radius.
    pub eta: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub index: usize,
    /// Radius of the perturbation before projection.
    pub radius: f64,
    pub distance: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub samples: Vec<ProbeSample>,
    /// Samples discarded because the orbit distance fell below `1e−12`.
    pub skipped: usize,
    pub c_min: f64,
    pub worst: Option<ProbeSample>,
}

impl ProbeResult {
    /// Minimum ratio over samples with radius at most `eta`.
    pub fn c_min_within(&self, eta: f64) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.radius <= eta)
            .map(|s| s.ratio)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Sample `(ℒ(u′) − ℒ(u))/d²(u′, 𝒪)` over random projected perturbations.
pub fn coercivity_probe(target: &dyn ProbeTarget, cfg: &ProbeConfig) -> Result<ProbeResult> {
    if !(cfg.eta > 0.0) {
        return invalid(format!("neighbourhood radius must be positive, got {}", cfg.eta));
    }
    let res = target.stationary_residual()?;
    if res > 1e-8 {
        return invalid(format!("base point is not stationary (residual {res:.3e})"));
    }
    let base = target.base();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut samples = Vec::with_capacity(cfg.samples);
    let mut skipped = 0;
    let seeded = target.seeded_directions();
    let total = seeded.len() + cfg.samples;
    for index in 0..total {
        let (dir, radius) = if index < seeded.len() {
            (seeded[index].clone(), cfg.eta)
        } else {
            let d: Vec<f64> = (0..target.dim()).map(|_| rng.sample(StandardNormal)).collect();
            let r = cfg.eta * (1.0 - rng.random::<f64>());
            (d, r)
        };
        let nd = target.norm(&dir);
        if !(nd > 0.0) {
            skipped += 1;
            continue;
        }
        let u: Vec<f64> = base.iter().zip(&dir).map(|(b, d)| b + radius / nd * d).collect();
        let u = target.project(&u)?;
        let d = target.orbit_distance(&u)?;
        if d < 1e-12 {
            skipped += 1;
            continue;
        }
        let ratio = target.lyapunov_gap(&u)? / (d * d);
        samples.push(ProbeSample {
            index,
            radius,
            distance: d,
            ratio,
        });
    }
    let worst = samples.iter().copied().min_by(|a, b| a.ratio.total_cmp(&b.ratio));
    Ok(ProbeResult {
        c_min: worst.map_or(f64::INFINITY, |w| w.ratio),
        samples,
        skipped,
        worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `½uᵀAu` with `A = diag(a)`, constrained to `u₀ = 0`, orbit = `{0}`.
    struct Quadratic(Vec<f64>);

    impl ProbeTarget for Quadratic {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn base(&self) -> Vec<f64> {
            vec![0.0; self.0.len()]
        }
        fn lyapunov(&self, u: &[f64]) -> Result<f64> {
            Ok(0.5 * u.iter().zip(&self.0).map(|(x, a)| a * x * x).sum::<f64>())
        }
        fn project(&self, u: &[f64]) -> Result<Vec<f64>> {
            let mut v = u.to_vec();
            v[0] = 0.0;
            Ok(v)
        }
        fn orbit_distance(&self, u: &[f64]) -> Result<f64> {
            Ok(self.norm(u))
        }
        fn stationary_residual(&self) -> Result<f64> {
            Ok(0.0)
        }
    }

    #[test]
    fn approaches_smallest_constrained_eigenvalue() {
        let q = Quadratic(vec![-5.0, 0.8, 2.0, 3.0]);
        let few = coercivity_probe(&q, &ProbeConfig { eta: 1.0, samples: 10, seed: 1 }).unwrap();
        let many = coercivity_probe(&q, &ProbeConfig { eta: 1.0, samples: 20000, seed: 1 }).unwrap();
        assert!(many.c_min >= 0.4 - 1e-12);
        assert!(many.c_min - 0.4 < 2e-3, "{}", many.c_min);
        assert!(many.c_min <= few.c_min);
    }

    #[test]
    fn monotone_in_radius() {
        let q = Quadratic(vec![0.0, 0.8, 2.0]);
        let r = coercivity_probe(&q, &ProbeConfig { eta: 1.0, samples: 500, seed: 3 }).unwrap();
        let etas = [0.1, 0.3, 0.6, 1.0];
        let c: Vec<f64> = etas.iter().map(|&e| r.c_min_within(e)).collect();
        assert!(c.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn deterministic() {
        let q = Quadratic(vec![0.0, 0.8, 2.0]);
        let cfg = ProbeConfig { eta: 0.5, samples: 100, seed: 9 };
        assert_eq!(coercivity_probe(&q, &cfg).unwrap(), coercivity_probe(&q, &cfg).unwrap());
        assert!(coercivity_probe(&q, &ProbeConfig { eta: 0.0, ..cfg }).is_err());
    }
}

use serde::{Deserialize, Serialize};

/// Largest drift of one conserved quantity along a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    pub name: String,
    /// `max_t ‖F(u(t)) − F(u(0))‖`.
    pub absolute: f64,
    /// `absolute / (‖F(u(0))‖ + 1e−15)`.
    pub relative: f64,
}

pub type Quantity<'a, T> = (&'a str, &'a dyn Fn(&T) -> Vec<f64>);

/// Drift of each (possibly vector-valued) quantity over the samples.
pub fn conservation_monitor<T>(states: &[T], quantities: &[Quantity<'_, T>]) -> Vec<Drift> {
    quantities
        .iter()
        .map(|(name, f)| {
            let Some(first) = states.first() else {
                return Drift {
                    name: name.to_string(),
                    absolute: 0.0,
                    relative: 0.0,
                };
            };
            let f0 = f(first);
            let n0 = f0.iter().map(|v| v * v).sum::<f64>().sqrt();
            let absolute = states
                .iter()
                .map(|s| f(s).iter().zip(&f0).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
                .fold(0.0, f64::max);
            Drift {
                name: name.to_string(),
                absolute,
                relative: absolute / (n0 + 1e-15),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_constant() {
        let q = |x: &f64| vec![*x];
        let none: Vec<f64> = vec![];
        assert_eq!(conservation_monitor(&none, &[("x", &q)])[0].relative, 0.0);
        let d = conservation_monitor(&[2.0, 2.0, 2.5], &[("x", &q)]);
        assert_eq!(d[0].absolute, 0.5);
        assert!((d[0].relative - 0.25).abs() < 1e-15);
    }
}

//! Run configuration: TOML file plus `--key.path value` overrides.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::harness::PlaneWavePerturbation;
use crate::spherical::PotentialSpec;
use crate::standing::NonlinearityKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SphericalSection {
    pub potential: PotentialSpec,
    pub rho: f64,
    pub axis: [f64; 3],
    /// Perturbation size for `simulate`.
    pub delta: f64,
}

impl Default for SphericalSection {
    fn default() -> Self {
        Self {
            potential: PotentialSpec::Kepler,
            rho: 1.0,
            axis: [0.0, 0.0, 1.0],
            delta: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlaneWaveSection {
    pub beta: f64,
    pub lambda: f64,
    #[serde(alias = "L")]
    pub length: f64,
    pub alpha: f64,
    #[serde(alias = "N")]
    pub n: usize,
    pub delta: f64,
    pub perturbation: PlaneWavePerturbation,
}

impl Default for PlaneWaveSection {
    fn default() -> Self {
        Self {
            beta: 1.0,
            lambda: -1.0,
            length: 2.0 * PI,
            alpha: 1.0,
            n: 256,
            delta: 1e-4,
            perturbation: PlaneWavePerturbation::Random,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolitonSection {
    pub alpha: f64,
    pub c: f64,
    pub lambda: f64,
    #[serde(alias = "L")]
    pub length: f64,
    #[serde(alias = "N")]
    pub n: usize,
    /// Boost velocity for `boost-check`.
    pub velocity: f64,
}

impl Default for SolitonSection {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            c: 0.0,
            lambda: 1.0,
            length: 16.0 * PI,
            n: 512,
            velocity: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ManakovSection {
    pub alpha: f64,
    pub c: f64,
    pub theta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub lambda: f64,
    #[serde(alias = "L")]
    pub length: f64,
    #[serde(alias = "N")]
    pub n: usize,
}

impl Default for ManakovSection {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            c: 0.5,
            theta: PI / 6.0,
            gamma1: 0.0,
            gamma2: 0.0,
            lambda: 1.0,
            length: 16.0 * PI,
            n: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StandingSection {
    pub kind: NonlinearityKind,
    pub sigma: f64,
    pub b: f64,
    pub xi: f64,
    pub xi_lo: f64,
    /// Upper end of the curve; for AL defaults to `hi_fraction · ξ∞`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_hi: Option<f64>,
    pub hi_fraction: f64,
    pub points: usize,
    pub step: f64,
    /// Half-line length; defaults to `20/√ξ_min`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    pub dxi: f64,
    pub limit_xis: Vec<f64>,
    pub limit_radius: f64,
}

impl Default for StandingSection {
    fn default() -> Self {
        Self {
            kind: NonlinearityKind::Pt,
            sigma: 3.0,
            b: 0.0,
            xi: 1.0,
            xi_lo: 0.05,
            xi_hi: None,
            hi_fraction: 0.95,
            points: 20,
            step: 0.01,
            radius: None,
            dxi: 1e-3,
            limit_xis: vec![0.1, 0.05, 0.01],
            limit_radius: 30.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HarnessTarget {
    Spherical,
    Planewave,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HarnessSection {
    pub system: HarnessTarget,
    pub deltas: Vec<f64>,
}

impl Default for HarnessSection {
    fn default() -> Self {
        Self {
            system: HarnessTarget::Planewave,
            deltas: vec![1e-4, 1e-3],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    pub dt: f64,
    #[serde(alias = "T")]
    pub t_end: f64,
    pub stride: usize,
    pub tol: f64,
    pub n_max: usize,
    pub eta: f64,
    pub samples: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 10.0,
            stride: 100,
            tol: 1e-8,
            n_max: 8,
            eta: 1e-3,
            samples: 1000,
        }
    }
}

/// A fully defaulted, validated run configuration.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    /// Output subdirectory under the output root.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub numerics: Numerics,
    pub spherical: SphericalSection,
    pub planewave: PlaneWaveSection,
    pub soliton: SolitonSection,
    pub manakov: ManakovSection,
    pub standing: StandingSection,
    pub harness: HarnessSection,
}

// keys whose values are tagged tables checked by serde itself
const OPAQUE: &[&str] = &["spherical.potential", "planewave.perturbation"];
const OPTIONAL: &[&str] = &["output", "standing.xi_hi", "standing.radius"];
const ALIASES: &[&str] = &["planewave.L", "planewave.N", "soliton.L", "soliton.N", "manakov.L", "manakov.N", "numerics.T"];

fn known_keys() -> BTreeSet<String> {
    fn walk(prefix: &str, v: &toml::Value, out: &mut BTreeSet<String>) {
        if let toml::Value::Table(t) = v {
            for (k, v) in t {
                let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                out.insert(path.clone());
                if !OPAQUE.contains(&path.as_str()) {
                    walk(&path, v, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    let v = toml::Value::try_from(RunConfig::default()).expect("default config serializes");
    walk("", &v, &mut out);
    out.extend(OPTIONAL.iter().chain(ALIASES).map(|s| s.to_string()));
    out
}

fn suggest(path: &str, known: &BTreeSet<String>) -> Option<String> {
    let (parent, leaf) = path.rsplit_once('.').map_or(("", path), |(p, l)| (p, l));
    known
        .iter()
        .filter_map(|k| {
            let (kp, kl) = k.rsplit_once('.').map_or(("", k.as_str()), |(p, l)| (p, l));
            (kp == parent).then(|| (strsim::jaro_winkler(leaf, kl), k))
        })
        .filter(|(s, _)| *s >= 0.8)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, k)| k.clone())
}

fn check_keys(prefix: &str, v: &toml::Value, known: &BTreeSet<String>) -> Result<()> {
    if let toml::Value::Table(t) = v {
        for (k, v) in t {
            let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
            if !known.contains(&path) {
                let hint = match suggest(&path, known) {
                    Some(s) => format!("; did you mean `{s}`?"),
                    None => String::new(),
                };
                return Err(config_error(format!("unknown key `{path}`{hint}")));
            }
            if !OPAQUE.contains(&path.as_str()) {
                check_keys(&path, v, known)?;
            }
        }
    }
    Ok(())
}

fn config_error(message: String) -> Error {
    Error::Config {
        path: String::new(),
        message,
    }
}

fn parse_scalar(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

fn set_path(root: &mut toml::Table, path: &str, value: toml::Value) -> Result<()> {
    let mut parts: Vec<&str> = path.split('.').collect();
    let leaf = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| config_error(format!("bad flag `--{path}`")))?;
    let mut cur = root;
    for p in parts {
        let entry = cur.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = match entry {
            toml::Value::Table(t) => t,
            _ => return Err(config_error(format!("`{p}` in `--{path}` is not a table"))),
        };
    }
    cur.insert(leaf.to_string(), value);
    Ok(())
}

/// `["--a.b", "1", "--c=x"]` into `(path, value)` pairs.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, toml::Value)>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        let key = a
            .strip_prefix("--")
            .ok_or_else(|| config_error(format!("expected `--key value`, got `{a}`")))?;
        if let Some((k, v)) = key.split_once('=') {
            out.push((k.to_string(), parse_scalar(v)));
            i += 1;
        } else {
            let v = args
                .get(i + 1)
                .ok_or_else(|| config_error(format!("flag `--{key}` needs a value")))?;
            out.push((key.to_string(), parse_scalar(v)));
            i += 2;
        }
    }
    Ok(out)
}

impl RunConfig {
    /// Parse TOML text, apply overrides, fill defaults and validate.
    pub fn from_toml_with(text: &str, overrides: &[(String, toml::Value)]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| config_error(e.message().to_string()))?;
        for (k, v) in overrides {
            set_path(&mut table, k, v.clone())?;
        }
        let value = toml::Value::Table(table);
        check_keys("", &value, &known_keys())?;
        let cfg: RunConfig = value.try_into().map_err(|e: toml::de::Error| config_error(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_toml_with(text, &[])
    }

    pub fn load(path: &Path, overrides: &[(String, toml::Value)]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_with(&text, overrides).map_err(|e| match e {
            Error::Config { message, .. } => Error::Config {
                path: path.display().to_string(),
                message,
            },
            other => other,
        })
    }

    /// Canonical TOML of the defaulted config.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |key: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_error(format!("`{key}` must be positive and finite, got {v}")))
            }
        };
        let n = &self.numerics;
        pos("numerics.dt", n.dt)?;
        pos("numerics.tol", n.tol)?;
        pos("numerics.eta", n.eta)?;
        if !(n.t_end >= 0.0 && n.t_end.is_finite()) {
            return Err(config_error(format!("`numerics.t_end` must be non-negative, got {}", n.t_end)));
        }
        if n.stride == 0 {
            return Err(config_error("`numerics.stride` must be at least 1".into()));
        }
        pos("spherical.rho", self.spherical.rho)?;
        pos("planewave.length", self.planewave.length)?;
        pos("planewave.beta", self.planewave.beta)?;
        pos("soliton.length", self.soliton.length)?;
        pos("manakov.length", self.manakov.length)?;
        pos("standing.step", self.standing.step)?;
        pos("standing.xi", self.standing.xi)?;
        pos("standing.xi_lo", self.standing.xi_lo)?;
        pos("standing.dxi", self.standing.dxi)?;
        pos("standing.limit_radius", self.standing.limit_radius)?;
        if let Some(r) = self.standing.radius {
            pos("standing.radius", r)?;
        }
        if let Some(h) = self.standing.xi_hi {
            pos("standing.xi_hi", h)?;
        }
        if !(self.standing.hi_fraction > 0.0 && self.standing.hi_fraction < 1.0) {
            return Err(config_error("`standing.hi_fraction` must lie in (0, 1)".into()));
        }
        for (key, list) in [("harness.deltas", &self.harness.deltas), ("standing.limit_xis", &self.standing.limit_xis)] {
            if list.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
                return Err(config_error(format!("`{key}` entries must be non-negative and finite")));
            }
        }
        for (key, n) in [("planewave.n", self.planewave.n), ("soliton.n", self.soliton.n), ("manakov.n", self.manakov.n)] {
            if n < 4 || n % 2 != 0 {
                return Err(config_error(format!("`{key}` must be an even number ≥ 4, got {n}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_planewave_config() {
        let c = RunConfig::from_toml("[planewave]\nbeta = 1\nlambda = -1\nL = 6.2831853\nalpha = 1\nN = 256\n").unwrap();
        assert_eq!(c.planewave.n, 256);
        assert_eq!(c.planewave.length, 6.2831853);
    }

    #[test]
    fn negative_dt_names_the_key() {
        let e = RunConfig::from_toml("[numerics]\ndt = -0.1\n").unwrap_err().to_string();
        assert!(e.contains("numerics.dt"), "{e}");
    }

    #[test]
    fn typo_gets_a_suggestion() {
        let e = RunConfig::from_toml("[planewave]\nlamda = 1.0\n").unwrap_err().to_string();
        assert!(e.contains("planewave.lamda") && e.contains("planewave.lambda"), "{e}");
        let e = RunConfig::from_toml("[numerix]\ndt = 1e-3\n").unwrap_err().to_string();
        assert!(e.contains("numerics"), "{e}");
    }

    #[test]
    fn overrides_apply() {
        let o = parse_overrides(&["--planewave.lambda".into(), "1".into(), "--seed=7".into()]).unwrap();
        let c = RunConfig::from_toml_with("", &o).unwrap();
        assert_eq!(c.planewave.lambda, 1.0);
        assert_eq!(c.seed, 7);
        let o = parse_overrides(&["--standing.kind".into(), "al".into()]).unwrap();
        assert_eq!(RunConfig::from_toml_with("", &o).unwrap().standing.kind, NonlinearityKind::Al);
        assert!(parse_overrides(&["--seed".into()]).is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let c = RunConfig::from_toml("seed = 3\n[spherical.potential]\nkind = \"power\"\nscale = -1.0\nexponent = -3.0\n")
            .unwrap();
        let back = RunConfig::from_toml(&c.canonical()).unwrap();
        assert_eq!(c, back);
        assert_eq!(c.sha256(), back.sha256());
    }
}

//! Run configuration shared by all subcommands.
//!
//! A JSON config file has the same fields as [`RunConfig`]. Values given on
//! the command line win over the file, and the file wins over defaults.

use anyhow::{bail, Context};
use holoball::harness::{parse_exponent, FamilySpec};
use holoball::quad::PhiWeight;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::path::{Path, PathBuf};

/// Bad input from the user: reported with exit status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    #[serde(default, with = "exponent")]
    pub p: Option<f64>,
    #[serde(default, with = "exponent")]
    pub q: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub s: Option<f64>,
    pub n: Option<u32>,
    pub k: Option<usize>,
    pub nu: Option<usize>,
    pub grid: Option<String>,
    pub kind: Option<String>,
    pub functional: Option<String>,
    pub phi: Option<PhiWeight>,
    pub degree: Option<usize>,
    pub dim: Option<usize>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub count: Option<usize>,
    pub family: Option<FamilySpec>,
    pub suite: Option<String>,
    pub jobs: Option<usize>,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($field:ident),*) => {
        RunConfig { $($field: $top.$field.or($base.$field),)* }
    };
}

impl RunConfig {
    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `self` win; the rest come from `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        overlay!(
            self, base, command, input, output, p, q, alpha, beta, s, n, k, nu, grid, kind, functional, phi,
            degree, dim, seed, budget, count, family, suite, jobs
        )
    }

    pub fn input(&self) -> anyhow::Result<&Path> {
        self.input.as_deref().ok_or_else(|| usage("an input polynomial is required (--input FILE)"))
    }
}

pub fn exponent_arg(s: &str) -> Result<f64, String> {
    let v = parse_exponent(s)?;
    if !(v >= 1.0) {
        return Err(format!("exponent {v} must lie in [1, ∞]"));
    }
    Ok(v)
}

/// `power:a` or `powerlog:a:b`.
pub fn phi_arg(s: &str) -> Result<PhiWeight, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("bad number {t:?} in φ spec: {e}"));
    match parts.as_slice() {
        ["power", a] => Ok(PhiWeight::Power { a: num(a)? }),
        ["powerlog", a, b] => Ok(PhiWeight::PowerLog { a: num(a)?, b: num(b)? }),
        _ => Err(format!("φ spec {s:?} is not power:A or powerlog:A:B")),
    }
}

/// `log:lo:hi:count`, `lin:lo:hi:count` or a comma-separated list.
pub fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.as_slice() {
        [mode @ ("log" | "lin"), lo, hi, count] => {
            let lo: f64 = lo.parse().map_err(|_| usage(format!("bad grid start {lo:?}")))?;
            let hi: f64 = hi.parse().map_err(|_| usage(format!("bad grid end {hi:?}")))?;
            let count: usize = count.parse().map_err(|_| usage(format!("bad grid size {count:?}")))?;
            if count == 0 {
                bail!(usage("grid needs at least one point"));
            }
            if count == 1 {
                vec![lo]
            } else if *mode == "log" {
                if !(lo > 0.0) {
                    bail!(usage("log grid must start above 0"));
                }
                (0..count).map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64)).collect()
            } else {
                (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
            }
        }
        [list] => list
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("bad grid value {t:?}"))))
            .collect::<anyhow::Result<_>>()?,
        _ => bail!(usage(format!("grid {spec:?} is not log:LO:HI:N, lin:LO:HI:N or a list"))),
    };
    if grid.iter().any(|d| !(*d > 0.0)) {
        bail!(usage("grid values must be positive"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        bail!(usage("grid must be strictly increasing"));
    }
    Ok(grid)
}

mod exponent {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) if x.is_infinite() => s.serialize_str("inf"),
            Some(x) => s.serialize_f64(*x),
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Option::<Raw>::deserialize(d)? {
            None => Ok(None),
            Some(Raw::Num(x)) => Ok(Some(x)),
            Some(Raw::Text(t)) => parse_exponent(&t).map(Some).map_err(serde::de::Error::custom),
        }
    }
}

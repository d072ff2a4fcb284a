//! Verification harness: families of test polynomials, registered checks
//! comparing two sides of an inequality or equivalence, and a suite runner
//! producing JSON and CSV reports.

mod checks;
mod evaluate;
mod family;
mod functionals;
mod suite;

pub use checks::{Category, CheckId, CheckParams, Resolved};
pub use evaluate::{composition_words, Outcome, TINY};
pub use family::{FamilySpec, TestFamily};
pub use functionals::{
    difference_functional, jacobi_left, log_grid, log_measure, mixed_of, modulus_functional, panels_for,
    sup_log_grid, tangential_channels, weighted_radial, Means,
};
pub use suite::{
    check_equivalence, check_inequality, check_membership_chain, run_check, run_suite, CheckEntry, CheckResult,
    FamilyOverride, FunctionRecord, RatioStats, Report, SuiteConfig, Verdict, DRIFT_TOLERANCE,
};

/// `f64` exponents with `"inf"` for `∞` (JSON has no infinity).
pub(crate) mod exponent {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => parse(&t).map_err(serde::de::Error::custom),
        }
    }

    pub fn parse(t: &str) -> Result<f64, String> {
        match t.trim() {
            "inf" | "infinity" | "Infinity" | "∞" => Ok(f64::INFINITY),
            other => other.parse::<f64>().map_err(|e| format!("bad exponent {other:?}: {e}")),
        }
    }
}

pub(crate) mod exponent_opt {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => super::exponent::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::exponent")] f64);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

pub use exponent::parse as parse_exponent;

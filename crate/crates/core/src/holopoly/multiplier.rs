use crate::error::{Error, Result};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Scalar sequence `λ_k` acting on homogeneous parts: `Tf = Σ λ_k f_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "type")]
pub enum MultiplierKind {
    /// `λ_k = k^s`, `s` complex.
    RadialPower { re: f64, im: f64 },
    /// `λ_k = Γ(N+1+s)Γ(N+1+k+s+t) / (Γ(N+1+s+t)Γ(N+1+k+s))`.
    GammaRatio { s: f64, t: f64 },
    /// Explicit values by degree; missing degrees map to zero.
    Custom { lambda: Vec<C64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MultiplierSpec {
    pub kind: MultiplierKind,
    pub drop_constant_term: bool,
}

impl MultiplierSpec {
    /// `R^s` with the usual convention `R^s f_0 = 0`.
    pub fn radial_power(s: f64) -> Self {
        Self::radial_power_complex(C64::new(s, 0.0))
    }

    pub fn radial_power_complex(s: C64) -> Self {
        MultiplierSpec {
            kind: MultiplierKind::RadialPower { re: s.re, im: s.im },
            drop_constant_term: true,
        }
    }

    pub fn gamma_ratio(s: f64, t: f64) -> Self {
        MultiplierSpec { kind: MultiplierKind::GammaRatio { s, t }, drop_constant_term: false }
    }

    pub fn custom(lambda: Vec<C64>) -> Self {
        MultiplierSpec { kind: MultiplierKind::Custom { lambda }, drop_constant_term: false }
    }

    /// `λ_0, …, λ_D` for functions of `dim` variables.
    pub fn lambdas(&self, dim: usize, max_degree: usize) -> Result<Vec<C64>> {
        if let MultiplierKind::GammaRatio { s, t } = self.kind {
            let n = dim as f64;
            for (label, v) in [("N+s", n + s), ("N+s+t", n + s + t)] {
                if v < 0.0 && v == v.round() {
                    return Err(Error::InvalidMultiplier(format!(
                        "{label} = {v} is a negative integer, the Gamma ratio has a pole"
                    )));
                }
            }
            let mut out = Vec::with_capacity(max_degree + 1);
            let mut acc = 1.0;
            out.push(C64::new(1.0, 0.0));
            for j in 0..max_degree {
                let j = j as f64;
                acc *= (n + 1.0 + s + t + j) / (n + 1.0 + s + j);
                out.push(C64::new(acc, 0.0));
            }
            if self.drop_constant_term {
                out[0] = C64::new(0.0, 0.0);
            }
            return Ok(out);
        }
        Ok(self.lambdas_unchecked(max_degree))
    }

    pub(crate) fn lambdas_unchecked(&self, max_degree: usize) -> Vec<C64> {
        let mut out: Vec<C64> = match &self.kind {
            MultiplierKind::RadialPower { re, im } => {
                let s = C64::new(*re, *im);
                (0..=max_degree)
                    .map(|k| {
                        if k == 0 {
                            C64::new(1.0, 0.0)
                        } else {
                            (s * (k as f64).ln()).exp()
                        }
                    })
                    .collect()
            }
            MultiplierKind::Custom { lambda } => (0..=max_degree)
                .map(|k| lambda.get(k).copied().unwrap_or_default())
                .collect(),
            MultiplierKind::GammaRatio { .. } => unreachable!("handled in lambdas"),
        };
        if self.drop_constant_term {
            out[0] = C64::new(0.0, 0.0);
        }
        out
    }
}

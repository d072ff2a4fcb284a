//! Seeded test-function families.
//!
//! Function `i` of a family draws from its own ChaCha stream and generates
//! coefficients in graded order, so the family at degree `D/2` is exactly the
//! truncation of the family at degree `D`.

use crate::error::{Error, Result};
use crate::holopoly::HoloPoly;
use crate::lpblocks::BlockBasis;
use crate::moduli::haar_unitary;
use crate::multi_index::{count_of_degree, sphere_moment, MultiIndex};
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "generator")]
pub enum FamilySpec {
    /// Gaussian coefficients with `E‖f_k‖_2² = (1+k)^{−2γ}`.
    RandomDecay { gamma: f64 },
    /// `Σ_{1≤ν≤levels} 2^{−ν} e^{iθ_ν} ⟨z, ζ⟩^{2^ν}` with random phases and direction `ζ`.
    Lacunary { levels: u32 },
    /// `e^{iθ} z^α`.
    Monomial { alpha: Vec<u32> },
    /// Random coefficients supported in the degrees of block `ν`.
    BlockConcentrated { nu: usize },
    /// Polynomials read from a JSON file (one object or an array).
    UserFile { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestFamily {
    #[serde(flatten)]
    pub spec: FamilySpec,
    pub count: usize,
    pub seed: u64,
    pub dim: usize,
    pub max_degree: usize,
}

const STREAM_FAMILY: u64 = 7 << 40;

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    C64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

/// Random homogeneous parts of the given degrees, `E‖f_k‖² = scale(k)²`.
fn random_parts(
    dim: usize,
    max_degree: usize,
    rng: &mut ChaCha8Rng,
    scale: impl Fn(usize) -> f64,
) -> HoloPoly {
    let mut f = HoloPoly::zero(dim, max_degree);
    for k in 0..=max_degree {
        let s = scale(k);
        let count = count_of_degree(dim, k) as f64;
        for alpha in MultiIndex::all_of_degree(dim, k) {
            let c = gaussian(rng);
            if s > 0.0 {
                let sd = s / (count * sphere_moment(&alpha)).sqrt();
                f.add_term(alpha, c * sd);
            }
        }
    }
    f
}

impl TestFamily {
    pub fn new(spec: FamilySpec, count: usize, seed: u64, dim: usize, max_degree: usize) -> Self {
        TestFamily { spec, count, seed, dim, max_degree }
    }

    pub fn random_decay(gamma: f64, count: usize, seed: u64, dim: usize, max_degree: usize) -> Self {
        Self::new(FamilySpec::RandomDecay { gamma }, count, seed, dim, max_degree)
    }

    pub fn with_degree(&self, max_degree: usize) -> Self {
        TestFamily { max_degree, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Config("family dimension must be ≥ 1".into()));
        }
        match &self.spec {
            FamilySpec::Monomial { alpha } if alpha.len() != self.dim => Err(Error::Config(format!(
                "monomial exponent has {} entries for dimension {}",
                alpha.len(),
                self.dim
            ))),
            FamilySpec::RandomDecay { gamma } if !gamma.is_finite() => {
                Err(Error::Config(format!("decay rate γ = {gamma} must be finite")))
            }
            _ => Ok(()),
        }
    }

    fn rng(&self, i: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(STREAM_FAMILY + i as u64);
        rng
    }

    pub fn generate(&self) -> Result<Vec<HoloPoly>> {
        self.validate()?;
        let (n, d) = (self.dim, self.max_degree);
        if let FamilySpec::UserFile { path } = &self.spec {
            let text = std::fs::read_to_string(path)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let list: Vec<HoloPoly> = match value {
                serde_json::Value::Array(items) => {
                    items.into_iter().map(serde_json::from_value).collect::<std::result::Result<_, _>>()?
                }
                other => vec![serde_json::from_value(other)?],
            };
            for f in &list {
                if f.dim() != n {
                    return Err(Error::Config(format!(
                        "{} holds a polynomial in {} variables, family dimension is {n}",
                        path.display(),
                        f.dim()
                    )));
                }
            }
            return Ok(list.iter().take(self.count.max(1)).map(|f| f.with_max_degree(d)).collect());
        }
        let out = (0..self.count)
            .map(|i| {
                let mut rng = self.rng(i);
                match &self.spec {
                    FamilySpec::RandomDecay { gamma } => {
                        random_parts(n, d, &mut rng, |k| (1.0 + k as f64).powf(-gamma))
                    }
                    FamilySpec::Lacunary { levels } => {
                        let frame = if n > 1 { Some(haar_unitary(n, &mut rng)) } else { None };
                        let mut g = HoloPoly::zero(n, d);
                        for nu in 1..=*levels {
                            let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                            let deg = 1usize << nu;
                            if deg <= d {
                                let mut e = vec![0u32; n];
                                e[0] = deg as u32;
                                g.add_term(MultiIndex::new(&e), C64::from_polar(2f64.powi(-(nu as i32)), theta));
                            }
                        }
                        match frame {
                            Some(v) => g.compose_linear(&v).expect("frame matches dimension"),
                            None => g,
                        }
                    }
                    FamilySpec::Monomial { alpha } => {
                        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                        let a = MultiIndex::new(alpha);
                        let mut g = HoloPoly::zero(n, d);
                        if a.degree() <= d {
                            g.add_term(a, C64::from_polar(1.0, theta));
                        }
                        g
                    }
                    FamilySpec::BlockConcentrated { nu } => {
                        let basis = BlockBasis::new(d.max(1));
                        random_parts(n, d, &mut rng, |k| if basis.weight(*nu, k) > 0.0 { 1.0 } else { 0.0 })
                    }
                    FamilySpec::UserFile { .. } => unreachable!("handled above"),
                }
            })
            .collect();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halving_degree_truncates() {
        let fam = TestFamily::random_decay(1.5, 4, 9, 2, 12);
        let big = fam.generate().unwrap();
        let small = fam.with_degree(6).generate().unwrap();
        for (b, s) in big.iter().zip(&small) {
            assert_eq!(&b.with_max_degree(6), s);
        }
    }

    #[test]
    fn families_are_seeded() {
        for spec in [
            FamilySpec::Lacunary { levels: 4 },
            FamilySpec::Monomial { alpha: vec![2, 1] },
            FamilySpec::BlockConcentrated { nu: 3 },
        ] {
            let fam = TestFamily::new(spec, 3, 1, 2, 16);
            assert_eq!(fam.generate().unwrap(), fam.generate().unwrap());
        }
        let lac = TestFamily::new(FamilySpec::Lacunary { levels: 3 }, 1, 2, 1, 16).generate().unwrap();
        assert_eq!(lac[0].len(), 3);
    }
}

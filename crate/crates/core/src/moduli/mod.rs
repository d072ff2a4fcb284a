//! Difference operators `Δ^n_t`, `Δ^n_U` and sampled moduli of smoothness.

mod estimate;
mod sampler;

pub use estimate::{
    hardy_sobolev_check, modulus_dial, modulus_estimate, HardySobolevReport, ModulusEstimate,
    ModulusEstimator, ModulusKind, ModulusOptions,
};
pub use sampler::{haar_unitary, DiagonalSample, SampleSet};

use crate::error::{Error, Result};
use crate::holopoly::HoloPoly;
use crate::multi_index::binomial;
use crate::{CMatrix, C64};

/// `(e^{ikt} − 1)^n` for `k = 0..=max_degree`.
pub fn rotation_multiplier(max_degree: usize, t: f64, n: u32) -> Vec<C64> {
    (0..=max_degree)
        .map(|k| (C64::from_polar(1.0, k as f64 * t) - 1.0).powu(n))
        .collect()
}

/// `Δ^n_t f`: the degree-`k` part is multiplied by `(e^{ikt} − 1)^n`.
pub fn rotation_difference(f: &HoloPoly, t: f64, n: u32) -> HoloPoly {
    f.hadamard(&rotation_multiplier(f.max_degree(), t, n))
}

/// `Δ^n_U f = Σ_j C(n,j) (−1)^{n−j} f∘U^j`.
pub fn transform_difference(f: &HoloPoly, u: &CMatrix, n: u32) -> Result<HoloPoly> {
    if u.nrows() == u.ncols() && u.nrows() > 0 {
        let s = u.clone().singular_values();
        let top = s.iter().copied().fold(0.0, f64::max);
        if top > 1.0 + 1e-12 {
            return Err(Error::Range(format!("operator norm {top} exceeds 1")));
        }
    }
    let mut out = HoloPoly::zero(f.dim(), f.max_degree());
    let mut power = CMatrix::identity(f.dim(), f.dim());
    for j in 0..=n {
        let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
        let c = C64::new(sign * binomial(n as usize, j as usize) as f64, 0.0);
        let g = if j == 0 { f.clone() } else { f.compose_linear(&power)? };
        out = &out + &(&g * c);
        if j < n {
            power = &power * u;
        }
    }
    Ok(out)
}

/// `Δ^n_U g` for `U = diag(μ)`: `c_α ↦ c_α (μ^α − 1)^n`.
pub fn diagonal_difference(g: &HoloPoly, mu: &[C64], n: u32) -> HoloPoly {
    let seq: Vec<(crate::MultiIndex, C64)> =
        g.terms().map(|(a, c)| (a.clone(), c * (a.eval(mu) - 1.0).powu(n))).collect();
    let mut out = HoloPoly::zero(g.dim(), g.max_degree());
    for (a, c) in seq {
        out.add_term(a, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::MultiIndex;
    use crate::quad::{hardy_norm, rule_for_degree};

    #[test]
    fn scalar_rotation_paths_agree() {
        let f = HoloPoly::from_terms(
            2,
            5,
            vec![
                (MultiIndex::new(&[1, 2]), C64::new(1.0, 0.5)),
                (MultiIndex::new(&[4, 0]), C64::new(-0.3, 0.0)),
                (MultiIndex::new(&[0, 5]), C64::new(0.0, 2.0)),
            ],
        )
        .unwrap();
        let t = 0.37;
        for n in 1..=3 {
            let u = CMatrix::identity(2, 2) * C64::from_polar(1.0, t);
            let a = transform_difference(&f, &u, n).unwrap();
            let b = rotation_difference(&f, t, n);
            assert!(a.max_abs_diff(&b) < 1e-13);
        }
        assert!(rotation_difference(&f, 0.0, 2).is_zero());
    }

    #[test]
    fn monomial_difference_norm() {
        let f = HoloPoly::monomial(&[7], C64::new(1.0, 0.0));
        let rule = rule_for_degree(1, 7).unwrap();
        let t = 0.3;
        let v = hardy_norm(&rotation_difference(&f, t, 1), 3.0, &rule);
        assert!((v - 2.0 * (7.0 * t / 2.0).sin()).abs() < 1e-13);
    }

    #[test]
    fn rejects_expanding_matrix() {
        let f = HoloPoly::monomial(&[1, 1], C64::new(1.0, 0.0));
        let u = CMatrix::identity(2, 2) * C64::new(1.5, 0.0);
        assert!(transform_difference(&f, &u, 1).is_err());
    }
}

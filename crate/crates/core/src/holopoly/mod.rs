//! Truncated homogeneous expansions `f = Σ_{k≤D} f_k` on the unit ball of `C^N`.

mod compose;
mod json;
mod mixed;
mod multiplier;
mod tangential;

pub use mixed::MixedPoly;
pub use multiplier::{MultiplierKind, MultiplierSpec};
pub use tangential::{
    canonical_sequences, solve_radial_identity_constants, tangential_apply,
    tangential_gradient_value, DiffOp,
};

use crate::error::{Error, Result};
use crate::multi_index::{sphere_moment, MultiIndex};
use crate::C64;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial in `z_1, …, z_N` of total degree at most `max_degree`.
///
/// Terms are kept in graded order, so the degree-`k` part is a contiguous
/// range of the map. Exact zeros are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct HoloPoly {
    dim: usize,
    max_degree: usize,
    coeffs: BTreeMap<MultiIndex, C64>,
}

fn first_of_degree(dim: usize, k: usize) -> MultiIndex {
    let mut v = vec![0u32; dim];
    v[0] = k as u32;
    MultiIndex::new(&v)
}

impl HoloPoly {
    pub fn zero(dim: usize, max_degree: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        HoloPoly { dim, max_degree, coeffs: BTreeMap::new() }
    }

    /// Build from `(α, c)` pairs; repeated indices are summed.
    pub fn from_terms<I>(dim: usize, max_degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C64)>,
    {
        if dim == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        let mut f = HoloPoly::zero(dim, max_degree);
        for (alpha, c) in terms {
            if alpha.dim() != dim {
                return Err(Error::Shape(format!(
                    "multi-index {:?} has length {}, expected {dim}",
                    alpha.as_slice(),
                    alpha.dim()
                )));
            }
            let k = alpha.degree();
            if k > max_degree {
                return Err(Error::DegreeRange { degree: k, max: max_degree });
            }
            f.add_term(alpha, c);
        }
        Ok(f)
    }

    /// `c·z^α` with `max_degree = |α|`.
    pub fn monomial(alpha: &[u32], c: C64) -> Self {
        let alpha = MultiIndex::new(alpha);
        let mut f = HoloPoly::zero(alpha.dim(), alpha.degree());
        f.add_term(alpha, c);
        f
    }

    pub fn constant(dim: usize, c: C64) -> Self {
        let mut f = HoloPoly::zero(dim, 0);
        f.add_term(MultiIndex::zero(dim), c);
        f
    }

    pub(crate) fn add_term(&mut self, alpha: MultiIndex, c: C64) {
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(alpha) {
            Entry::Vacant(v) => {
                if c != C64::new(0.0, 0.0) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == C64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    fn insert_nonzero(&mut self, alpha: MultiIndex, c: C64) {
        if c != C64::new(0.0, 0.0) {
            self.coeffs.insert(alpha, c);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> C64 {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    /// All stored terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.coeffs.iter()
    }

    /// Terms of total degree exactly `k`.
    pub fn degree_terms(&self, k: usize) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        let lo = first_of_degree(self.dim, k);
        let hi = first_of_degree(self.dim, k + 1);
        self.coeffs.range(lo..hi)
    }

    /// Largest degree carrying a nonzero coefficient.
    pub fn actual_degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().map(|a| a.degree())
    }

    /// The degree-`k` homogeneous part `f_k`.
    pub fn homogeneous_part(&self, k: usize) -> Result<HoloPoly> {
        if k > self.max_degree {
            return Err(Error::DegreeRange { degree: k, max: self.max_degree });
        }
        let mut out = HoloPoly::zero(self.dim, self.max_degree);
        for (a, c) in self.degree_terms(k) {
            out.coeffs.insert(a.clone(), *c);
        }
        Ok(out)
    }

    /// Value of the constant term `f(0)`.
    pub fn constant_term(&self) -> C64 {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        assert_eq!(z.len(), self.dim, "point has wrong dimension");
        self.coeffs.iter().map(|(a, c)| c * a.eval(z)).sum()
    }

    /// Multiply the degree-`k` part by `g[k]`; degrees past the end of `g` are dropped.
    pub fn hadamard(&self, g: &[C64]) -> HoloPoly {
        let mut out = HoloPoly::zero(self.dim, self.max_degree);
        for (a, c) in &self.coeffs {
            if let Some(gk) = g.get(a.degree()) {
                out.insert_nonzero(a.clone(), c * gk);
            }
        }
        out
    }

    /// Real-valued convenience form of [`hadamard`](Self::hadamard).
    pub fn hadamard_real(&self, g: &[f64]) -> HoloPoly {
        let g: Vec<C64> = g.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.hadamard(&g)
    }

    pub fn apply_multiplier(&self, m: &MultiplierSpec) -> Result<HoloPoly> {
        let lambda = m.lambdas(self.dim, self.max_degree)?;
        Ok(self.hadamard(&lambda))
    }

    /// `R^s f = Σ k^s f_k` with the constant term dropped.
    pub fn radial_power(&self, s: f64) -> HoloPoly {
        let lambda = MultiplierSpec::radial_power(s).lambdas_unchecked(self.max_degree);
        self.hadamard(&lambda)
    }

    /// `R f = Σ z_j ∂_j f`.
    pub fn radial(&self) -> HoloPoly {
        let mut out = HoloPoly::zero(self.dim, self.max_degree);
        for (a, c) in &self.coeffs {
            out.insert_nonzero(a.clone(), c * a.degree() as f64);
        }
        out
    }

    /// `R^{-s}`, defined when the constant term vanishes.
    pub fn radial_derivative_inverse(&self, s: f64) -> Result<HoloPoly> {
        let c0 = self.constant_term();
        if c0 != C64::new(0.0, 0.0) {
            return Err(Error::NotInvertible(format!(
                "constant term {c0} is nonzero, R^-s is only defined on functions vanishing at 0"
            )));
        }
        Ok(self.radial_power(-s))
    }

    /// `f_ρ(z) = f(ρz)`.
    pub fn dilate(&self, rho: f64) -> Result<HoloPoly> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::Range(format!("dilation factor {rho} outside (0, 1]")));
        }
        let g: Vec<C64> = (0..=self.max_degree).map(|k| C64::new(rho.powi(k as i32), 0.0)).collect();
        Ok(self.hadamard(&g))
    }

    /// Holomorphic partial derivative `∂f/∂z_j` (0-based `j`).
    pub fn partial(&self, j: usize) -> HoloPoly {
        assert!(j < self.dim, "coordinate out of range");
        let mut out = HoloPoly::zero(self.dim, self.max_degree.saturating_sub(1));
        for (a, c) in &self.coeffs {
            if let Some(b) = a.lowered(j) {
                out.insert_nonzero(b, c * a.get(j) as f64);
            }
        }
        out
    }

    /// `∂^γ f`.
    pub fn partial_multi(&self, gamma: &MultiIndex) -> HoloPoly {
        let g = gamma.degree();
        let mut out = HoloPoly::zero(self.dim, self.max_degree.saturating_sub(g));
        for (a, c) in &self.coeffs {
            if let Some(b) = a.checked_sub(gamma) {
                let mut factor = 1.0;
                for j in 0..self.dim {
                    for t in 0..gamma.get(j) {
                        factor *= (a.get(j) - t) as f64;
                    }
                }
                out.insert_nonzero(b, c * factor);
            }
        }
        out
    }

    /// The distinct `s`-th order partials `∂^γ f` with the number of ordered
    /// `s`-tuples producing each one (`s!/γ!`).
    pub fn derivative_channels(&self, s: usize) -> Vec<(f64, HoloPoly)> {
        let fact_s = crate::multi_index::factorial(s);
        MultiIndex::all_of_degree(self.dim, s)
            .into_iter()
            .map(|gamma| (fact_s / gamma.factorial(), self.partial_multi(&gamma)))
            .collect()
    }

    /// `(Σ_{j_1..j_s} |∂_{j_1}⋯∂_{j_s} f(z)|²)^{1/2}` over ordered tuples.
    pub fn gradient_norm(&self, s: usize, z: &[C64]) -> f64 {
        self.derivative_channels(s)
            .iter()
            .map(|(m, g)| m * g.eval(z).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Keep only degrees `≤ nu`; `max_degree` is unchanged.
    pub fn truncate(&self, nu: usize) -> HoloPoly {
        let mut out = HoloPoly::zero(self.dim, self.max_degree);
        for (a, c) in &self.coeffs {
            if a.degree() <= nu {
                out.coeffs.insert(a.clone(), *c);
            }
        }
        out
    }

    /// Same coefficients viewed in a space of different degree bound; higher terms are dropped.
    pub fn with_max_degree(&self, d: usize) -> HoloPoly {
        let mut out = self.truncate(d);
        out.max_degree = d;
        out
    }

    pub fn scale(&self, s: C64) -> HoloPoly {
        let mut out = HoloPoly::zero(self.dim, self.max_degree);
        for (a, c) in &self.coeffs {
            out.insert_nonzero(a.clone(), c * s);
        }
        out
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &HoloPoly) -> f64 {
        (self - other).max_abs()
    }

    /// `‖f_k‖²_{L²(σ)}` for `k = 0..=max_degree` from the monomial moments.
    pub fn part_energies(&self) -> Vec<f64> {
        let mut e = vec![0.0; self.max_degree + 1];
        for (a, c) in &self.coeffs {
            e[a.degree()] += c.norm_sqr() * sphere_moment(a);
        }
        e
    }

    /// Hardy `H²` norm from coefficients: `(Σ |c_α|² μ_α)^{1/2}`.
    pub fn h2_norm(&self) -> f64 {
        self.part_energies().iter().sum::<f64>().sqrt()
    }

    pub fn to_mixed(&self) -> MixedPoly {
        MixedPoly::from_holo(self)
    }

    fn combine(&self, other: &HoloPoly, sign: f64) -> HoloPoly {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        out.max_degree = self.max_degree.max(other.max_degree);
        for (a, c) in &other.coeffs {
            let e = out.coeffs.entry(a.clone()).or_default();
            *e += c * sign;
        }
        out.coeffs.retain(|_, c| *c != C64::new(0.0, 0.0));
        out
    }
}

impl Add for &HoloPoly {
    type Output = HoloPoly;
    fn add(self, rhs: &HoloPoly) -> HoloPoly {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &HoloPoly {
    type Output = HoloPoly;
    fn sub(self, rhs: &HoloPoly) -> HoloPoly {
        self.combine(rhs, -1.0)
    }
}

impl Neg for &HoloPoly {
    type Output = HoloPoly;
    fn neg(self) -> HoloPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul<C64> for &HoloPoly {
    type Output = HoloPoly;
    fn mul(self, rhs: C64) -> HoloPoly {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sample() -> HoloPoly {
        HoloPoly::from_terms(
            2,
            2,
            vec![
                (MultiIndex::new(&[0, 0]), c(1.0)),
                (MultiIndex::new(&[1, 0]), c(1.0)),
                (MultiIndex::new(&[1, 1]), c(1.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn homogeneous_parts() {
        let f = sample();
        let p2 = f.homogeneous_part(2).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!(p2.coeff(&MultiIndex::new(&[1, 1])), c(1.0));
        assert!(matches!(f.homogeneous_part(3), Err(Error::DegreeRange { .. })));
        let g = HoloPoly::monomial(&[3, 0], c(1.0));
        assert!(g.homogeneous_part(2).unwrap().is_zero());
        let mut sum = HoloPoly::zero(2, 2);
        for k in 0..=2 {
            sum = &sum + &f.homogeneous_part(k).unwrap();
        }
        assert_eq!(sum, f);
    }

    #[test]
    fn radial_powers() {
        let f = HoloPoly::monomial(&[1, 1], c(1.0));
        let g = f.apply_multiplier(&MultiplierSpec::radial_power(2.0)).unwrap();
        assert!((g.coeff(&MultiIndex::new(&[1, 1])) - c(4.0)).norm() < 1e-15);
        let h = HoloPoly::from_terms(1, 1, vec![(MultiIndex::new(&[0]), c(1.0)), (MultiIndex::new(&[1]), c(1.0))]).unwrap();
        let rh = h.apply_multiplier(&MultiplierSpec::radial_power(1.0)).unwrap();
        assert_eq!(rh, HoloPoly::from_terms(1, 1, vec![(MultiIndex::new(&[1]), c(1.0))]).unwrap());
    }

    #[test]
    fn inverse_radial() {
        let f = HoloPoly::monomial(&[2, 1], c(8.0));
        let g = f.radial_derivative_inverse(2.0).unwrap();
        assert!((g.coeff(&MultiIndex::new(&[2, 1])) - c(8.0 / 9.0)).norm() < 1e-15);
        let z1 = HoloPoly::monomial(&[1, 0], c(1.0));
        assert_eq!(z1.radial_derivative_inverse(0.0).unwrap(), z1);
        assert!(matches!(sample().radial_derivative_inverse(1.0), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn hadamard_projection() {
        let f = sample();
        let ones = vec![c(1.0); 3];
        assert_eq!(f.hadamard(&ones), f);
        let ind = vec![c(0.0), c(0.0), c(1.0)];
        assert_eq!(f.hadamard(&ind), f.homogeneous_part(2).unwrap());
        // missing entries act as zero
        assert_eq!(f.hadamard(&[c(1.0)]), f.truncate(0));
    }

    #[test]
    fn dilation() {
        let f = HoloPoly::monomial(&[3], c(1.0));
        assert_eq!(f.dilate(1.0).unwrap(), f);
        let g = f.dilate(0.5).unwrap();
        assert!((g.coeff(&MultiIndex::new(&[3])) - c(0.125)).norm() < 1e-16);
        assert!(matches!(f.dilate(0.0), Err(Error::Range(_))));
        assert!(matches!(f.dilate(1.5), Err(Error::Range(_))));
    }

    #[test]
    fn partials_and_gradient() {
        let f = HoloPoly::monomial(&[2, 1], c(1.0));
        let d = f.partial(0);
        assert_eq!(d.coeff(&MultiIndex::new(&[1, 1])), c(2.0));
        let z1 = HoloPoly::monomial(&[1, 0], c(1.0));
        let z = [C64::new(0.3, 0.1), C64::new(-0.2, 0.4)];
        assert!((z1.gradient_norm(1, &z) - 1.0).abs() < 1e-15);
        let z1z2 = HoloPoly::monomial(&[1, 1], c(1.0));
        assert!((z1z2.gradient_norm(2, &z) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn no_stored_zeros() {
        let f = sample();
        let z = &f - &f;
        assert!(z.is_zero());
        assert_eq!(z.max_degree(), 2);
    }
}

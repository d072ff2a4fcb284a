//! Closed-form `L²` means: `M_2(r, g)² = Σ_e a_e r^e`.

use crate::holopoly::{HoloPoly, MixedPoly};
use crate::C64;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct L2Profile {
    /// `a_e`, the coefficient of `r^e`.
    pub coeffs: Vec<f64>,
}

impl L2Profile {
    pub fn holo(f: &HoloPoly) -> Self {
        Self::from_energies(&f.part_energies(), None)
    }

    /// Profile of `Σ λ_k f_k`.
    pub fn holo_with(f: &HoloPoly, lambda: &[C64]) -> Self {
        Self::from_energies(&f.part_energies(), Some(lambda))
    }

    /// Profile of `(Σ_i w_i |g_i|²)^{1/2}`.
    pub fn holo_channels(chs: &[(f64, HoloPoly)]) -> Self {
        let mut out = L2Profile::default();
        for (w, g) in chs {
            out.add_scaled(&Self::holo(g), *w);
        }
        out
    }

    pub fn mixed(g: &MixedPoly) -> Self {
        L2Profile { coeffs: g.l2_radial_profile() }
    }

    pub fn from_energies(e: &[f64], lambda: Option<&[C64]>) -> Self {
        let mut coeffs = vec![0.0; 2 * e.len().max(1) - 1];
        for (k, ek) in e.iter().enumerate() {
            let l2 = lambda.map(|l| l.get(k).copied().unwrap_or_default().norm_sqr()).unwrap_or(1.0);
            coeffs[2 * k] = ek * l2;
        }
        L2Profile { coeffs }
    }

    pub fn add_scaled(&mut self, other: &L2Profile, w: f64) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0.0);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += w * b;
        }
    }

    /// `M_2(r, ·)`.
    pub fn mean(&self, r: f64) -> f64 {
        // Horner from the top
        let v = self.coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a);
        v.max(0.0).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| *a == 0.0)
    }
}

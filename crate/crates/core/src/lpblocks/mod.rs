//! Littlewood–Paley blocks `W_ν`, dyadic norms and best polynomial approximation.

mod approx;
mod sequence;

pub use approx::{best_approx_general, best_approx_l2, partial_block_sum, BestApprox};
pub use sequence::{lq_norm, sequence_tail_bound};

use crate::holopoly::HoloPoly;
use crate::quad::{MeanEvaluator, SphereRule};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Smooth plateau: `1` on `t ≤ 1`, `0` on `t ≥ 2`, `h(2−t)/(h(2−t)+h(t−1))` between,
/// with `h(x) = e^{−1/x}`.
pub fn cutoff(t: f64) -> f64 {
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let a = (-1.0 / (2.0 - t)).exp();
        let b = (-1.0 / (t - 1.0)).exp();
        a / (a + b)
    }
}

/// `ψ(t) = ω(t/2) − ω(t)`, supported in `(1, 4)`.
pub fn psi(t: f64) -> f64 {
    cutoff(t / 2.0) - cutoff(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BlockKind {
    /// `ŵ_0 = 1_{k∈{0,1}}`, `ŵ_ν(k) = ψ(k/2^{ν−1})`.
    Smooth,
    /// `V_0 = 1`, `V_ν = Σ_{2^{ν−1} ≤ k < 2^ν} z^k`.
    Sharp,
}

/// Block multiplier sequences for degrees `0..=max_degree`.
#[derive(Clone, Debug)]
pub struct BlockBasis {
    pub kind: BlockKind,
    pub max_degree: usize,
    /// `blocks[ν][k]`
    pub blocks: Vec<Vec<f64>>,
}

fn ceil_log2(d: usize) -> usize {
    let mut v = 0;
    while (1usize << v) < d {
        v += 1;
    }
    v
}

impl BlockBasis {
    /// Smooth blocks `ν = 0..=⌈log₂ D⌉`; later blocks vanish on degrees `≤ D`.
    pub fn new(max_degree: usize) -> Self {
        let d = max_degree.max(1);
        let top = ceil_log2(d);
        let mut blocks = Vec::with_capacity(top + 1);
        blocks.push((0..=max_degree).map(|k| if k <= 1 { 1.0 } else { 0.0 }).collect());
        for nu in 1..=top {
            let scale = 2f64.powi(nu as i32 - 1);
            blocks.push((0..=max_degree).map(|k| psi(k as f64 / scale)).collect());
        }
        BlockBasis { kind: BlockKind::Smooth, max_degree, blocks }
    }

    pub fn sharp(max_degree: usize) -> Self {
        let mut blocks = vec![(0..=max_degree).map(|k| if k == 0 { 1.0 } else { 0.0 }).collect::<Vec<_>>()];
        let mut nu = 1;
        while (1usize << (nu - 1)) <= max_degree {
            let lo = 1usize << (nu - 1);
            let hi = 1usize << nu;
            blocks.push((0..=max_degree).map(|k| if k >= lo && k < hi { 1.0 } else { 0.0 }).collect());
            nu += 1;
        }
        BlockBasis { kind: BlockKind::Sharp, max_degree, blocks }
    }

    pub fn of_kind(kind: BlockKind, max_degree: usize) -> Self {
        match kind {
            BlockKind::Smooth => Self::new(max_degree),
            BlockKind::Sharp => Self::sharp(max_degree),
        }
    }

    /// Largest block index.
    pub fn max_block(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `ŵ_ν(k)`, zero outside the stored range.
    pub fn weight(&self, nu: usize, k: usize) -> f64 {
        self.blocks.get(nu).and_then(|b| b.get(k)).copied().unwrap_or(0.0)
    }

    pub fn complex_block(&self, nu: usize) -> Vec<C64> {
        self.blocks[nu].iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    /// `W_ν * f`.
    pub fn project(&self, f: &HoloPoly, nu: usize) -> HoloPoly {
        match self.blocks.get(nu) {
            Some(b) => f.hadamard_real(b),
            None => HoloPoly::zero(f.dim(), f.max_degree()),
        }
    }

    /// `(W_{ν−1} + W_ν + W_{ν+1}) * f`.
    pub fn project_neighborhood(&self, f: &HoloPoly, nu: usize) -> HoloPoly {
        let seq: Vec<f64> = (0..=self.max_degree)
            .map(|k| {
                let below = if nu >= 1 { self.weight(nu - 1, k) } else { 0.0 };
                below + self.weight(nu, k) + self.weight(nu + 1, k)
            })
            .collect();
        f.hadamard_real(&seq)
    }

    /// `‖W_ν * f‖_p` for every block. `p = 2` uses the coefficient moments,
    /// other exponents the sphere rule.
    pub fn block_norms(&self, f: &HoloPoly, p: f64, rule: &SphereRule) -> Vec<f64> {
        if p == 2.0 {
            let e = f.part_energies();
            return self
                .blocks
                .iter()
                .map(|b| e.iter().zip(b).map(|(ek, w)| ek * w * w).sum::<f64>().sqrt())
                .collect();
        }
        let ev = MeanEvaluator::holo(f, rule);
        (0..self.blocks.len())
            .map(|nu| ev.mean_with(1.0, p, Some(&self.complex_block(nu))))
            .collect()
    }
}

/// `(p, q, β)` for `‖{2^{−νβ}‖W_ν*f‖_p}‖_{ℓ^q}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyadicNormSpec {
    pub p: f64,
    pub q: f64,
    pub beta: f64,
}

/// Weighted block sequence `2^{−νβ}‖W_ν*f‖_p`.
pub fn dyadic_sequence(f: &HoloPoly, spec: &DyadicNormSpec, basis: &BlockBasis, rule: &SphereRule) -> Vec<f64> {
    basis
        .block_norms(f, spec.p, rule)
        .into_iter()
        .enumerate()
        .map(|(nu, v)| 2f64.powf(-(nu as f64) * spec.beta) * v)
        .collect()
}

pub fn dyadic_norm(f: &HoloPoly, spec: &DyadicNormSpec, basis: &BlockBasis, rule: &SphereRule) -> f64 {
    lq_norm(&dyadic_sequence(f, spec, basis, rule), spec.q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_endpoints() {
        assert_eq!(psi(2.0), 1.0);
        assert_eq!(cutoff(1.0), 1.0);
        assert_eq!(cutoff(2.0), 0.0);
        assert!(cutoff(1.5) > 0.0 && cutoff(1.5) < 1.0);
        assert!((cutoff(1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partition_of_unity_is_exact() {
        for d in [1usize, 2, 5, 16, 33, 100, 257] {
            let b = BlockBasis::new(d);
            assert_eq!(b.len(), ceil_log2(d) + 1);
            for k in 0..=d {
                let s: f64 = (0..b.len()).map(|nu| b.weight(nu, k)).sum();
                assert_eq!(s, 1.0, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn support_of_blocks() {
        let b = BlockBasis::new(200);
        for nu in 1..b.len() {
            let lo = 1usize << (nu - 1);
            for k in 0..=200 {
                if b.weight(nu, k) != 0.0 {
                    assert!(k >= lo && k < 2 * lo * 2, "nu={nu} k={k}");
                }
            }
        }
        assert_eq!(b.weight(2, 4), 1.0);
        assert_eq!(b.weight(3, 4), 0.0);
        for nu in [0, 1, 4, 5] {
            assert_eq!(b.weight(nu, 4), 0.0);
        }
    }

    #[test]
    fn sharp_blocks_partition() {
        let b = BlockBasis::sharp(40);
        for k in 0..=40 {
            let s: f64 = (0..b.len()).map(|nu| b.weight(nu, k)).sum();
            assert_eq!(s, 1.0);
        }
    }
}

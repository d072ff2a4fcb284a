//! Product cubature on the unit sphere `S_N ⊂ C^N`.
//!
//! A point of the sphere is written `w·ξ` with `w` on the unit circle and
//! `ξ = (√x_1 e^{iψ_1}, …, √x_{N−1} e^{iψ_{N−1}}, √x_N)`. The moduli
//! `(x_1, …, x_N)` are uniform on the simplex, the phases `ψ_j` and `w` are
//! uniform on the circle. Each `ξ` is a *slice*; the full node set is every
//! slice rotated by the `m`-th roots of unity.

use super::gauss::gauss_jacobi_unit;
use crate::error::{Error, Result};
use crate::C64;
use serde::Serialize;
use std::f64::consts::PI;

/// Largest supported dimension.
pub const MAX_SPHERE_DIM: usize = 4;

#[derive(Clone, Debug)]
pub struct Slice {
    pub point: Vec<C64>,
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct SphereRule {
    dim: usize,
    exact_degree: usize,
    circle: usize,
    slices: Vec<Slice>,
    roots: Vec<C64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RuleDoc {
    dim: usize,
    exact_degree: usize,
    nodes: Vec<Vec<[f64; 2]>>,
    weights: Vec<f64>,
}

impl SphereRule {
    /// Rule integrating every `ζ^α ζ̄^β` with `|α|+|β| ≤ d` exactly.
    pub fn new(dim: usize, d: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Range("sphere dimension must be positive".into()));
        }
        if dim > MAX_SPHERE_DIM {
            return Err(Error::Capability(format!(
                "sphere rules are limited to N ≤ {MAX_SPHERE_DIM}, got N = {dim}"
            )));
        }
        if dim == 1 {
            let circle = 2 * (d + 1);
            return Ok(SphereRule {
                dim,
                exact_degree: d,
                circle,
                slices: vec![Slice { point: vec![C64::new(1.0, 0.0)], weight: 1.0 }],
                roots: roots(circle),
            });
        }
        let circle = d + 1;
        let n_phase = d + 1;
        // |ζ^α|² = x^α has degree ≤ d/2 in the simplex variables
        let n_x = d / 4 + 1;
        // conical product: x_1 = u_1, x_2 = (1−u_1)u_2, … with weights (1−u_i)^{N−1−i}
        let axes: Vec<(Vec<f64>, Vec<f64>)> = (1..dim)
            .map(|i| {
                let (u, w) = gauss_jacobi_unit(n_x, 0.0, (dim - 1 - i) as f64);
                let total = compensated_sum(w.iter().copied());
                (u, w.into_iter().map(|wi| wi / total).collect())
            })
            .collect();
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
        for (u, w) in &axes {
            let mut next = Vec::with_capacity(simplex.len() * u.len());
            for (xs, wt) in &simplex {
                let used: f64 = xs.iter().sum();
                let rest = (1.0 - used).max(0.0);
                for (ui, wi) in u.iter().zip(w) {
                    let mut v = xs.clone();
                    v.push(rest * ui);
                    next.push((v, wt * wi));
                }
            }
            simplex = next;
        }
        let phase_roots = roots(n_phase);
        let mut phases: Vec<(Vec<C64>, f64)> = vec![(Vec::new(), 1.0)];
        for _ in 1..dim {
            let mut next = Vec::with_capacity(phases.len() * n_phase);
            for (ps, wt) in &phases {
                for r in &phase_roots {
                    let mut v = ps.clone();
                    v.push(*r);
                    next.push((v, wt / n_phase as f64));
                }
            }
            phases = next;
        }
        let mut slices = Vec::with_capacity(simplex.len() * phases.len());
        for (xs, wx) in &simplex {
            let last = (1.0 - xs.iter().sum::<f64>()).max(0.0);
            for (ps, wp) in &phases {
                let mut point: Vec<C64> = xs.iter().zip(ps).map(|(x, p)| p * x.sqrt()).collect();
                point.push(C64::new(last.sqrt(), 0.0));
                slices.push(Slice { point, weight: wx * wp });
            }
        }
        let total = compensated_sum(slices.iter().map(|s| s.weight));
        for s in slices.iter_mut() {
            s.weight /= total;
        }
        Ok(SphereRule { dim, exact_degree: d, circle, slices, roots: roots(circle) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exact_degree(&self) -> usize {
        self.exact_degree
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    /// Points per slice circle.
    pub fn circle(&self) -> usize {
        self.circle
    }

    /// `e^{2πi j/m}` for `j < m`.
    pub fn roots(&self) -> &[C64] {
        &self.roots
    }

    pub fn node_count(&self) -> usize {
        self.slices.len() * self.circle
    }

    /// Expanded node list and weights (each slice times each root of unity).
    pub fn nodes_and_weights(&self) -> (Vec<Vec<C64>>, Vec<f64>) {
        let mut nodes = Vec::with_capacity(self.node_count());
        let mut weights = Vec::with_capacity(self.node_count());
        for s in &self.slices {
            for w in &self.roots {
                nodes.push(s.point.iter().map(|c| c * w).collect());
                weights.push(s.weight / self.circle as f64);
            }
        }
        (nodes, weights)
    }

    /// `∫_S g dσ` by direct summation over nodes.
    pub fn integrate<F: Fn(&[C64]) -> C64>(&self, g: F) -> C64 {
        let mut acc = C64::default();
        let mut buf = vec![C64::default(); self.dim];
        for s in &self.slices {
            let mut part = C64::default();
            for w in &self.roots {
                for (b, c) in buf.iter_mut().zip(&s.point) {
                    *b = c * w;
                }
                part += g(&buf);
            }
            acc += part * (s.weight / self.circle as f64);
        }
        acc
    }

    pub fn to_json(&self) -> String {
        let (nodes, weights) = self.nodes_and_weights();
        let doc = RuleDoc {
            dim: self.dim,
            exact_degree: self.exact_degree,
            nodes: nodes.iter().map(|n| n.iter().map(|c| [c.re, c.im]).collect()).collect(),
            weights,
        };
        serde_json::to_string(&doc).expect("rule serialization cannot fail")
    }
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn roots(m: usize) -> Vec<C64> {
    (0..m).map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)).collect()
}

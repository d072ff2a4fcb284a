//! Integral means `M_p(r, ·)` evaluated slice by slice.
//!
//! For a slice point `ξ`, a term `c z^α z̄^β` contributes
//! `c ξ^α ξ̄^β · r^{|α|+|β|} · ω^{j(|α|−|β|)}` at the node `r ω^j ξ`. Terms
//! are therefore collapsed once per slice into groups keyed by
//! `(charge, radial) = (|α|−|β|, |α|+|β|)`; every later evaluation at any
//! radius costs `groups × circle` per slice regardless of the term count.

use super::sphere::SphereRule;
use crate::holopoly::{HoloPoly, MixedPoly};
use crate::par;
use crate::C64;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct SliceTable {
    groups: Vec<(i64, usize)>,
    /// `values[s * groups.len() + g]`
    values: Vec<C64>,
}

impl SliceTable {
    pub fn holo(f: &HoloPoly, rule: &SphereRule) -> Self {
        let mut degrees: Vec<usize> = f.terms().map(|(a, _)| a.degree()).collect();
        degrees.dedup();
        let groups: Vec<(i64, usize)> = degrees.iter().map(|&k| (k as i64, k)).collect();
        let index: BTreeMap<usize, usize> = degrees.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let terms: Vec<(usize, &crate::MultiIndex, C64)> =
            f.terms().map(|(a, c)| (index[&a.degree()], a, *c)).collect();
        let g = groups.len();
        let per_slice = par::map(rule.slices(), |s| {
            let mut row = vec![C64::default(); g];
            for (gi, a, c) in &terms {
                row[*gi] += c * a.eval(&s.point);
            }
            row
        });
        SliceTable { groups, values: per_slice.concat() }
    }

    pub fn mixed(f: &MixedPoly, rule: &SphereRule) -> Self {
        let mut keys: Vec<(i64, usize)> = f
            .terms()
            .map(|((a, b), _)| (a.degree() as i64 - b.degree() as i64, a.degree() + b.degree()))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        let index: BTreeMap<(i64, usize), usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let terms: Vec<(usize, &crate::MultiIndex, &crate::MultiIndex, C64)> = f
            .terms()
            .map(|((a, b), c)| {
                (index[&(a.degree() as i64 - b.degree() as i64, a.degree() + b.degree())], a, b, *c)
            })
            .collect();
        let g = keys.len();
        let per_slice = par::map(rule.slices(), |s| {
            let conj: Vec<C64> = s.point.iter().map(|c| c.conj()).collect();
            let mut row = vec![C64::default(); g];
            for (gi, a, b, c) in &terms {
                row[*gi] += c * a.eval(&s.point) * b.eval(&conj);
            }
            row
        });
        SliceTable { groups: keys, values: per_slice.concat() }
    }

    fn fill_slice(&self, rule: &SphereRule, s: usize, rpow: &[C64], out: &mut [C64]) {
        let g = self.groups.len();
        let m = rule.circle() as i64;
        let roots = rule.roots();
        let row = &self.values[s * g..(s + 1) * g];
        for o in out.iter_mut() {
            *o = C64::default();
        }
        for (gi, (charge, _)) in self.groups.iter().enumerate() {
            let v = row[gi] * rpow[gi];
            if v == C64::default() {
                continue;
            }
            let step = charge.rem_euclid(m);
            let mut idx = 0i64;
            for o in out.iter_mut() {
                *o += v * roots[idx as usize];
                idx += step;
                if idx >= m {
                    idx -= m;
                }
            }
        }
    }

    /// Per-group factor `r^{radial}` times an optional multiplier indexed by radial degree.
    fn radial_factors(&self, r: f64, lambda: Option<&[C64]>) -> Vec<C64> {
        self.groups
            .iter()
            .map(|&(_, rad)| {
                let base = C64::new(r.powi(rad as i32), 0.0);
                match lambda {
                    Some(l) => base * l.get(rad).copied().unwrap_or_default(),
                    None => base,
                }
            })
            .collect()
    }
}

/// How several channels combine into one nonnegative function on the sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Combine {
    /// `(Σ w_i |g_i|²)^{1/2}`
    L2,
    /// `Σ w_i |g_i|`
    L1,
}

/// `M_p(r, Φ)` for `Φ` built from one or more polynomial channels.
pub struct MeanEvaluator<'a> {
    rule: &'a SphereRule,
    channels: Vec<(f64, SliceTable)>,
    combine: Combine,
}

impl<'a> MeanEvaluator<'a> {
    pub fn holo(f: &HoloPoly, rule: &'a SphereRule) -> Self {
        MeanEvaluator { rule, channels: vec![(1.0, SliceTable::holo(f, rule))], combine: Combine::L2 }
    }

    pub fn mixed(f: &MixedPoly, rule: &'a SphereRule) -> Self {
        MeanEvaluator { rule, channels: vec![(1.0, SliceTable::mixed(f, rule))], combine: Combine::L2 }
    }

    pub fn holo_channels(chs: &[(f64, HoloPoly)], combine: Combine, rule: &'a SphereRule) -> Self {
        let channels = chs.iter().map(|(w, f)| (*w, SliceTable::holo(f, rule))).collect();
        MeanEvaluator { rule, channels, combine }
    }

    pub fn mixed_channels(chs: &[(f64, MixedPoly)], combine: Combine, rule: &'a SphereRule) -> Self {
        let channels = chs.iter().map(|(w, f)| (*w, SliceTable::mixed(f, rule))).collect();
        MeanEvaluator { rule, channels, combine }
    }

    pub fn mean(&self, r: f64, p: f64) -> f64 {
        self.mean_with(r, p, None)
    }

    /// Mean of the function whose degree-`k` parts are scaled by `lambda[k]`
    /// (meaningful for holomorphic channels).
    pub fn mean_with(&self, r: f64, p: f64, lambda: Option<&[C64]>) -> f64 {
        let factors: Vec<Vec<C64>> = self.channels.iter().map(|(_, t)| t.radial_factors(r, lambda)).collect();
        let m = self.rule.circle();
        let n_slices = self.rule.slices().len();
        // per-slice partial results, reduced in slice order
        let parts = par::map_range(n_slices, |s| {
            let mut acc = vec![0.0; m];
            let mut buf = vec![C64::default(); m];
            for ((w, table), f) in self.channels.iter().zip(&factors) {
                table.fill_slice(self.rule, s, f, &mut buf);
                for (a, v) in acc.iter_mut().zip(&buf) {
                    *a += match self.combine {
                        Combine::L2 => w * v.norm_sqr(),
                        Combine::L1 => w * v.norm(),
                    };
                }
            }
            if self.combine == Combine::L2 {
                for a in acc.iter_mut() {
                    *a = a.sqrt();
                }
            }
            let weight = self.rule.slices()[s].weight / m as f64;
            if p.is_infinite() {
                acc.into_iter().fold(0.0, f64::max)
            } else {
                acc.into_iter().map(|v| v.powf(p)).sum::<f64>() * weight
            }
        });
        if p.is_infinite() {
            parts.into_iter().fold(0.0, f64::max)
        } else {
            parts.into_iter().sum::<f64>().powf(1.0 / p)
        }
    }
}

/// `M_p(r, f)` by quadrature.
pub fn sphere_mean(f: &HoloPoly, r: f64, p: f64, rule: &SphereRule) -> f64 {
    MeanEvaluator::holo(f, rule).mean(r, p)
}

/// `M_p(r, g)` for a polynomial in `z` and `z̄`.
pub fn sphere_mean_mixed(g: &MixedPoly, r: f64, p: f64, rule: &SphereRule) -> f64 {
    MeanEvaluator::mixed(g, rule).mean(r, p)
}

/// Hardy norm `‖f‖_p = M_p(1, f)` (the supremum over `r` is attained at the boundary for polynomials).
pub fn hardy_norm(f: &HoloPoly, p: f64, rule: &SphereRule) -> f64 {
    sphere_mean(f, 1.0, p, rule)
}

/// Sphere rule adequate for functions of degree `≤ max_degree`: exact for `|f|²`.
pub fn rule_for_degree(dim: usize, max_degree: usize) -> crate::Result<SphereRule> {
    SphereRule::new(dim, 2 * max_degree.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::MultiIndex;

    #[test]
    fn constants_and_monomials() {
        let rule = SphereRule::new(2, 8).unwrap();
        let c = HoloPoly::constant(2, C64::new(3.0, 4.0));
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert!((sphere_mean(&c, 0.4, p, &rule) - 5.0).abs() < 1e-13);
        }
        let rule1 = SphereRule::new(1, 10).unwrap();
        let zk = HoloPoly::monomial(&[5], C64::new(1.0, 0.0));
        for p in [1.0, 2.0, f64::INFINITY] {
            assert!((sphere_mean(&zk, 0.7, p, &rule1) - 0.7f64.powi(5)).abs() < 1e-14);
        }
        let z1 = HoloPoly::monomial(&[1, 0], C64::new(1.0, 0.0));
        assert!((sphere_mean(&z1, 0.6, 2.0, &rule) - 0.6 / 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn mixed_mean_matches_moment() {
        let rule = SphereRule::new(2, 8).unwrap();
        let g = MixedPoly::from_terms(2, vec![((MultiIndex::new(&[1, 0]), MultiIndex::new(&[1, 0])), C64::new(1.0, 0.0))]);
        let v = sphere_mean_mixed(&g, 1.0, 2.0, &rule);
        assert!((v * v - 1.0 / 3.0).abs() < 1e-14);
    }
}

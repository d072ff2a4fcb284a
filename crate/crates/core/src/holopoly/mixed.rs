use super::HoloPoly;
use crate::multi_index::{sphere_moment, MultiIndex};
use crate::C64;
use std::collections::BTreeMap;
use std::ops::{Add, Sub};

/// Polynomial in `z` and `z̄`: terms `c · z^α z̄^β`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedPoly {
    dim: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), C64>,
}

impl MixedPoly {
    pub fn zero(dim: usize) -> Self {
        MixedPoly { dim, terms: BTreeMap::new() }
    }

    pub fn from_holo(f: &HoloPoly) -> Self {
        let zero = MultiIndex::zero(f.dim());
        MixedPoly {
            dim: f.dim(),
            terms: f.terms().map(|(a, c)| ((a.clone(), zero.clone()), *c)).collect(),
        }
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = ((MultiIndex, MultiIndex), C64)>,
    {
        let mut m = MixedPoly::zero(dim);
        for (k, c) in terms {
            assert!(k.0.dim() == dim && k.1.dim() == dim, "multi-index length mismatch");
            m.add_term(k, c);
        }
        m
    }

    fn add_term(&mut self, key: (MultiIndex, MultiIndex), c: C64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                if c != C64::default() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == C64::default() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex, beta: &MultiIndex) -> C64 {
        self.terms.get(&(alpha.clone(), beta.clone())).copied().unwrap_or_default()
    }

    /// True when no term carries a conjugate variable.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|(_, b)| b.degree() == 0)
    }

    /// The holomorphic polynomial this represents, if it has no `z̄` terms.
    pub fn to_holo(&self, max_degree: usize) -> Option<HoloPoly> {
        if !self.is_holomorphic() {
            return None;
        }
        HoloPoly::from_terms(self.dim, max_degree, self.terms.iter().map(|((a, _), c)| (a.clone(), *c))).ok()
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        let zb: Vec<C64> = z.iter().map(|v| v.conj()).collect();
        self.terms.iter().map(|((a, b), c)| c * a.eval(z) * b.eval(&zb)).sum()
    }

    /// `∂/∂z_j` (`conjugate = false`) or `∂/∂z̄_j` (`conjugate = true`), 0-based `j`.
    pub fn partial(&self, j: usize, conjugate: bool) -> MixedPoly {
        let mut out = MixedPoly::zero(self.dim);
        for ((a, b), c) in &self.terms {
            if conjugate {
                if let Some(nb) = b.lowered(j) {
                    out.add_term((a.clone(), nb), c * b.get(j) as f64);
                }
            } else if let Some(na) = a.lowered(j) {
                out.add_term((na, b.clone()), c * a.get(j) as f64);
            }
        }
        out
    }

    /// Multiply by `z_j` or `z̄_j`.
    pub fn times_coordinate(&self, j: usize, conjugate: bool) -> MixedPoly {
        let mut out = MixedPoly::zero(self.dim);
        for ((a, b), c) in &self.terms {
            let key = if conjugate { (a.clone(), b.raised(j)) } else { (a.raised(j), b.clone()) };
            out.add_term(key, *c);
        }
        out
    }

    /// `R = Σ z_j ∂/∂z_j`: multiplies `z^α z̄^β` by `|α|`.
    pub fn radial(&self) -> MixedPoly {
        let mut out = MixedPoly::zero(self.dim);
        for ((a, b), c) in &self.terms {
            out.add_term((a.clone(), b.clone()), c * a.degree() as f64);
        }
        out
    }

    pub fn scale(&self, s: C64) -> MixedPoly {
        let mut out = MixedPoly::zero(self.dim);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * s);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficients of `M_2(r, g)² = Σ_e a_e r^e`, exact from sphere moments.
    ///
    /// Two monomials `z^α z̄^β`, `z^α' z̄^β'` are orthogonal on the sphere
    /// unless `α + β' = β + α'`, in which case the inner product is the
    /// moment of `α + β'`.
    pub fn l2_radial_profile(&self) -> Vec<f64> {
        let mut by_charge: BTreeMap<i64, Vec<(&MultiIndex, &MultiIndex, C64)>> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            by_charge.entry(a.degree() as i64 - b.degree() as i64).or_default().push((a, b, *c));
        }
        let top = self.terms.keys().map(|(a, b)| a.degree() + b.degree()).max().unwrap_or(0);
        let mut prof = vec![0.0; 2 * top + 1];
        for group in by_charge.values() {
            for (a1, b1, c1) in group {
                for (a2, b2, c2) in group {
                    let s1 = a1.add(b2);
                    if s1 != b1.add(a2) {
                        continue;
                    }
                    let v = (c1 * c2.conj()).re * sphere_moment(&s1);
                    prof[a1.degree() + b1.degree() + a2.degree() + b2.degree()] += v;
                }
            }
        }
        prof
    }

    fn combine(&self, other: &MixedPoly, sign: f64) -> MixedPoly {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c * sign);
        }
        out
    }
}

impl Add for &MixedPoly {
    type Output = MixedPoly;
    fn add(self, rhs: &MixedPoly) -> MixedPoly {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &MixedPoly {
    type Output = MixedPoly;
    fn sub(self, rhs: &MixedPoly) -> MixedPoly {
        self.combine(rhs, -1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn holomorphic_embedding_round_trip() {
        let f = HoloPoly::monomial(&[2, 1], C64::new(0.5, 2.0));
        let m = f.to_mixed();
        assert!(m.is_holomorphic());
        assert_eq!(m.to_holo(3).unwrap(), f);
    }

    #[test]
    fn conjugate_derivatives() {
        let z1sq = HoloPoly::monomial(&[2, 0], one()).to_mixed();
        assert!(z1sq.partial(0, true).is_zero());
        // ∂_{z̄_2}(z̄_2 ∂_1 f) = ∂_1 f
        let f = HoloPoly::from_terms(
            2,
            3,
            vec![(MultiIndex::new(&[2, 1]), one()), (MultiIndex::new(&[1, 0]), C64::new(0.0, 3.0))],
        )
        .unwrap();
        let d1 = f.to_mixed().partial(0, false);
        let lhs = d1.times_coordinate(1, true).partial(1, true);
        assert_eq!(lhs, d1);
    }

    #[test]
    fn exact_l2_profile_matches_moment() {
        // |z_1|² z̄... g = z_1 z̄_1 has ∫|ζ_1|⁴ = 2!/3! = 1/3 on S_2
        let g = MixedPoly::from_terms(2, vec![((MultiIndex::new(&[1, 0]), MultiIndex::new(&[1, 0])), one())]);
        let p = g.l2_radial_profile();
        assert!((p[4] - 1.0 / 3.0).abs() < 1e-15);
        // 1 + z_1 z̄_1: cross term ∫|ζ_1|² = 1/2 at r², twice
        let h = &g + &MixedPoly::from_holo(&HoloPoly::constant(2, one()));
        let p = h.l2_radial_profile();
        assert!((p[0] - 1.0).abs() < 1e-15);
        assert!((p[2] - 1.0).abs() < 1e-15);
        assert!((p[4] - 1.0 / 3.0).abs() < 1e-15);
    }
}

//! Multi-indices over `N` coordinates and the monomial bookkeeping built on them.

use smallvec::SmallVec;
use std::cmp::Ordering;

/// Exponent vector `α = (α_1, …, α_N)` of a monomial `z^α`.
///
/// Ordering is graded: lower total degree first, and within one degree the
/// index with the larger leading exponents comes first, so `(2,0) < (1,1) < (0,2)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(exponents: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(exponents))
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, dim))
    }

    /// The unit index `e_j` (0-based).
    pub fn unit(dim: usize, j: usize) -> Self {
        let mut m = Self::zero(dim);
        m.0[j] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = SmallVec::with_capacity(self.dim());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    pub fn raised(&self, j: usize) -> MultiIndex {
        let mut m = self.clone();
        m.0[j] += 1;
        m
    }

    pub fn lowered(&self, j: usize) -> Option<MultiIndex> {
        if self.0[j] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.0[j] -= 1;
        Some(m)
    }

    /// `α! = Π α_j!`.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a as usize)).product()
    }

    /// `z^α` at a point.
    pub fn eval(&self, z: &[num_complex::Complex64]) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(1.0, 0.0);
        for (a, zj) in self.0.iter().zip(z) {
            if *a > 0 {
                acc *= zj.powu(*a);
            }
        }
        acc
    }

    /// Position of `self` among the indices of the same degree, in [`Ord`] order.
    pub fn rank(&self) -> usize {
        let n = self.dim();
        let mut rem = self.degree();
        let mut rank = 0;
        for j in 0..n.saturating_sub(1) {
            let a = self.0[j] as usize;
            // indices sharing the prefix but with a larger exponent in slot j
            if rem > a {
                rank += binomial(rem - a - 1 + n - j - 1, n - j - 1);
            }
            rem -= a;
        }
        rank
    }

    /// All indices of total degree `k` in `dim` coordinates, in [`Ord`] order.
    pub fn all_of_degree(dim: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(count_of_degree(dim, k));
        let mut cur = SmallVec::<[u32; 4]>::from_elem(0, dim);
        fill(&mut out, &mut cur, 0, k);
        out
    }

    /// All indices with total degree at most `max_degree`.
    pub fn all_up_to(dim: usize, max_degree: usize) -> Vec<MultiIndex> {
        (0..=max_degree).flat_map(|k| Self::all_of_degree(dim, k)).collect()
    }
}

fn fill(out: &mut Vec<MultiIndex>, cur: &mut SmallVec<[u32; 4]>, slot: usize, rem: usize) {
    let n = cur.len();
    if slot + 1 == n {
        cur[slot] = rem as u32;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for a in (0..=rem).rev() {
        cur[slot] = a as u32;
        fill(out, cur, slot + 1, rem - a);
    }
    cur[slot] = 0;
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Number of monomials of degree `k` in `dim` variables.
pub fn count_of_degree(dim: usize, k: usize) -> usize {
    if dim == 0 {
        return usize::from(k == 0);
    }
    binomial(k + dim - 1, dim - 1)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Second moment `∫_S |ζ^α|² dσ = (N−1)! α! / (N−1+|α|)!` on the unit sphere of `C^N`.
pub fn sphere_moment(alpha: &MultiIndex) -> f64 {
    let n = alpha.dim();
    // evaluate as a running product to stay in range for large degrees
    let mut num: Vec<usize> = Vec::new();
    for &a in alpha.as_slice() {
        num.extend(1..=a as usize);
    }
    let den_lo = n; // (N−1)! cancels the first N−1 factors of (N−1+|α|)!
    let den_hi = n - 1 + alpha.degree();
    let mut acc = 1.0;
    let mut di = den_lo;
    for k in num {
        acc *= k as f64;
        if di <= den_hi {
            acc /= di as f64;
            di += 1;
        }
    }
    while di <= den_hi {
        acc /= di as f64;
        di += 1;
    }
    acc
}

/// Dense lookup tables for the monomials of each degree up to a bound.
#[derive(Clone, Debug)]
pub struct MonomialTable {
    pub dim: usize,
    pub max_degree: usize,
    /// `indices[k][rank]`.
    pub indices: Vec<Vec<MultiIndex>>,
    /// `raise[k][rank][j]` = rank of `indices[k][rank] + e_j` in degree `k+1`.
    pub raise: Vec<Vec<SmallVec<[usize; 4]>>>,
}

impl MonomialTable {
    pub fn new(dim: usize, max_degree: usize) -> Self {
        let indices: Vec<Vec<MultiIndex>> =
            (0..=max_degree).map(|k| MultiIndex::all_of_degree(dim, k)).collect();
        let raise = indices
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|a| (0..dim).map(|j| a.raised(j).rank()).collect())
                    .collect()
            })
            .collect();
        MonomialTable { dim, max_degree, indices, raise }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_matches_rank_and_order() {
        for dim in 1..=4 {
            for k in 0..=7 {
                let all = MultiIndex::all_of_degree(dim, k);
                assert_eq!(all.len(), count_of_degree(dim, k));
                for (i, a) in all.iter().enumerate() {
                    assert_eq!(a.degree(), k);
                    assert_eq!(a.rank(), i, "dim {dim} k {k} {a:?}");
                }
                for w in all.windows(2) {
                    assert!(w[0] < w[1]);
                }
            }
        }
    }

    #[test]
    fn graded_order() {
        let a = MultiIndex::new(&[2, 0]);
        let b = MultiIndex::new(&[1, 1]);
        let c = MultiIndex::new(&[0, 3]);
        assert!(a < b && b < c);
        assert!(MultiIndex::new(&[0, 1]) < a);
    }

    #[test]
    fn moments() {
        assert!((sphere_moment(&MultiIndex::new(&[1, 0])) - 0.5).abs() < 1e-15);
        assert!((sphere_moment(&MultiIndex::new(&[3, 0])) - 0.25).abs() < 1e-15);
        assert!((sphere_moment(&MultiIndex::new(&[1, 1])) - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(sphere_moment(&MultiIndex::new(&[9])), 1.0);
        // (N-1)! α! / (N-1+|α|)! with N=3, α=(2,1,0): 2·2/5! = 1/30
        assert!((sphere_moment(&MultiIndex::new(&[2, 1, 0])) - 1.0 / 30.0).abs() < 1e-15);
        let big = sphere_moment(&MultiIndex::new(&[60, 60]));
        assert!(big > 0.0 && big.is_finite());
    }
}

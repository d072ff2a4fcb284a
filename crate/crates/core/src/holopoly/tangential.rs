use super::{HoloPoly, MixedPoly};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::C64;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// First-order operators of the anisotropic calculus (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiffOp {
    /// `R = Σ z_j ∂/∂z_j`, weight 1.
    R,
    /// `T_{i,j} = z̄_i ∂/∂z_j − z̄_j ∂/∂z_i`, weight 1/2.
    T(usize, usize),
    /// `T̄_{i,j} = z_i ∂/∂z̄_j − z_j ∂/∂z̄_i`, weight 1/2.
    TBar(usize, usize),
}

impl DiffOp {
    pub fn weight(&self) -> f64 {
        match self {
            DiffOp::R => 1.0,
            _ => 0.5,
        }
    }

    pub fn apply(&self, g: &MixedPoly) -> MixedPoly {
        match *self {
            DiffOp::R => g.radial(),
            DiffOp::T(i, j) => {
                let a = g.partial(j, false).times_coordinate(i, true);
                let b = g.partial(i, false).times_coordinate(j, true);
                &a - &b
            }
            DiffOp::TBar(i, j) => {
                let a = g.partial(j, true).times_coordinate(i, false);
                let b = g.partial(i, true).times_coordinate(j, false);
                &a - &b
            }
        }
    }

    /// `T_{i,j} ↔ T̄_{i,j}`; `R` is its own partner.
    pub fn conjugate(&self) -> DiffOp {
        match *self {
            DiffOp::R => DiffOp::R,
            DiffOp::T(i, j) => DiffOp::TBar(i, j),
            DiffOp::TBar(i, j) => DiffOp::T(i, j),
        }
    }
}

/// Applies `ops[0] ops[1] ⋯ ops[k−1]` to `f`: the last operator acts first.
pub fn tangential_apply(f: &MixedPoly, ops: &[DiffOp]) -> MixedPoly {
    ops.iter().rev().fold(f.clone(), |g, op| op.apply(&g))
}

/// Every length-`k` word over ordered pairs `i ≠ j`; with `plus`, both `T` and `T̄` letters.
pub fn all_sequences(dim: usize, k: usize, plus: bool) -> Vec<Vec<DiffOp>> {
    let mut letters = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                letters.push(DiffOp::T(i, j));
                if plus {
                    letters.push(DiffOp::TBar(i, j));
                }
            }
        }
    }
    words(&letters, k)
}

/// Words over `i < j` pairs only, each standing for `2^k` ordered-pair words
/// that differ from it by a sign (`T_{j,i} = −T_{i,j}`).
pub fn canonical_sequences(dim: usize, k: usize, plus: bool) -> Vec<(f64, Vec<DiffOp>)> {
    let mut letters = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            letters.push(DiffOp::T(i, j));
            if plus {
                letters.push(DiffOp::TBar(i, j));
            }
        }
    }
    let mult = 2f64.powi(k as i32);
    words(&letters, k).into_iter().map(|w| (mult, w)).collect()
}

fn words(letters: &[DiffOp], k: usize) -> Vec<Vec<DiffOp>> {
    let mut out: Vec<Vec<DiffOp>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |l| {
                    let mut w2 = w.clone();
                    w2.push(*l);
                    w2
                })
            })
            .collect();
    }
    out
}

/// `Σ_δ |T_δ f(z)|` over `C_k` (or `C_k^+` when `plus`).
pub fn tangential_gradient_value(f: &HoloPoly, k: usize, plus: bool, z: &[C64]) -> f64 {
    let m = f.to_mixed();
    canonical_sequences(f.dim(), k, plus)
        .iter()
        .map(|(mult, w)| mult * tangential_apply(&m, w).eval(z).norm())
        .sum()
}

/// Constants `d_0..d_k` with `Σ_j d_j R^{k−j} f = Σ_{δ∈C_k} T̄_δ T_δ f` for holomorphic `f`.
///
/// Both sides are applied to every monomial of degree `≤ 2k+4` and the
/// overdetermined system is solved in the least-squares sense.
pub fn solve_radial_identity_constants(k: usize, dim: usize) -> Result<Vec<f64>> {
    const TOL: f64 = 1e-10;
    if k == 0 || dim < 2 {
        return Err(Error::Range(format!("need k ≥ 1 and N ≥ 2, got k={k}, N={dim}")));
    }
    let seqs = all_sequences(dim, k, false);
    let test_degree = 2 * k + 4;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    // components that no choice of d_j can reproduce (non-diagonal output terms, imaginary parts)
    let mut stray: f64 = 0.0;
    for alpha in MultiIndex::all_up_to(dim, test_degree) {
        let m = alpha.degree() as f64;
        let f = MixedPoly::from_holo(&HoloPoly::monomial(alpha.as_slice(), C64::new(1.0, 0.0)));
        let mut total = MixedPoly::zero(dim);
        for w in &seqs {
            let bar: Vec<DiffOp> = w.iter().map(|op| op.conjugate()).collect();
            let tf = tangential_apply(&f, w);
            total = &total + &tangential_apply(&tf, &bar);
        }
        let zero = MultiIndex::zero(dim);
        let diag = total.coeff(&alpha, &zero);
        for ((a, b), c) in total.terms() {
            if !(a == &alpha && b == &zero) {
                stray = stray.max(c.norm());
            }
        }
        stray = stray.max(diag.im.abs());
        rows.push((0..=k).map(|j| m.powi((k - j) as i32)).collect());
        rhs.push(diag.re);
    }
    let a = DMatrix::from_fn(rows.len(), k + 1, |i, j| rows[i][j]);
    let b = DVector::from_vec(rhs);
    let svd = a.clone().svd(true, true);
    let d = svd
        .solve(&b, 1e-14)
        .map_err(|_| Error::IdentityFailure { residual: f64::INFINITY, tolerance: TOL })?;
    let resid = (&a * &d - &b).amax().max(stray);
    if resid > TOL {
        return Err(Error::IdentityFailure { residual: resid, tolerance: TOL });
    }
    Ok(d.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn t12_on_simple_monomials() {
        let z2 = HoloPoly::monomial(&[0, 1], one()).to_mixed();
        let out = tangential_apply(&z2, &[DiffOp::T(0, 1)]);
        let want = MixedPoly::from_terms(2, vec![((MultiIndex::zero(2), MultiIndex::new(&[1, 0])), one())]);
        assert_eq!(out, want);

        let z1z2 = HoloPoly::monomial(&[1, 1], one()).to_mixed();
        let out = tangential_apply(&z1z2, &[DiffOp::T(0, 1)]);
        let want = MixedPoly::from_terms(
            2,
            vec![
                ((MultiIndex::new(&[1, 0]), MultiIndex::new(&[1, 0])), one()),
                ((MultiIndex::new(&[0, 1]), MultiIndex::new(&[0, 1])), -one()),
            ],
        );
        assert_eq!(out, want);
    }

    #[test]
    fn gradient_value_examples() {
        let z1 = HoloPoly::monomial(&[1, 0], one());
        let z = [C64::new(0.0, 0.0), C64::new(0.5, 0.0)];
        assert!((tangential_gradient_value(&z1, 1, false, &z) - 1.0).abs() < 1e-15);
        let c = HoloPoly::constant(2, C64::new(3.0, 1.0));
        assert_eq!(tangential_gradient_value(&c, 2, true, &z), 0.0);
    }

    #[test]
    fn identity_constants_first_order() {
        let d = solve_radial_identity_constants(1, 2).unwrap();
        assert!((d[0] + 2.0).abs() < 1e-10 && d[1].abs() < 1e-10);
        let d = solve_radial_identity_constants(1, 3).unwrap();
        assert!((d[0] + 4.0).abs() < 1e-10 && d[1].abs() < 1e-10);
    }
}

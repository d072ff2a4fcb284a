use super::HoloPoly;
use crate::error::{Error, Result};
use crate::multi_index::MonomialTable;
use crate::{CMatrix, C64};

impl HoloPoly {
    /// `(f∘U)(z) = f(Uz)`; each homogeneous part maps to the same degree.
    pub fn compose_linear(&self, u: &CMatrix) -> Result<HoloPoly> {
        let n = self.dim();
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::Shape(format!(
                "matrix is {}x{}, polynomial has {n} variables",
                u.nrows(),
                u.ncols()
            )));
        }
        if is_diagonal(u) {
            return Ok(self.compose_diagonal(&(0..n).map(|i| u[(i, i)]).collect::<Vec<_>>()));
        }
        let top = match self.actual_degree() {
            Some(d) => d,
            None => return Ok(HoloPoly::zero(n, self.max_degree())),
        };
        let table = MonomialTable::new(n, top);
        let mut out_dense: Vec<Vec<C64>> = table.indices.iter().map(|l| vec![C64::default(); l.len()]).collect();

        // images[rank] = dense coefficients of (Uz)^α for all α of the current degree
        let mut images: Vec<Vec<C64>> = vec![vec![C64::new(1.0, 0.0)]];
        for k in 0..=top {
            for (rank, alpha) in table.indices[k].iter().enumerate() {
                let c = self.coeff(alpha);
                if c != C64::default() {
                    for (o, v) in out_dense[k].iter_mut().zip(&images[rank]) {
                        *o += c * v;
                    }
                }
            }
            if k == top {
                break;
            }
            // (Uz)^{α+e_j} = (Uz)^α · (Σ_m U_{jm} z_m); build each image from one parent
            let next = &table.indices[k + 1];
            let mut next_images = vec![Vec::new(); next.len()];
            for (rank, beta) in next.iter().enumerate() {
                let j = (0..n).rev().find(|&j| beta.get(j) > 0).expect("degree ≥ 1");
                let parent = beta.lowered(j).unwrap();
                let pr = parent.rank();
                let mut img = vec![C64::default(); next.len()];
                for (q, v) in images[pr].iter().enumerate() {
                    if *v == C64::default() {
                        continue;
                    }
                    for m in 0..n {
                        let w = u[(j, m)];
                        if w != C64::default() {
                            img[table.raise[k][q][m]] += v * w;
                        }
                    }
                }
                next_images[rank] = img;
            }
            images = next_images;
        }
        let mut out = HoloPoly::zero(n, self.max_degree());
        for (k, layer) in out_dense.into_iter().enumerate() {
            for (rank, c) in layer.into_iter().enumerate() {
                if c != C64::default() {
                    out.coeffs.insert(table.indices[k][rank].clone(), c);
                }
            }
        }
        Ok(out)
    }

    /// Composition with `diag(λ)`: `c_α ↦ c_α λ^α`.
    pub fn compose_diagonal(&self, lambda: &[C64]) -> HoloPoly {
        let mut out = HoloPoly::zero(self.dim(), self.max_degree());
        for (a, c) in self.terms() {
            let v = c * a.eval(lambda);
            if v != C64::default() {
                out.coeffs.insert(a.clone(), v);
            }
        }
        out
    }
}

fn is_diagonal(u: &CMatrix) -> bool {
    for i in 0..u.nrows() {
        for j in 0..u.ncols() {
            if i != j && u[(i, j)] != C64::default() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::MultiIndex;

    #[test]
    fn identity_and_scalar_rotation() {
        let f = HoloPoly::from_terms(
            2,
            3,
            vec![
                (MultiIndex::new(&[1, 2]), C64::new(0.5, -1.0)),
                (MultiIndex::new(&[2, 0]), C64::new(2.0, 0.0)),
            ],
        )
        .unwrap();
        let id = CMatrix::identity(2, 2);
        assert_eq!(f.compose_linear(&id).unwrap(), f);
        let t = 0.7;
        let rot = CMatrix::from_diagonal_element(2, 2, C64::from_polar(1.0, t));
        let g = f.compose_linear(&rot).unwrap();
        let want = C64::new(0.5, -1.0) * C64::from_polar(1.0, 3.0 * t);
        assert!((g.coeff(&MultiIndex::new(&[1, 2])) - want).norm() < 1e-15);
    }

    #[test]
    fn swap_coordinates() {
        let f = HoloPoly::monomial(&[1, 0], C64::new(1.0, 0.0));
        let mut p = CMatrix::zeros(2, 2);
        p[(0, 1)] = C64::new(1.0, 0.0);
        p[(1, 0)] = C64::new(1.0, 0.0);
        let g = f.compose_linear(&p).unwrap();
        assert_eq!(g, HoloPoly::monomial(&[0, 1], C64::new(1.0, 0.0)));
    }

    #[test]
    fn shape_mismatch() {
        let f = HoloPoly::monomial(&[1, 0], C64::new(1.0, 0.0));
        assert!(matches!(f.compose_linear(&CMatrix::identity(3, 3)), Err(Error::Shape(_))));
    }
}

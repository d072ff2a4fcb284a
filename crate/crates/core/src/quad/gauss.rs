//! Gauss–Jacobi rules via the Golub–Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

/// Nodes and weights for `∫_{-1}^{1} (1−x)^a (1+x)^b g(x) dx`, `a, b > −1`.
/// Exact for polynomials of degree `≤ 2n−1`. Nodes are increasing.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    assert!(a > -1.0 && b > -1.0, "Jacobi exponents must exceed -1");
    let ab = a + b;
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jm[(k, k)] = diag;
        if k + 1 < n {
            let m = (k + 1) as f64;
            let beta = if m == 1.0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * m * (m + a) * (m + b) * (m + ab)
                    / ((2.0 * m + ab).powi(2) * (2.0 * m + ab + 1.0) * (2.0 * m + ab - 1.0))
            };
            jm[(k, k + 1)] = beta.sqrt();
            jm[(k + 1, k)] = beta.sqrt();
        }
    }
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(ab + 2.0))
        .exp();
    let eig = SymmetricEigen::new(jm);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// Rule for `∫_0^1 u^a (1−u)^b g(u) du`; nodes increasing in `u`.
pub fn gauss_jacobi_unit(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    // u = (1−x)/2 turns (1−x)^a (1+x)^b dx into 2^{a+b+1} u^a (1−u)^b du
    let (x, w) = gauss_jacobi(n, a, b);
    let scale = 0.5f64.powf(a + b + 1.0);
    let mut pairs: Vec<(f64, f64)> =
        x.iter().zip(&w).map(|(xi, wi)| ((1.0 - xi) / 2.0, wi * scale)).collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

/// Gauss–Legendre on `[lo, hi]`.
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_jacobi(n, 0.0, 0.0);
    let h = (hi - lo) / 2.0;
    (x.iter().map(|xi| lo + h * (xi + 1.0)).collect(), w.iter().map(|wi| wi * h).collect())
}

/// `∫_lo^hi (t−lo)^ea (hi−t)^eb g(t) dt` by composite rules: Jacobi panels at
/// the two ends absorb the endpoint powers, Legendre panels in between.
pub fn weighted_panels(
    lo: f64,
    hi: f64,
    ea: f64,
    eb: f64,
    panels: usize,
    order: usize,
    g: impl Fn(f64) -> f64,
) -> f64 {
    let panels = panels.max(2);
    let h = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = lo + p as f64 * h;
        let first = p == 0;
        let last = p + 1 == panels;
        let ja = if first { ea } else { 0.0 };
        let jb = if last { eb } else { 0.0 };
        // weight inside the panel is (t−lo)^ea (hi−t)^eb; factor out what the rule absorbs
        let (u, w) = gauss_jacobi_unit(order, ja, jb);
        let scale = h.powf(1.0 + ja + jb);
        for (ui, wi) in u.iter().zip(&w) {
            let t = a + h * ui;
            let mut extra = 1.0;
            if !first && ea != 0.0 {
                extra *= (t - lo).powf(ea);
            }
            if !last && eb != 0.0 {
                extra *= (hi - t).powf(eb);
            }
            total += scale * wi * extra * g(t);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(5, 0.0, 2.0);
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(9)).sum();
        assert!((v - 2f64.powi(10) / 10.0).abs() < 1e-11);
    }

    #[test]
    fn jacobi_moments() {
        // ∫_0^1 u^{1/2} (1-u)^2 u^3 du = B(4.5, 3)
        let (u, w) = gauss_jacobi_unit(4, 0.5, 2.0);
        let v: f64 = u.iter().zip(&w).map(|(u, w)| w * u.powi(3)).sum();
        let beta = (ln_gamma(4.5) + ln_gamma(3.0) - ln_gamma(7.5)).exp();
        assert!((v - beta).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        let beta0 = (ln_gamma(1.5) + ln_gamma(3.0) - ln_gamma(4.5)).exp();
        assert!((total - beta0).abs() < 1e-14);
    }

    #[test]
    fn panels_with_singular_ends() {
        // ∫_0^1 t^{-1/2} (1-t)^{-1/2} dt = π
        let v = weighted_panels(0.0, 1.0, -0.5, -0.5, 4, 8, |_| 1.0);
        assert!((v - std::f64::consts::PI).abs() < 1e-12);
    }
}

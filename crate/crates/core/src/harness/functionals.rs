//! Radial and modulus functionals shared by the checks.

use crate::holopoly::{canonical_sequences, tangential_apply, HoloPoly, MixedPoly};
use crate::moduli::ModulusEstimate;
use crate::quad::gauss::{gauss_jacobi_unit, gauss_legendre, weighted_panels};
use crate::quad::{golden_max, mixed_norm_profile, Combine, L2Profile, MeanEvaluator, SphereRule};

/// `r ↦ M_p(r, g)`: closed form for `p = 2`, sphere quadrature otherwise.
pub enum Means<'a> {
    Exact(L2Profile, f64),
    Quad(MeanEvaluator<'a>, f64, f64),
}

impl<'a> Means<'a> {
    pub fn holo(g: &HoloPoly, p: f64, rule: &'a SphereRule) -> Self {
        if p == 2.0 {
            Means::Exact(L2Profile::holo(g), 1.0)
        } else {
            Means::Quad(MeanEvaluator::holo(g, rule), p, 1.0)
        }
    }

    /// `(Σ w_i |g_i|²)^{1/2}`.
    pub fn channels(chs: &[(f64, HoloPoly)], p: f64, rule: &'a SphereRule) -> Self {
        if p == 2.0 {
            Means::Exact(L2Profile::holo_channels(chs), 1.0)
        } else {
            Means::Quad(MeanEvaluator::holo_channels(chs, Combine::L2, rule), p, 1.0)
        }
    }

    pub fn mixed(g: &MixedPoly, p: f64, rule: &'a SphereRule) -> Self {
        if p == 2.0 {
            Means::Exact(L2Profile::mixed(g), 1.0)
        } else {
            Means::Quad(MeanEvaluator::mixed(g, rule), p, 1.0)
        }
    }

    /// `Σ w_i |g_i|`; a single channel keeps the closed form for `p = 2`.
    pub fn mixed_sum(chs: &[(f64, MixedPoly)], p: f64, rule: &'a SphereRule) -> Self {
        if chs.len() == 1 {
            let (w, g) = &chs[0];
            return match Self::mixed(g, p, rule) {
                Means::Exact(prof, s) => Means::Exact(prof, s * w),
                Means::Quad(ev, p, s) => Means::Quad(ev, p, s * w),
            };
        }
        Means::Quad(MeanEvaluator::mixed_channels(chs, Combine::L1, rule), p, 1.0)
    }

    pub fn at(&self, r: f64) -> f64 {
        match self {
            Means::Exact(prof, s) => s * prof.mean(r),
            Means::Quad(ev, p, s) => s * ev.mean(r, *p),
        }
    }
}

/// `∇^k_T f` (or `∇^k_{T+} f`) as weighted channels `(multiplicity, T_δ f)`.
pub fn tangential_channels(f: &HoloPoly, k: usize, plus: bool) -> Vec<(f64, MixedPoly)> {
    let m = f.to_mixed();
    canonical_sequences(f.dim(), k, plus)
        .into_iter()
        .map(|(mult, w)| (mult, tangential_apply(&m, &w)))
        .filter(|(_, g)| !g.is_zero())
        .collect()
}

/// Composite-rule size for integrands oscillating like `e^{ikt}`, `k ≤ degree`.
pub fn panels_for(degree: usize) -> usize {
    4 + degree / 4
}

/// `‖M‖_{q, β}` in the mixed-norm normalization.
pub fn mixed_of(m: &Means, q: f64, beta: f64, dim: usize, nodes: usize) -> f64 {
    mixed_norm_profile(&|r| m.at(r), q, beta, dim, nodes)
}

/// `(∫_0^1 [h(t)/t^α]^q dt/t)^{1/q}` for `h(t) ≈ c t^n` near `0`, `n > α`;
/// `q = ∞` gives `sup h(t)/t^α`.
pub fn difference_functional(h: &(dyn Fn(f64) -> f64 + Sync), n: u32, alpha: f64, q: f64, degree: usize) -> f64 {
    if q.is_infinite() {
        return sup_log_grid(&|t| h(t) / t.powf(alpha), 1e-6, 1.0);
    }
    let e = q * (n as f64 - alpha) - 1.0;
    let v = weighted_panels(0.0, 1.0, e, 0.0, panels_for(degree), 10, |t| (h(t) / t.powi(n as i32)).powf(q));
    v.powf(1.0 / q)
}

/// `sup` of `g` over `[lo, hi]` on a log grid refined by golden sections.
pub fn sup_log_grid(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let pts = 121;
    let ts: Vec<f64> = (0..pts).map(|i| lo * (hi / lo).powf(i as f64 / (pts - 1) as f64)).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
    let (imax, &vmax) = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty grid");
    let a = ts[imax.saturating_sub(1)];
    let b = ts[(imax + 1).min(pts - 1)];
    if b <= a {
        return vmax;
    }
    golden_max(g, a, b, 60).1.max(vmax)
}

/// Log-spaced `δ` grid on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, pts: usize) -> Vec<f64> {
    (0..pts).map(|i| lo * (hi / lo).powf(i as f64 / (pts - 1).max(1) as f64)).collect()
}

/// `(∫_0^1 [ω(δ)/δ^α]^q dδ/δ)^{1/q}` from a monotone table on a log grid:
/// trapezoid in `log δ`, plus the tail below the grid with `ω(δ) ∝ δ^n`.
/// `q = ∞` gives the maximum of `ω(δ)/δ^α` over the table.
pub fn modulus_functional(table: &[ModulusEstimate], n: u32, alpha: f64, q: f64) -> f64 {
    let vals: Vec<(f64, f64)> = table.iter().map(|e| (e.delta.ln(), e.value / e.delta.powf(alpha))).collect();
    if q.is_infinite() {
        return vals.iter().map(|v| v.1).fold(0.0, f64::max);
    }
    let mut total = 0.0;
    for w in vals.windows(2) {
        total += 0.5 * (w[1].0 - w[0].0) * (w[0].1.powf(q) + w[1].1.powf(q));
    }
    if let Some(first) = vals.first() {
        total += first.1.powf(q) / (q * (n as f64 - alpha));
    }
    total.powf(1.0 / q)
}

/// `∫_a^b M(r)(1−r)^{e} dr` with `b ≤ 1`, Jacobi at `r = 1` when `b = 1`.
pub fn weighted_radial(m: &(dyn Fn(f64) -> f64 + Sync), a: f64, b: f64, e: f64, degree: usize) -> f64 {
    if b >= 1.0 {
        weighted_panels(a, 1.0, 0.0, e, panels_for(degree), 10, m)
    } else {
        weighted_panels(a, b, 0.0, 0.0, panels_for(degree), 10, |r| m(r) * (1.0 - r).powf(e))
    }
}

/// `∫_0^1 g(u) u^a du` by Gauss–Jacobi.
pub fn jacobi_left(g: &dyn Fn(f64) -> f64, a: f64, nodes: usize) -> f64 {
    let (u, w) = gauss_jacobi_unit(nodes, a, 0.0);
    u.iter().zip(&w).map(|(x, wi)| wi * g(*x)).sum()
}

/// `∫_0^1 g(t) dt/t` for `g` vanishing like a power at `0`, via `t = e^{−y/(1−y)}`.
pub fn log_measure(g: &dyn Fn(f64) -> f64) -> f64 {
    let panels = 64;
    let (gy, gw) = gauss_legendre(8, 0.0, 1.0);
    let h = 1.0 / panels as f64;
    let mut total = 0.0;
    for pnl in 0..panels {
        let a = pnl as f64 * h;
        for (yi, wi) in gy.iter().zip(&gw) {
            let y = a + h * yi;
            let t = (-y / (1.0 - y)).exp();
            if t > 0.0 {
                total += h * wi * g(t) / ((1.0 - y) * (1.0 - y));
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::ModulusKind;

    #[test]
    fn difference_functional_of_power() {
        // h(t) = t^n: ∫_0^1 t^{q(n−α)−1} dt = 1/(q(n−α))
        let (n, alpha, q) = (2u32, 0.5, 2.0);
        let v = difference_functional(&|t: f64| t * t, n, alpha, q, 8);
        assert!((v - (1.0 / (q * 1.5f64)).sqrt()).abs() < 1e-12);
        let s = difference_functional(&|t: f64| t * t, n, alpha, f64::INFINITY, 8);
        assert!((s - 1.0).abs() < 1e-9);
    }

    #[test]
    fn modulus_functional_of_power() {
        let grid = log_grid(1e-3, 1.0, 400);
        let table: Vec<ModulusEstimate> = grid
            .iter()
            .map(|&d| ModulusEstimate {
                value: d,
                kind: ModulusKind::Minus,
                delta: d,
                n: 1,
                p: 2.0,
                samples: 1,
                witness: String::new(),
            })
            .collect();
        let v = modulus_functional(&table, 1, 0.5, 2.0);
        assert!((v - 1.0).abs() < 1e-4, "{v}");
    }

    #[test]
    fn weighted_radial_matches_closed_form() {
        let v = weighted_radial(&|r: f64| r, 0.0, 1.0, 0.5, 4);
        // ∫ r (1−r)^{1/2} dr = B(2, 3/2) = 4/15
        assert!((v - 4.0 / 15.0).abs() < 1e-13);
    }

    #[test]
    fn log_measure_of_power() {
        // ∫_0^1 t^{3/2} dt/t = 2/3
        let v = log_measure(&|t: f64| t.powf(1.5));
        assert!((v - 2.0 / 3.0).abs() < 1e-10, "{v}");
    }
}

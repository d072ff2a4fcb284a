//! Weighted radial integrals of integral means: mixed norms and φ-weighted seminorms.

use super::eval::MeanEvaluator;
use super::gauss::{gauss_jacobi_unit, gauss_legendre};
use super::sphere::SphereRule;
use crate::error::{Error, Result};
use crate::holopoly::HoloPoly;
use serde::{Deserialize, Serialize};

/// Positive increasing weight `φ` on `(0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "type")]
pub enum PhiWeight {
    /// `t^a`
    Power { a: f64 },
    /// `t^a · log(e/t)^b`
    PowerLog { a: f64, b: f64 },
}

impl PhiWeight {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            PhiWeight::Power { a } => t.powf(a),
            PhiWeight::PowerLog { a, b } => t.powf(a) * (1.0 - t.ln()).powf(b),
        }
    }

    /// Checks that `φ(x)/x^α` is nondecreasing on a log grid of `(0, 1]`.
    pub fn ratio_increasing(&self, alpha: f64) -> bool {
        let mut prev = 0.0;
        for i in 0..=400 {
            let x = 10f64.powf(-8.0 + 8.0 * i as f64 / 400.0);
            let v = self.eval(x) / x.powf(alpha);
            if v < prev * (1.0 - 1e-12) {
                return false;
            }
            prev = v;
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "type")]
pub enum Weight {
    /// `(1−r²)^{qα−1}` as in the mixed norm.
    Power { alpha: f64 },
    /// `((1−r)^n / φ(1−r))^q dr/(1−r)` applied to `M_p(r, R^n f)`.
    Phi { phi: PhiWeight, n: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub p: f64,
    pub q: f64,
    pub weight: Weight,
}

impl NormSpec {
    pub fn power(p: f64, q: f64, alpha: f64) -> Self {
        NormSpec { p, q, weight: Weight::Power { alpha } }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(v >= 1.0) {
                return Err(Error::Range(format!("{name} = {v} must lie in [1, ∞]")));
            }
        }
        Ok(())
    }
}

/// Nodes `r_i` (increasing) and weights with `Σ w_i g(r_i) ≈ 2N ∫_0^1 g(r)(1−r²)^{qα−1} r^{2N−1} dr`.
#[derive(Clone, Debug)]
pub struct RadialRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub tag: String,
}

impl RadialRule {
    /// Gauss–Jacobi in `u = 1−r²`, where the measure becomes `N u^{qα−1} (1−u)^{N−1} du`.
    pub fn mixed(q: f64, alpha: f64, dim: usize, n: usize) -> Result<Self> {
        let a = q * alpha - 1.0;
        if !(a > -1.0) || !q.is_finite() {
            return Err(Error::Weight(format!("radial weight with q={q}, α={alpha} is not integrable")));
        }
        let (u, w) = gauss_jacobi_unit(n, a, dim as f64 - 1.0);
        let mut pairs: Vec<(f64, f64)> =
            u.iter().zip(&w).map(|(u, w)| ((1.0 - u).sqrt(), w * dim as f64)).collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(RadialRule { nodes, weights, tag: format!("jacobi(u^{a}, (1-u)^{})", dim - 1) })
    }

    /// Node count used for polynomials of degree `≤ max_degree`.
    pub fn default_size(max_degree: usize, q: f64) -> usize {
        let q = if q.is_finite() { q.min(8.0) } else { 2.0 };
        (16 + (q * max_degree as f64 / 4.0).ceil() as usize).min(240)
    }
}

/// Maximise a unimodal-looking function on `[a, b]` by golden-section search.
pub fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `sup` of `g` over `r ∈ [0, 1)`: log grid in `1−r` down to `1e−8`, then golden refinement.
pub fn sup_near_boundary(g: &dyn Fn(f64) -> f64) -> f64 {
    let pts = 97;
    let rs: Vec<f64> = std::iter::once(0.0)
        .chain((0..pts).map(|i| 1.0 - 10f64.powf(-0.05 - 8.0 * i as f64 / (pts - 1) as f64)))
        .collect();
    let vals: Vec<f64> = rs.iter().map(|&r| g(r)).collect();
    let (imax, &vmax) = vals
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty grid");
    let lo = if imax == 0 { 0.0 } else { rs[imax - 1] };
    let hi = if imax + 1 < rs.len() { rs[imax + 1] } else { rs[imax] };
    if hi <= lo {
        return vmax;
    }
    let (_, v) = golden_max(g, lo, hi, 60);
    v.max(vmax)
}

/// Mixed norm from a radial profile `r ↦ M_p(r, f)`.
///
/// `q < ∞`: `(2N ∫_0^1 M^q (1−r²)^{qα−1} r^{2N−1} dr)^{1/q}`; `q = ∞`: `sup (1−r²)^α M(r)`.
/// Returns `+∞` when the weight is not integrable and the profile is not identically zero.
pub fn mixed_norm_profile(
    m: &(dyn Fn(f64) -> f64 + Sync),
    q: f64,
    alpha: f64,
    dim: usize,
    nodes: usize,
) -> f64 {
    if q.is_infinite() {
        if alpha < 0.0 {
            return if m(1.0) > 0.0 { f64::INFINITY } else { 0.0 };
        }
        let g = |r: f64| (1.0 - r * r).powf(alpha) * m(r);
        let v = sup_near_boundary(&g);
        return if alpha == 0.0 { v.max(m(1.0)) } else { v };
    }
    if alpha <= 0.0 {
        return if m(1.0) > 0.0 { f64::INFINITY } else { 0.0 };
    }
    let rule = RadialRule::mixed(q, alpha, dim, nodes).expect("alpha > 0 makes the weight integrable");
    let vals = crate::par::map(&rule.nodes, |&r| m(r).powf(q));
    let s: f64 = vals.iter().zip(&rule.weights).map(|(v, w)| v * w).sum();
    s.powf(1.0 / q)
}

/// `‖f‖_{p,q,α}` with integral means from the sphere rule.
pub fn mixed_norm(f: &HoloPoly, spec: &NormSpec, rule: &SphereRule, radial_nodes: usize) -> Result<f64> {
    spec.validate()?;
    let alpha = match spec.weight {
        Weight::Power { alpha } => alpha,
        Weight::Phi { .. } => {
            return Err(Error::Config("mixed_norm takes a power weight; use phi_seminorm".into()))
        }
    };
    if f.is_zero() {
        return Ok(0.0);
    }
    let ev = MeanEvaluator::holo(f, rule);
    let p = spec.p;
    Ok(mixed_norm_profile(&|r| ev.mean(r, p), spec.q, alpha, f.dim(), radial_nodes))
}

/// `(∫_0^1 M(r)^q (1−r)^{qγ−1} dr)^{1/q}` by Gauss–Jacobi in `r`; `q = ∞` gives `sup (1−r)^γ M(r)`.
pub fn power_weight_integral(m: &(dyn Fn(f64) -> f64 + Sync), q: f64, gamma: f64, nodes: usize) -> f64 {
    if q.is_infinite() {
        return sup_near_boundary(&|r: f64| (1.0 - r).powf(gamma) * m(r));
    }
    let (r, w) = gauss_jacobi_unit(nodes, 0.0, q * gamma - 1.0);
    let vals = crate::par::map(&r, |&x| m(x).powf(q));
    vals.iter().zip(&w).map(|(v, w)| v * w).sum::<f64>().powf(1.0 / q)
}

/// The φ-weighted functional of a profile `r ↦ M_p(r, R^n f)`:
/// `(∫_0^1 (M(r)(1−r)^n/φ(1−r))^q dr/(1−r))^{1/q}`, or the supremum for `q = ∞`.
pub fn phi_seminorm_profile(
    m: &(dyn Fn(f64) -> f64 + Sync),
    phi: &(dyn Fn(f64) -> f64 + Sync),
    n: u32,
    q: f64,
) -> Result<f64> {
    let ratio = |t: f64| -> Result<f64> {
        let ph = phi(t);
        if !(ph > 0.0) {
            return Err(Error::Weight(format!("φ({t}) = {ph} is not positive")));
        }
        Ok(m(1.0 - t) * t.powi(n as i32) / ph)
    };
    if q.is_infinite() {
        // t log-spaced on [1e−12, 1]
        let pts = 121;
        let ts: Vec<f64> = (0..pts).map(|i| 10f64.powf(-12.0 * i as f64 / (pts - 1) as f64)).collect();
        let mut vals = Vec::with_capacity(pts);
        for &t in &ts {
            vals.push(ratio(t)?);
        }
        let (imax, &vmax) = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        let lo = ts[(imax + 1).min(pts - 1)];
        let hi = ts[imax.saturating_sub(1)];
        let g = |t: f64| ratio(t).unwrap_or(0.0);
        let (_, v) = golden_max(&g, lo, hi, 60);
        return Ok(v.max(vmax));
    }
    // t = e^{−x}, x = y/(1−y): the integral becomes ∫_0^1 h(x(y)) dy/(1−y)²
    let panels = 64;
    let (gy, gw) = gauss_legendre(8, 0.0, 1.0);
    let mut total = 0.0;
    for pnl in 0..panels {
        let a = pnl as f64 / panels as f64;
        let h = 1.0 / panels as f64;
        for (yi, wi) in gy.iter().zip(&gw) {
            let y = a + h * yi;
            let x = y / (1.0 - y);
            let t = (-x).exp();
            if t == 0.0 {
                continue;
            }
            let v = ratio(t)?;
            total += h * wi * v.powf(q) / ((1.0 - y) * (1.0 - y));
        }
    }
    Ok(total.powf(1.0 / q))
}

/// φ-weighted functional of `f` with means from the sphere rule.
pub fn phi_seminorm(f: &HoloPoly, spec: &NormSpec, rule: &SphereRule) -> Result<f64> {
    spec.validate()?;
    let (phi, n) = match &spec.weight {
        Weight::Phi { phi, n } => (phi.clone(), *n),
        Weight::Power { .. } => return Err(Error::Config("phi_seminorm needs a φ weight".into())),
    };
    let g = f.radial_power(n as f64);
    if g.is_zero() {
        return Ok(0.0);
    }
    let ev = MeanEvaluator::holo(&g, rule);
    let p = spec.p;
    phi_seminorm_profile(&|r| ev.mean(r, p), &|t| phi.eval(t), n, spec.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn sup_of_monomial_profile() {
        // N=1, f = z^k: max_r (1−r²)^α r^k at r² = k/(k+2α)
        let (k, alpha) = (7.0, 0.75);
        let want = {
            let r2: f64 = k / (k + 2.0 * alpha);
            (1.0 - r2).powf(alpha) * r2.powf(k / 2.0)
        };
        let v = mixed_norm_profile(&|r: f64| r.powf(k), f64::INFINITY, alpha, 1, 0);
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn zero_and_divergent() {
        let rule = SphereRule::new(1, 4).unwrap();
        let z = HoloPoly::zero(1, 3);
        assert_eq!(mixed_norm(&z, &NormSpec::power(2.0, 2.0, 0.5), &rule, 20).unwrap(), 0.0);
        let f = HoloPoly::monomial(&[1], C64::new(1.0, 0.0));
        assert!(mixed_norm(&f, &NormSpec::power(2.0, 2.0, 0.0), &rule, 20).unwrap().is_infinite());
    }

    #[test]
    fn mixed_norm_closed_form_n1() {
        // p=q=2, N=1, f=z^k: 2∫ r^{2k}(1−r²)^{2α−1} r dr = B(k+1, 2α)
        use statrs::function::gamma::ln_gamma;
        let (k, alpha) = (5usize, 0.4);
        let rule = SphereRule::new(1, 2 * k).unwrap();
        let f = HoloPoly::monomial(&[k as u32], C64::new(1.0, 0.0));
        let v = mixed_norm(&f, &NormSpec::power(2.0, 2.0, alpha), &rule, 24).unwrap();
        let b = (ln_gamma(k as f64 + 1.0) + ln_gamma(2.0 * alpha) - ln_gamma(k as f64 + 1.0 + 2.0 * alpha)).exp();
        assert!((v * v - b).abs() < 1e-13);
    }
}

//! Sampled lower estimates of `ω^−_n ≤ ω_n ≤ ω^+_n`.
//!
//! Each transform is `U = V diag(μ) V*` with `V` unitary, so
//! `‖Δ^n_U f‖_p = ‖Σ c_α (μ^α − 1)^n z^α‖_p` with `c_α` the coefficients of
//! `f∘V`. One composition per eigenbasis serves every `μ` and every `δ`.

use super::diagonal_difference;
use super::sampler::{DiagonalSample, SampleSet};
use super::rotation_multiplier;
use crate::error::{Error, Result};
use crate::holopoly::HoloPoly;
use crate::par;
use crate::quad::{golden_max, hardy_norm, MeanEvaluator, SphereRule};
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModulusKind {
    /// scalar rotations `e^{it} I`
    Minus,
    /// unitary `U`
    Unitary,
    /// contractions `‖U‖ ≤ 1`
    Plus,
}

impl ModulusKind {
    pub const ALL: [ModulusKind; 3] = [ModulusKind::Minus, ModulusKind::Unitary, ModulusKind::Plus];

    pub fn name(self) -> &'static str {
        match self {
            ModulusKind::Minus => "minus",
            ModulusKind::Unitary => "unitary",
            ModulusKind::Plus => "plus",
        }
    }
}

impl FromStr for ModulusKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" => Ok(ModulusKind::Minus),
            "unitary" => Ok(ModulusKind::Unitary),
            "plus" => Ok(ModulusKind::Plus),
            _ => Err(Error::Config(format!("unknown modulus kind {s:?} (expected minus, unitary or plus)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusEstimate {
    pub value: f64,
    pub kind: ModulusKind,
    pub delta: f64,
    pub n: u32,
    pub p: f64,
    pub samples: usize,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModulusOptions {
    /// Number of unitary samples and of contraction samples.
    pub budget: usize,
    pub seed: u64,
    /// Constrain rotations by `2|sin(t/2)| < δ` instead of `|t| < δ`.
    pub metrized_minus: bool,
}

impl Default for ModulusOptions {
    fn default() -> Self {
        ModulusOptions { budget: 32, seed: 0, metrized_minus: false }
    }
}

/// Precomputed state for repeated estimates of one function.
pub struct ModulusEstimator<'a> {
    f: HoloPoly,
    n: u32,
    p: f64,
    rule: &'a SphereRule,
    opts: ModulusOptions,
    samples: SampleSet,
    composed: OnceLock<Vec<HoloPoly>>,
    flat: OnceLock<Vec<FlatEnergy>>,
    rotations: Option<MeanEvaluator<'a>>,
    energies: Vec<f64>,
}

fn clamp_delta(delta: f64) -> f64 {
    if delta >= 2.0 {
        log::warn!("δ = {delta} ≥ 2 clamped to 2 (‖U − I‖ ≤ 2 for every unitary U)");
        2.0
    } else {
        delta
    }
}

/// Largest eigen-angle with `|e^{iθ} − 1| < δ`.
fn unitary_angle(delta: f64) -> f64 {
    2.0 * (delta / 2.0).min(1.0).asin()
}

impl<'a> ModulusEstimator<'a> {
    pub fn new(f: &HoloPoly, n: u32, p: f64, rule: &'a SphereRule, opts: &ModulusOptions) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range("difference order n must be ≥ 1".into()));
        }
        if opts.budget == 0 {
            return Err(Error::Range("sample budget must be ≥ 1".into()));
        }
        if !(p >= 1.0) {
            return Err(Error::Range(format!("p = {p} must lie in [1, ∞]")));
        }
        if rule.dim() != f.dim() {
            return Err(Error::Shape(format!("rule dimension {} vs polynomial dimension {}", rule.dim(), f.dim())));
        }
        let rotations = if p == 2.0 { None } else { Some(MeanEvaluator::holo(f, rule)) };
        Ok(ModulusEstimator {
            f: f.clone(),
            n,
            p,
            rule,
            opts: opts.clone(),
            samples: SampleSet::new(f.dim(), opts.budget, opts.seed),
            composed: OnceLock::new(),
            flat: OnceLock::new(),
            rotations,
            energies: f.part_energies(),
        })
    }

    fn composed(&self) -> &[HoloPoly] {
        self.composed.get_or_init(|| {
            par::map(&self.samples.frames, |v| self.f.compose_linear(v).expect("frame has the polynomial's dimension"))
        })
    }

    fn flat(&self) -> &[FlatEnergy] {
        self.flat.get_or_init(|| self.composed().iter().map(FlatEnergy::new).collect())
    }

    fn norm(&self, h: &HoloPoly) -> f64 {
        if self.p == 2.0 {
            h.h2_norm()
        } else {
            hardy_norm(h, self.p, self.rule)
        }
    }

    /// `‖Δ^n_t f‖_p`.
    pub fn rotation_norm(&self, t: f64) -> f64 {
        match &self.rotations {
            // |e^{ikt} − 1|² = 2 − 2 cos kt
            None => self
                .energies
                .iter()
                .enumerate()
                .map(|(k, e)| e * (2.0 - 2.0 * (k as f64 * t).cos()).powi(self.n as i32))
                .sum::<f64>()
                .sqrt(),
            Some(ev) => ev.mean_with(1.0, self.p, Some(&rotation_multiplier(self.f.max_degree(), t, self.n))),
        }
    }

    pub fn rotation_limit(&self, delta: f64) -> f64 {
        if self.opts.metrized_minus {
            unitary_angle(delta)
        } else {
            delta
        }
    }

    /// Supremum over `|t| ≤ t_max` by a grid scan refined with golden sections.
    fn minus(&self, delta: f64) -> (f64, String, usize) {
        let tmax = self.rotation_limit(delta);
        let deg = self.f.actual_degree().unwrap_or(0).max(1) as f64;
        let half = 16 + (2.0 * deg * tmax).ceil() as usize;
        let ts: Vec<f64> = (0..=2 * half).map(|i| -tmax + tmax * i as f64 / half as f64).collect();
        let vals = par::map(&ts, |&t| self.rotation_norm(t));
        let mut best = (vals[0], ts[0]);
        for (v, t) in vals.iter().zip(&ts) {
            if *v > best.0 {
                best = (*v, *t);
            }
        }
        let mut peaks: Vec<usize> =
            (1..ts.len() - 1).filter(|&i| vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]).collect();
        peaks.sort_by(|a, b| vals[*b].total_cmp(&vals[*a]).then(a.cmp(b)));
        peaks.truncate(3);
        let refined = par::map(&peaks, |&i| {
            let (t, v) = golden_max(&|t| self.rotation_norm(t), ts[i - 1], ts[i + 1], 50);
            (v, t)
        });
        for (v, t) in refined {
            if v > best.0 {
                best = (v, t);
            }
        }
        let evals = ts.len() + peaks.len() * 52;
        (best.0, format!("rotation t = {:.9}", best.1), evals)
    }

    fn sampled(&self, list: &[DiagonalSample], delta: f64) -> (f64, String) {
        let theta = unitary_angle(delta);
        let vals = if self.p == 2.0 {
            let flat = self.flat();
            par::map(list, |s| {
                let mu = s.eigenvalues(delta, theta);
                (flat[s.frame].difference_norm(&mu, self.n), mu)
            })
        } else {
            let composed = self.composed();
            par::map(list, |s| {
                let mu = s.eigenvalues(delta, theta);
                (self.norm(&diagonal_difference(&composed[s.frame], &mu, self.n)), mu)
            })
        };
        let mut best: Option<(f64, String)> = None;
        for (s, (v, mu)) in list.iter().zip(vals) {
            if best.as_ref().is_none_or(|b| v > b.0) {
                best = Some((v, s.describe(&mu)));
            }
        }
        best.unwrap_or((0.0, String::new()))
    }

    /// All three nested estimates at `δ`.
    pub fn estimate_all(&self, delta: f64) -> Result<[ModulusEstimate; 3]> {
        let (m, mw, evals) = self.minus(self.minus_delta(delta)?);
        let delta = self.check_delta(delta)?;
        let (u, uw) = self.sampled(&self.samples.unitary, delta);
        let (c, cw) = self.sampled(&self.samples.plus, delta);
        let make = |kind, value, witness: String, samples| ModulusEstimate {
            value,
            kind,
            delta,
            n: self.n,
            p: self.p,
            samples,
            witness,
        };
        let minus = make(ModulusKind::Minus, m, mw.clone(), evals);
        let (uv, uwit) = if u > m { (u, uw) } else { (m, mw) };
        let unitary = make(ModulusKind::Unitary, uv, uwit.clone(), evals + self.opts.budget);
        let (pv, pwit) = if c > uv { (c, cw) } else { (uv, uwit) };
        let plus = make(ModulusKind::Plus, pv, pwit, evals + 2 * self.opts.budget);
        Ok([minus, unitary, plus])
    }

    pub fn estimate(&self, delta: f64, kind: ModulusKind) -> Result<ModulusEstimate> {
        if kind == ModulusKind::Minus {
            let delta = self.minus_delta(delta)?;
            let (v, w, evals) = self.minus(delta);
            return Ok(ModulusEstimate { value: v, kind, delta, n: self.n, p: self.p, samples: evals, witness: w });
        }
        let all = self.estimate_all(delta)?;
        Ok(all[kind as usize].clone())
    }

    /// Rotations `|t| < δ` cover the whole circle once `δ ≥ π`; the metrized
    /// convention saturates at 2 like the unitary kinds.
    fn minus_delta(&self, delta: f64) -> Result<f64> {
        if self.opts.metrized_minus {
            return self.check_delta(delta);
        }
        if !(delta > 0.0) {
            return Err(Error::Range(format!("δ = {delta} must be positive")));
        }
        Ok(delta.min(std::f64::consts::PI))
    }

    fn check_delta(&self, delta: f64) -> Result<f64> {
        if !(delta > 0.0) {
            return Err(Error::Range(format!("δ = {delta} must be positive")));
        }
        Ok(clamp_delta(delta))
    }

    /// Estimates over an increasing grid with a running maximum per kind.
    pub fn dial(&self, grid: &[f64]) -> Result<Vec<[ModulusEstimate; 3]>> {
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Range("δ-grid must be strictly increasing".into()));
        }
        let mut rows: Vec<[ModulusEstimate; 3]> = Vec::with_capacity(grid.len());
        for &d in grid {
            let mut row = self.estimate_all(d)?;
            if let Some(prev) = rows.last() {
                for (cur, old) in row.iter_mut().zip(prev) {
                    if old.value > cur.value {
                        cur.value = old.value;
                        cur.witness = format!("{} (carried from δ = {})", old.witness, old.delta);
                    }
                }
            }
            rows.push(row);
        }
        Ok(rows)
    }
}

/// `|c_α|² ∫|z^α|²dσ` with flattened exponents, for `‖Δ^n_U f‖_2` in `O(terms)`.
struct FlatEnergy {
    dim: usize,
    degree: usize,
    exps: Vec<u32>,
    weights: Vec<f64>,
}

impl FlatEnergy {
    fn new(g: &HoloPoly) -> Self {
        let mut exps = Vec::with_capacity(g.len() * g.dim());
        let mut weights = Vec::with_capacity(g.len());
        for (a, c) in g.terms() {
            exps.extend_from_slice(a.as_slice());
            weights.push(c.norm_sqr() * crate::multi_index::sphere_moment(a));
        }
        FlatEnergy { dim: g.dim(), degree: g.actual_degree().unwrap_or(0), exps, weights }
    }

    /// `(Σ_α w_α |μ^α − 1|^{2n})^{1/2}`.
    fn difference_norm(&self, mu: &[crate::C64], n: u32) -> f64 {
        let powers: Vec<Vec<crate::C64>> = mu
            .iter()
            .map(|m| {
                let mut row = Vec::with_capacity(self.degree + 1);
                let mut acc = crate::C64::new(1.0, 0.0);
                for _ in 0..=self.degree {
                    row.push(acc);
                    acc *= m;
                }
                row
            })
            .collect();
        let mut total = 0.0;
        for (t, w) in self.weights.iter().enumerate() {
            let e = &self.exps[t * self.dim..(t + 1) * self.dim];
            let mut v = crate::C64::new(1.0, 0.0);
            for (j, &k) in e.iter().enumerate() {
                v *= powers[j][k as usize];
            }
            total += w * (v - 1.0).norm_sqr().powi(n as i32);
        }
        total.sqrt()
    }
}

/// One estimate of the requested kind.
pub fn modulus_estimate(
    f: &HoloPoly,
    delta: f64,
    n: u32,
    p: f64,
    kind: ModulusKind,
    rule: &SphereRule,
    opts: &ModulusOptions,
) -> Result<ModulusEstimate> {
    ModulusEstimator::new(f, n, p, rule, opts)?.estimate(delta, kind)
}

/// Monotone table `(δ, estimate)` over an increasing grid.
pub fn modulus_dial(
    f: &HoloPoly,
    grid: &[f64],
    n: u32,
    p: f64,
    kind: ModulusKind,
    rule: &SphereRule,
    opts: &ModulusOptions,
) -> Result<Vec<ModulusEstimate>> {
    let est = ModulusEstimator::new(f, n, p, rule, opts)?;
    if kind == ModulusKind::Minus {
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Range("δ-grid must be strictly increasing".into()));
        }
        let mut out: Vec<ModulusEstimate> = Vec::with_capacity(grid.len());
        for &d in grid {
            let mut e = est.estimate(d, kind)?;
            if let Some(prev) = out.last() {
                if prev.value > e.value {
                    e.value = prev.value;
                    e.witness = format!("{} (carried from δ = {})", prev.witness, prev.delta);
                }
            }
            out.push(e);
        }
        return Ok(out);
    }
    Ok(est.dial(grid)?.into_iter().map(|row| row[kind as usize].clone()).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HardySobolevReport {
    /// Least-squares slope of `log ω` against `log δ` on the smaller half of the grid.
    pub slope: Option<f64>,
    /// `sup ω(δ)/δ^e` over the grid.
    pub ratio_sup: f64,
    pub exponent: f64,
    /// `(δ, ω(δ), ω(δ)/δ^e)`
    pub rows: Vec<(f64, f64, f64)>,
}

/// Growth of the unitary modulus `ω_n(δ)` against `δ^e`.
pub fn hardy_sobolev_check(
    f: &HoloPoly,
    n: u32,
    p: f64,
    grid: &[f64],
    exponent: f64,
    rule: &SphereRule,
    opts: &ModulusOptions,
) -> Result<HardySobolevReport> {
    let table = modulus_dial(f, grid, n, p, ModulusKind::Unitary, rule, opts)?;
    let rows: Vec<(f64, f64, f64)> =
        table.iter().map(|e| (e.delta, e.value, e.value / e.delta.powf(exponent))).collect();
    let ratio_sup = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let small: Vec<(f64, f64)> = rows
        .iter()
        .take(rows.len().div_ceil(2))
        .filter(|r| r.1 > 0.0)
        .map(|r| (r.0.ln(), r.1.ln()))
        .collect();
    let slope = if small.len() >= 2 {
        let k = small.len() as f64;
        let mx = small.iter().map(|s| s.0).sum::<f64>() / k;
        let my = small.iter().map(|s| s.1).sum::<f64>() / k;
        let sxy: f64 = small.iter().map(|s| (s.0 - mx) * (s.1 - my)).sum();
        let sxx: f64 = small.iter().map(|s| (s.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    } else {
        None
    };
    Ok(HardySobolevReport { slope, ratio_sup, exponent, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::MultiIndex;
    use crate::C64;
    use crate::quad::rule_for_degree;

    fn unit(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn monomial_minus_closed_form() {
        let k = 6;
        let f = HoloPoly::monomial(&[k], unit(1.0));
        let rule = rule_for_degree(1, k as usize).unwrap();
        for p in [1.0, 2.0, 4.0, f64::INFINITY] {
            for delta in [0.01, 0.2, std::f64::consts::PI / k as f64] {
                let e = modulus_estimate(&f, delta, 1, p, ModulusKind::Minus, &rule, &ModulusOptions::default())
                    .unwrap();
                let exact = 2.0 * (k as f64 * delta / 2.0).sin();
                assert!((e.value - exact).abs() < 1e-6, "p={p} δ={delta}: {} vs {exact}", e.value);
            }
        }
    }

    #[test]
    fn minus_rotation_is_not_clamped_at_two() {
        let f = HoloPoly::monomial(&[1], unit(1.0));
        let rule = rule_for_degree(1, 1).unwrap();
        let e = modulus_estimate(&f, 3.0, 1, 2.0, ModulusKind::Minus, &rule, &ModulusOptions::default()).unwrap();
        assert!((e.value - 2.0 * 1.5f64.sin()).abs() < 1e-9, "{}", e.value);
        let e = modulus_estimate(&f, 5.0, 1, 2.0, ModulusKind::Minus, &rule, &ModulusOptions::default()).unwrap();
        assert!((e.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn flat_energy_matches_polynomial_path() {
        let f = HoloPoly::from_terms(
            2,
            5,
            vec![
                (MultiIndex::new(&[1, 0]), unit(1.0)),
                (MultiIndex::new(&[2, 3]), C64::new(0.2, 0.7)),
                (MultiIndex::new(&[0, 4]), C64::new(-0.5, 0.1)),
            ],
        )
        .unwrap();
        let flat = FlatEnergy::new(&f);
        let mu = [C64::from_polar(0.9, 0.3), C64::from_polar(1.0, -1.1)];
        for n in 1..=3 {
            let direct = diagonal_difference(&f, &mu, n).h2_norm();
            assert!((flat.difference_norm(&mu, n) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn nesting_and_constants() {
        let f = HoloPoly::from_terms(
            2,
            4,
            vec![(MultiIndex::new(&[1, 0]), unit(1.0)), (MultiIndex::new(&[1, 3]), C64::new(0.2, 0.7))],
        )
        .unwrap();
        let rule = rule_for_degree(2, 4).unwrap();
        let est = ModulusEstimator::new(&f, 2, 3.0, &rule, &ModulusOptions { budget: 8, ..Default::default() }).unwrap();
        for d in [0.1, 0.6, 1.9] {
            let [a, b, c] = est.estimate_all(d).unwrap();
            assert!(a.value <= b.value && b.value <= c.value);
        }
        let g = HoloPoly::constant(2, unit(3.0));
        let e = ModulusEstimator::new(&g, 1, 2.0, &rule, &ModulusOptions::default()).unwrap();
        assert!(e.estimate_all(0.5).unwrap().iter().all(|x| x.value == 0.0));
    }

    #[test]
    fn dial_is_monotone_and_linear_for_coordinate() {
        let f = HoloPoly::monomial(&[1, 0], unit(1.0));
        let rule = rule_for_degree(2, 1).unwrap();
        let grid: Vec<f64> = (0..10).map(|i| 1e-3 * 1.9f64.powi(i)).collect();
        let rep = hardy_sobolev_check(&f, 1, 2.0, &grid, 1.0, &rule, &ModulusOptions::default()).unwrap();
        assert!(rep.rows.windows(2).all(|w| w[1].1 >= w[0].1));
        assert!((rep.slope.unwrap() - 1.0).abs() < 1e-3);
        assert!(rep.ratio_sup <= 1.0 + 1e-12);
    }
}

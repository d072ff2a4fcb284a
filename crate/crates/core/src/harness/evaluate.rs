//! Per-function evaluation of both sides of every check.

use super::checks::{CheckId, Resolved};
use super::functionals::*;
use crate::error::Result;
use crate::holopoly::{tangential_apply, DiffOp, HoloPoly};
use crate::lpblocks::{best_approx_l2, dyadic_norm, lq_norm, sequence_tail_bound, BlockBasis, DyadicNormSpec};
use crate::moduli::{ModulusEstimator, ModulusKind, ModulusOptions};
use crate::quad::gauss::weighted_panels;
use crate::quad::{RadialRule, SphereRule};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Values below this on both sides are treated as a degenerate pair.
pub const TINY: f64 = 1e-12;

/// Both sides for one function; grid checks keep the worst grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Outcome {
    pub lhs: f64,
    pub rhs: f64,
    /// Grid point (`r`, `δ`, …) of the worst ratio.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<f64>,
}

impl Outcome {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Outcome { lhs, rhs, at: None }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lhs.abs() <= TINY && self.rhs.abs() <= TINY
    }

    /// `rhs` vanishes (or either side is not a number) while `lhs` does not.
    pub fn is_hard_failure(&self) -> bool {
        self.lhs.is_nan() || self.rhs.is_nan() || (self.rhs <= TINY && self.lhs > TINY) || self.rhs.is_infinite()
    }

    pub fn ratio(&self) -> Option<f64> {
        if self.is_degenerate() {
            None
        } else {
            Some(self.lhs / self.rhs)
        }
    }

    /// Largest ratio over grid points; a hard failure anywhere wins.
    pub fn worst(points: impl IntoIterator<Item = (f64, f64, f64)>) -> Outcome {
        let mut best: Option<(f64, Outcome)> = None;
        for (at, lhs, rhs) in points {
            let o = Outcome { lhs, rhs, at: Some(at) };
            if o.is_hard_failure() {
                return o;
            }
            let Some(r) = o.ratio() else { continue };
            if best.as_ref().is_none_or(|b| r > b.0) {
                best = Some((r, o));
            }
        }
        best.map(|b| b.1).unwrap_or(Outcome { lhs: 0.0, rhs: 0.0, at: None })
    }
}

pub struct Ctx<'a> {
    pub id: CheckId,
    pub prm: &'a Resolved,
    pub rule: &'a SphereRule,
    pub basis: &'a BlockBasis,
    pub degree: usize,
    pub budget: usize,
    pub seed: u64,
}

impl<'a> Ctx<'a> {
    fn means(&self, g: &HoloPoly) -> Means<'a> {
        Means::holo(g, self.prm.p, self.rule)
    }

    fn radial_nodes(&self) -> usize {
        RadialRule::default_size(self.degree, self.prm.q)
    }

    /// `‖R^s g‖_{p,q,s−α}`.
    fn radial_mixed(&self, g: &HoloPoly, s: f64) -> f64 {
        let m = self.means(&g.radial_power(s));
        mixed_of(&m, self.prm.q, s - self.prm.alpha, g.dim(), self.radial_nodes())
    }

    fn estimator(&self, g: &HoloPoly, index: usize) -> Result<ModulusEstimator<'a>> {
        let opts = ModulusOptions {
            budget: self.budget,
            seed: self.seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            metrized_minus: false,
        };
        ModulusEstimator::new(g, self.prm.n, self.prm.p, self.rule, &opts)
    }

    fn rn(&self, f: &HoloPoly) -> Means<'a> {
        self.means(&f.radial_power(self.prm.n as f64))
    }
}

const R_GRID: [f64; 7] = [0.0, 0.25, 0.5, 0.75, 0.9, 0.97, 0.99];
const DELTA_GRID: [f64; 6] = [0.01, 0.03, 0.1, 0.3, 0.6, 0.95];

pub fn evaluate(ctx: &Ctx, f: &HoloPoly, index: usize) -> Result<Outcome> {
    use CheckId::*;
    let prm = ctx.prm;
    let (p, q, alpha, n) = (prm.p, prm.q, prm.alpha, prm.n);
    let nf = n as f64;
    let dim = f.dim();
    let deg = ctx.degree;
    let f0 = f.constant_term().norm();
    Ok(match ctx.id {
        BesovDyadic => {
            let spec = DyadicNormSpec { p, q, beta: -alpha };
            Outcome::new(f0 + ctx.radial_mixed(f, prm.s), dyadic_norm(f, &spec, ctx.basis, ctx.rule))
        }
        BesovSIndependence => Outcome::new(ctx.radial_mixed(f, prm.s), ctx.radial_mixed(f, prm.s2)),
        RadialVsDifference => {
            let est = ctx.estimator(f, index)?;
            let h = |t: f64| est.rotation_norm(t);
            Outcome::new(ctx.radial_mixed(f, nf), difference_functional(&h, n, alpha, q, deg))
        }
        RadialVsRotationModulus | RadialVsUnitaryModulus | RadialVsContractionModulus => {
            let kind = match ctx.id {
                RadialVsRotationModulus => ModulusKind::Minus,
                RadialVsUnitaryModulus => ModulusKind::Unitary,
                _ => ModulusKind::Plus,
            };
            let est = ctx.estimator(f, index)?;
            let grid = log_grid(1e-3, 1.0, 49);
            let table: Vec<_> = if kind == ModulusKind::Minus {
                let mut out: Vec<crate::moduli::ModulusEstimate> = Vec::with_capacity(grid.len());
                for &d in &grid {
                    let mut e = est.estimate(d, kind)?;
                    if let Some(prev) = out.last() {
                        e.value = e.value.max(prev.value);
                    }
                    out.push(e);
                }
                out
            } else {
                est.dial(&grid)?.into_iter().map(|r| r[kind as usize].clone()).collect()
            };
            Outcome::new(ctx.radial_mixed(f, nf), modulus_functional(&table, n, alpha, q))
        }
        MultiplierOperator => {
            let t = prm.t;
            let lam: Vec<C64> = (0..=f.max_degree())
                .map(|k| {
                    let k = k as f64;
                    C64::new(if k == 0.0 { 1.0 } else { k.powf(t) * (1.0 + 1.0 / k) }, 0.0)
                })
                .collect();
            let tf = f.hadamard(&lam);
            let lhs = mixed_of(&ctx.means(&tf), q, t - alpha, dim, ctx.radial_nodes());
            Outcome::new(lhs, f0 + ctx.radial_mixed(f, t))
        }
        BestApproximationSequence => {
            let mut terms = Vec::new();
            let mut j = 0u32;
            loop {
                let nu = 1usize << j;
                terms.push(2f64.powf(j as f64 * alpha) * best_approx_l2(f, nu).0);
                if nu >= f.max_degree() {
                    break;
                }
                j += 1;
            }
            let spec = DyadicNormSpec { p: 2.0, q, beta: -alpha };
            Outcome::new(f.h2_norm() + lq_norm(&terms, q), dyadic_norm(f, &spec, ctx.basis, ctx.rule))
        }
        TangentialGradient | TangentialGradientPlus => {
            let k = prm.k;
            let chs = tangential_channels(f, k, ctx.id == TangentialGradientPlus);
            let lhs = if chs.is_empty() {
                0.0
            } else {
                mixed_of(&Means::mixed_sum(&chs, p, ctx.rule), q, k as f64 / 2.0 - alpha, dim, ctx.radial_nodes())
            };
            let high = f - &f.truncate(k.saturating_sub(1));
            let s = alpha.floor() + 1.0;
            Outcome::new(lhs, ctx.radial_mixed(&high, s))
        }
        HardySobolevGrowth => {
            let est = ctx.estimator(f, index)?;
            let grid = log_grid(1e-3, 0.5, 25);
            let rows = est.dial(&grid)?;
            let lhs = rows.iter().map(|r| r[1].value / r[1].delta.powf(nf)).fold(0.0, f64::max);
            Outcome::new(lhs, ctx.rn(f).at(1.0))
        }
        RadialByGradient => {
            let zero = vec![C64::default(); dim];
            let low: f64 = (1..n as usize).map(|k| f.gradient_norm(k, &zero)).sum();
            let rn = ctx.rn(f);
            let grad = Means::channels(&f.derivative_channels(n as usize), p, ctx.rule);
            Outcome::worst(R_GRID.iter().chain(&[1.0]).map(|&r| (r, rn.at(r), low + grad.at(r))))
        }
        GradientByRadial => {
            let rn = ctx.rn(f);
            let grad = Means::channels(&f.derivative_channels(n as usize), p, ctx.rule);
            Outcome::worst([0.3, 0.5, 0.7, 0.9, 0.97, 1.0].map(|r| (r, grad.at(r), rn.at(r))))
        }
        RadialDerivativeMonotone => {
            let r1 = ctx.means(&f.radial()).at(1.0);
            let r2 = ctx.means(&f.radial().radial()).at(1.0);
            Outcome::new(r1, r2)
        }
        WeightedGradientByDifference => {
            let grad = Means::channels(&f.derivative_channels(n as usize), p, ctx.rule);
            let e = q * (nf - alpha) - 1.0;
            let lhs = weighted_radial(&|r| grad.at(r).powf(q), 0.0, 1.0, e, deg).powf(1.0 / q);
            let est = ctx.estimator(f, index)?;
            let h = |t: f64| est.rotation_norm(t);
            Outcome::new(lhs, difference_functional(&h, n, alpha, q, deg))
        }
        GradientGrowthByDifference => {
            let grad = Means::channels(&f.derivative_channels(n as usize), p, ctx.rule);
            let est = ctx.estimator(f, index)?;
            let h = |t: f64| est.rotation_norm(t);
            Outcome::worst(R_GRID.map(|r| {
                let w = 1.0 - r;
                let integral = weighted_panels(0.0, w, 0.0, 0.0, panels_for(deg), 10, h);
                (r, grad.at(r), integral / w.powf(nf + 1.0))
            }))
        }
        ContractionModulusByRadial => {
            let est = ctx.estimator(f, index)?;
            let rn = ctx.rn(f);
            let mut pts = Vec::new();
            for d in DELTA_GRID {
                let lhs = est.estimate_all(d)?[2].value;
                pts.push((d, lhs, weighted_radial(&|r| rn.at(r), 1.0 - d, 1.0, nf - 1.0, deg)));
            }
            Outcome::worst(pts)
        }
        DilatedContractionModulus => {
            let rn = ctx.rn(f);
            let mut pts = Vec::new();
            for d in DELTA_GRID {
                let est = ctx.estimator(&f.dilate(1.0 - d)?, index)?;
                pts.push((d, est.estimate_all(d)?[2].value, d.powf(nf) * rn.at(1.0 - d)));
            }
            Outcome::worst(pts)
        }
        DifferenceGrowthByRadial => {
            let rn = ctx.rn(f);
            let mut pts = Vec::new();
            for r in [0.3, 0.5, 0.7, 0.9, 0.97] {
                let w = 1.0 - r;
                let est = ctx.estimator(&f.dilate(r)?, index)?;
                let rbar = 1.0 - w / 2f64.powf(nf);
                pts.push((r, est.estimate_all(w)?[2].value, w.powf(nf) * rn.at(rbar)));
            }
            Outcome::worst(pts)
        }
        DifferenceOfDilation => {
            let rn = ctx.rn(f);
            let mut pts = Vec::new();
            for r in [0.3, 0.5, 0.7, 0.9, 0.97] {
                let g = f - &f.dilate(r)?;
                let est = ctx.estimator(&g, index)?;
                pts.push((r, est.estimate_all(1.0 - r)?[2].value, weighted_radial(&|s| rn.at(s), r, 1.0, nf - 1.0, deg)));
            }
            Outcome::worst(pts)
        }
        WeightedDerivativeComposition => {
            let m = f.to_mixed();
            let (xs, ys) = composition_words(dim);
            let mut pts = Vec::new();
            for x in &xs {
                let weight: f64 = x.iter().map(|o| o.weight()).sum();
                for y in &ys {
                    let yf = tangential_apply(&m, y);
                    let word: Vec<DiffOp> = x.iter().chain(y.iter()).copied().collect();
                    let xyf = tangential_apply(&m, &word);
                    let lhs_m = Means::mixed(&xyf, p, ctx.rule);
                    let rhs_m = Means::mixed(&yf, p, ctx.rule);
                    for r in [0.55, 0.7, 0.85, 0.95, 0.99] {
                        let rbar = r + (1.0 - r) / 4.0;
                        pts.push((r, lhs_m.at(r), (1.0 - r).powf(-weight) * rhs_m.at(rbar)));
                    }
                }
            }
            Outcome::worst(pts)
        }
        HardyIntegralOperator => hardy_integral(ctx, f),
        RadialTailByDifference | RadialGrowthByDifference => {
            let rn = ctx.rn(f);
            let est = ctx.estimator(f, index)?;
            let nodes = 24 + deg;
            let growth = ctx.id == RadialGrowthByDifference;
            Outcome::worst([0.0, 0.5, 0.8, 0.95, 0.99].map(|r| {
                let w = 1.0 - r;
                let diff = jacobi_left(
                    &|u| {
                        let t = w * u;
                        (est.rotation_norm(t) / t.powf(nf)).powf(q)
                    },
                    alpha,
                    nodes,
                )
                .powf(1.0 / q);
                if growth {
                    (r, rn.at(r), diff)
                } else {
                    let tail = jacobi_left(&|u| rn.at(1.0 - w * u).powf(q), alpha, nodes).powf(1.0 / q);
                    (r, tail, diff)
                }
            }))
        }
        HardyNormByRadialIntegral => {
            let k = weighted_radial(&|r| ctx.rn(f).at(r), 0.0, 1.0, nf - 1.0, deg);
            Outcome::new(ctx.means(f).at(1.0), f0 + k)
        }
        HardyByBlocks => {
            let blocks: f64 = ctx.basis.block_norms(f, p, ctx.rule).iter().sum();
            Outcome::new(ctx.means(f).at(1.0), blocks)
        }
        PhiLipschitzInclusion => {
            let est = ctx.estimator(f, index)?;
            let phi = |t: f64| prm.phi.eval(t);
            let lhs = if q.is_infinite() {
                sup_log_grid(&|t| est.rotation_norm(t) / phi(t), 1e-6, 1.0)
            } else {
                log_measure(&|t| (est.rotation_norm(t) / phi(t)).powf(q)).powf(1.0 / q)
            };
            let rn = ctx.rn(f);
            let rhs = crate::quad::phi_seminorm_profile(&|r| rn.at(r), &phi, n, q)?;
            Outcome::new(lhs, rhs)
        }
        ModulusNesting => {
            let est = ctx.estimator(f, index)?;
            let mut pts = Vec::new();
            for d in log_grid(1e-3, 1.9, 12) {
                let [m, u, c] = est.estimate_all(d)?;
                pts.push((d, m.value, u.value));
                pts.push((d, u.value, c.value));
            }
            Outcome::worst(pts)
        }
        TailSequence => {
            let norms = ctx.basis.block_norms(f, p, ctx.rule);
            let s: Vec<C64> = (0..norms.len()).map(|nu| C64::new(norms[nu..].iter().sum(), 0.0)).collect();
            let (l, r) = sequence_tail_bound(&s, alpha, q)?;
            Outcome::new(l, r)
        }
        BlockRadialWindow => {
            let e = f.part_energies();
            let mut pts = Vec::new();
            for s in [0.5 * prm.s, prm.s, 2.0 * prm.s] {
                let (lo, hi) = (2f64.powf(-s.abs() - 1.0), 2f64.powf(s.abs() + 1.0));
                let total: f64 = e.iter().sum();
                for nu in 2..ctx.basis.len() {
                    let plain: f64 = (0..e.len()).map(|k| e[k] * ctx.basis.weight(nu, k).powi(2)).sum();
                    if plain <= 1e-28 * total {
                        continue;
                    }
                    let lifted: f64 =
                        (0..e.len()).map(|k| e[k] * (ctx.basis.weight(nu, k) * (k as f64).powf(s)).powi(2)).sum();
                    let ratio = lifted.sqrt() / (2f64.powf(nu as f64 * s) * plain.sqrt());
                    pts.push((s, (ratio / hi).max(lo / ratio), 1.0));
                }
            }
            Outcome::worst(pts)
        }
        MonotoneMeans => {
            let m = ctx.means(f);
            let rs: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
            let vals: Vec<f64> = rs.iter().map(|&r| m.at(r)).collect();
            Outcome::worst((0..20).map(|i| (rs[i], vals[i], vals[i + 1])))
        }
    })
}

/// Operator words `X` (outer) and `Y` (inner) for the composition bound.
pub fn composition_words(dim: usize) -> (Vec<Vec<DiffOp>>, Vec<Vec<DiffOp>>) {
    use DiffOp::*;
    let mut xs = vec![vec![R], vec![R, R]];
    let mut ys = vec![vec![], vec![R]];
    if dim >= 2 {
        xs.extend([vec![T(0, 1)], vec![TBar(0, 1)], vec![R, T(0, 1)], vec![T(0, 1), TBar(0, 1)]]);
        ys.push(vec![T(0, 1)]);
    }
    (xs, ys)
}

/// Both sides for the piecewise-constant profile `F = M_p(·, f)` sampled at piece midpoints.
fn hardy_integral(ctx: &Ctx, f: &HoloPoly) -> Outcome {
    let (p, a, b) = (ctx.prm.p, ctx.prm.alpha, ctx.prm.beta);
    let pieces = ctx.degree.max(4);
    let m = ctx.means(f);
    let h = 1.0 / pieces as f64;
    let values: Vec<f64> = (0..pieces).map(|j| m.at((j as f64 + 0.5) * h)).collect();
    let inner = |r: f64| -> f64 {
        let mut acc = 0.0;
        for (j, v) in values.iter().enumerate() {
            let lo = j as f64 * h;
            if lo >= r {
                break;
            }
            let hi = (lo + h).min(r);
            acc += v * ((r - lo).powf(b) - (r - hi).powf(b)) / b;
        }
        acc
    };
    let mut lhs = 0.0;
    for j in 0..pieces {
        let lo = j as f64 * h;
        lhs += if j + 1 == pieces {
            weighted_panels(lo, 1.0, 0.0, a - 1.0, 1, 12, |r| inner(r).powf(p))
        } else {
            weighted_panels(lo, lo + h, 0.0, 0.0, 1, 12, |r| (1.0 - r).powf(a - 1.0) * inner(r).powf(p))
        };
    }
    let e = a + b * p;
    let rhs: f64 = values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let lo = j as f64 * h;
            v.powf(p) * ((1.0 - lo).powf(e) - (1.0 - lo - h).max(0.0).powf(e)) / e
        })
        .sum();
    Outcome::new(lhs.powf(1.0 / p), rhs.powf(1.0 / p))
}

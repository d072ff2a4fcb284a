//! Registered checks: identifiers, statements, categories and defaults.

use super::family::{FamilySpec, TestFamily};
use crate::error::{Error, Result};
use crate::quad::PhiWeight;
use serde::{Deserialize, Serialize};

/// How a check turns per-function `(lhs, rhs)` pairs into a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "type")]
pub enum Category {
    /// Two-sided: the window `max/min` of `lhs/rhs` must drift by less than the
    /// tolerance when the degree (and the sample budget) doubles.
    Equivalence,
    /// One-sided: `sup lhs/rhs` must be finite and drift by less than the tolerance.
    Inequality,
    /// `lhs/rhs ≤ bound · (1 + slack)` for every function.
    ConstantFree { bound: f64, slack: f64 },
}

macro_rules! checks {
    ($( $variant:ident => $name:literal ),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CheckId { $($variant),* }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(CheckId::$variant => $name),* }
            }
        }
    };
}

checks! {
    BesovDyadic => "besov-dyadic",
    BesovSIndependence => "besov-s-independence",
    RadialVsDifference => "radial-vs-difference",
    RadialVsRotationModulus => "radial-vs-rotation-modulus",
    RadialVsUnitaryModulus => "radial-vs-unitary-modulus",
    RadialVsContractionModulus => "radial-vs-contraction-modulus",
    MultiplierOperator => "multiplier-operator",
    BestApproximationSequence => "best-approximation-sequence",
    TangentialGradient => "tangential-gradient",
    TangentialGradientPlus => "tangential-gradient-plus",
    HardySobolevGrowth => "hardy-sobolev-growth",
    RadialByGradient => "radial-by-gradient",
    GradientByRadial => "gradient-by-radial",
    RadialDerivativeMonotone => "radial-derivative-monotone",
    WeightedGradientByDifference => "weighted-gradient-by-difference",
    GradientGrowthByDifference => "gradient-growth-by-difference",
    ContractionModulusByRadial => "contraction-modulus-by-radial",
    DilatedContractionModulus => "dilated-contraction-modulus",
    DifferenceGrowthByRadial => "difference-growth-by-radial",
    DifferenceOfDilation => "difference-of-dilation",
    WeightedDerivativeComposition => "weighted-derivative-composition",
    HardyIntegralOperator => "hardy-integral-operator",
    RadialTailByDifference => "radial-tail-by-difference",
    RadialGrowthByDifference => "radial-growth-by-difference",
    HardyNormByRadialIntegral => "hardy-norm-by-radial-integral",
    HardyByBlocks => "hardy-by-blocks",
    PhiLipschitzInclusion => "phi-lipschitz-inclusion",
    ModulusNesting => "modulus-nesting",
    TailSequence => "tail-sequence",
    BlockRadialWindow => "block-radial-window",
    MonotoneMeans => "monotone-means",
}

impl std::str::FromStr for CheckId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL.iter().copied().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = CheckId::ALL.iter().map(|c| c.name()).collect();
            Error::Config(format!("unknown check id {s:?}; registered ids: {}", names.join(", ")))
        })
    }
}

impl std::fmt::Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl CheckId {
    /// The statement being measured.
    pub fn anchor(self) -> &'static str {
        use CheckId::*;
        match self {
            BesovDyadic => "Λ^{p,q}_α = B^{p,q}_{−α}: |f(0)| + ‖R^s f‖_{p,q,s−α} ≍ ‖{2^{να}‖W_ν*f‖_p}‖_{ℓ^q} for s > α",
            BesovSIndependence => "for s₁, s₂ > α: ‖R^{s₁} f‖_{p,q,s₁−α} ≍ ‖R^{s₂} f‖_{p,q,s₂−α}",
            RadialVsDifference => "0 < α < n: ‖R^n f‖_{p,q,n−α} ≍ (∫_0^1 [‖Δ^n_t f‖_p / t^α]^q dt/t)^{1/q}",
            RadialVsRotationModulus => "0 < α < n: ‖R^n f‖_{p,q,n−α} ≍ (∫_0^1 [ω^−_n(δ,f)_p / δ^α]^q dδ/δ)^{1/q}",
            RadialVsUnitaryModulus => "0 < α < n: ‖R^n f‖_{p,q,n−α} ≍ (∫_0^1 [ω_n(δ,f)_p / δ^α]^q dδ/δ)^{1/q}",
            RadialVsContractionModulus => "0 < α < n: ‖R^n f‖_{p,q,n−α} ≍ (∫_0^1 [ω^+_n(δ,f)_p / δ^α]^q dδ/δ)^{1/q}",
            MultiplierOperator => "Tf = Σ λ_k f_k with λ_k = k^t(a₁ + a₂/k), t > α: ‖Tf‖_{p,q,t−α} ≍ |f(0)| + ‖R^t f‖_{p,q,t−α}",
            BestApproximationSequence => "‖f‖_p + ‖{2^{να} E_{2^ν}(f)_p}‖_{ℓ^q} ≍ ‖{2^{να}‖W_ν*f‖_p}‖_{ℓ^q}",
            TangentialGradient => "k > 2α: ‖∇^k_T f‖_{p,q,k/2−α} ≍ ‖R^s f‖_{p,q,s−α} on degrees ≥ k",
            TangentialGradientPlus => "k > 2α: ‖∇^k_{T+} f‖_{p,q,k/2−α} ≍ ‖R^s f‖_{p,q,s−α} on degrees ≥ k",
            HardySobolevGrowth => "sup_δ ω_n(δ,f)_p / δ^n ≍ ‖R^n f‖_p",
            RadialByGradient => "M_p(r,R^s f) ≤ C Σ_{k=1}^{s−1} ∇_k(f)(0) + M_p(r,∇_s(f))",
            GradientByRadial => "M_p(r,∇_n(f)) ≤ C M_p(r,R^n f), 1/4 < r ≤ 1",
            RadialDerivativeMonotone => "‖Rf‖_p ≤ ‖R²f‖_p",
            WeightedGradientByDifference => "∫_0^1 M_p^q(r,∇_n(f)) ψ(1−r) dr ≤ C ∫_0^1 [t^{−n}‖Δ^n_t f‖_p]^q ψ(t) dt, ψ(t) = t^{q(n−α)−1}",
            GradientGrowthByDifference => "M_p(r,∇_n(f)) ≤ C (1−r)^{−n−1} ∫_0^{1−r} ‖Δ^n_t f‖_p dt",
            ContractionModulusByRadial => "ω^+_n(δ,f)_p ≤ C ∫_{1−δ}^1 M_p(r,R^n f)(1−r)^{n−1} dr",
            DilatedContractionModulus => "ω^+_n(δ,f_{1−δ})_p ≤ C δ^n M_p(1−δ,R^n f)",
            DifferenceGrowthByRadial => "‖U−I‖ < 1−r: M_p(r,Δ^n_U f) ≤ C (1−r)^n M_p(1−(1−r)/2^n, R^n f)",
            DifferenceOfDilation => "‖U−I‖ < 1−r, 1/4 < r < 1: ‖Δ^n_U(f−f_r)‖_p ≤ C ∫_r^1 (1−s)^{n−1} M_p(s,R^n f) ds",
            WeightedDerivativeComposition => "X of weight m, 1/2 < r < 1: M_p(r,XYf) ≤ C (1−r)^{−m} M_p(r + (1−r)/4, Yf)",
            HardyIntegralOperator => "∫_0^1 (1−r)^{α−1} (∫_0^r (r−t)^{β−1} F(t) dt)^p dr ≤ C ∫_0^1 (1−r)^{α+βp−1} F(r)^p dr",
            RadialTailByDifference => "α > −1: ∫_r^1 M_p^q(ρ,R^n f)(1−ρ)^α dρ ≤ C ∫_0^{1−r} [t^{−n}‖Δ^n_t f‖_p]^q t^α dt",
            RadialGrowthByDifference => "α > −1: M_p(r,R^n f) ≤ C {(1−r)^{−α−1} ∫_0^{1−r} [t^{−n}‖Δ^n_t f‖_p]^q t^α dt}^{1/q}",
            HardyNormByRadialIntegral => "‖f‖_p ≤ C (|f(0)| + K), K = ∫_0^1 (1−r)^{n−1} M_p(r,R^n f) dr",
            HardyByBlocks => "‖f‖_p ≤ Σ_ν ‖W_ν*f‖_p",
            PhiLipschitzInclusion => "φ(x)/x^α increasing, 0 < α < n: (∫_0^1 [‖Δ^n_t f‖_p / φ(t)]^q dt/t)^{1/q} ≤ C (∫_0^1 [(1−r)^n M_p(r,R^n f) / φ(1−r)]^q dr/(1−r))^{1/q}",
            ModulusNesting => "ω^−_n(δ,f)_p ≤ ω_n(δ,f)_p ≤ ω^+_n(δ,f)_p",
            TailSequence => "‖{2^{να} s_{ν−1}}‖_{ℓ^q} ≤ (1−2^{−α})^{−1} ‖{2^{να}|s_{ν−1}−s_ν|}‖_{ℓ^q}, s_ν = Σ_{k≥ν} ‖W_k*f‖_p",
            BlockRadialWindow => "ν ≥ 2, p = 2: ‖W_ν*R^s f‖_2 / (2^{νs}‖W_ν*f‖_2) ∈ [2^{−|s|−1}, 2^{|s|+1}]",
            MonotoneMeans => "r ↦ M_p(r,f) is nondecreasing",
        }
    }

    pub fn category(self) -> Category {
        use CheckId::*;
        match self {
            BesovDyadic | BesovSIndependence | RadialVsDifference | RadialVsRotationModulus
            | RadialVsUnitaryModulus | RadialVsContractionModulus | MultiplierOperator
            | BestApproximationSequence | TangentialGradient | TangentialGradientPlus | HardySobolevGrowth => {
                Category::Equivalence
            }
            RadialDerivativeMonotone | HardyByBlocks | ModulusNesting | BlockRadialWindow => {
                Category::ConstantFree { bound: 1.0, slack: 1e-12 }
            }
            TailSequence => Category::ConstantFree { bound: 1.0, slack: 1e-12 },
            MonotoneMeans => Category::ConstantFree { bound: 1.0, slack: 1e-10 },
            _ => Category::Inequality,
        }
    }

    /// Whether a sampled modulus enters either side (budget doubling applies).
    pub fn uses_sampling(self) -> bool {
        use CheckId::*;
        matches!(
            self,
            RadialVsUnitaryModulus
                | RadialVsContractionModulus
                | HardySobolevGrowth
                | ContractionModulusByRadial
                | DilatedContractionModulus
                | DifferenceGrowthByRadial
                | DifferenceOfDilation
                | ModulusNesting
        )
    }

    /// Extra polynomial degree the sphere rule must absorb (mixed operators).
    pub fn rule_margin(self, params: &Resolved) -> usize {
        match self {
            CheckId::TangentialGradient | CheckId::TangentialGradientPlus => params.k,
            _ => 0,
        }
    }

    pub fn default_params(self) -> CheckParams {
        use CheckId::*;
        let mut c = CheckParams::default();
        match self {
            BesovDyadic => c.s = Some(1.0),
            BesovSIndependence => {
                c.s = Some(1.0);
                c.s2 = Some(2.0);
            }
            MultiplierOperator => c.t = Some(1.5),
            RadialByGradient => c.n = Some(2),
            TangentialGradient | TangentialGradientPlus => {
                c.alpha = Some(0.75);
                c.k = Some(2);
            }
            RadialDerivativeMonotone | HardyByBlocks => c.p = Some(1.0),
            MonotoneMeans => c.p = Some(3.0),
            HardyIntegralOperator => {
                c.alpha = Some(1.0);
                c.beta = Some(1.0);
            }
            PhiLipschitzInclusion => {
                c.alpha = Some(0.25);
                c.phi = Some(PhiWeight::Power { a: 0.5 });
            }
            _ => {}
        }
        c
    }

    pub fn default_family(self, seed: u64, degree: usize) -> TestFamily {
        use CheckId::*;
        let (dim, count) = match self {
            RadialDerivativeMonotone | HardyByBlocks => (2, 200),
            ModulusNesting | TailSequence => (2, 200),
            BlockRadialWindow => (2, 100),
            MonotoneMeans => (2, 20),
            TangentialGradientPlus => (2, 10),
            _ => (2, 50),
        };
        TestFamily::new(FamilySpec::RandomDecay { gamma: 1.5 }, count, seed, dim, degree)
    }
}

/// Optional overrides; unset fields take the check's defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CheckParams {
    #[serde(default, with = "super::exponent_opt", skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, with = "super::exponent_opt", skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiWeight>,
}

impl CheckParams {
    /// `self` with unset fields taken from `base`.
    pub fn over(&self, base: &CheckParams) -> CheckParams {
        CheckParams {
            p: self.p.or(base.p),
            q: self.q.or(base.q),
            alpha: self.alpha.or(base.alpha),
            beta: self.beta.or(base.beta),
            s: self.s.or(base.s),
            s2: self.s2.or(base.s2),
            t: self.t.or(base.t),
            n: self.n.or(base.n),
            k: self.k.or(base.k),
            budget: self.budget.or(base.budget),
            phi: self.phi.clone().or_else(|| base.phi.clone()),
        }
    }
}

/// Fully resolved parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Resolved {
    #[serde(with = "super::exponent")]
    pub p: f64,
    #[serde(with = "super::exponent")]
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
    pub s2: f64,
    pub t: f64,
    pub n: u32,
    pub k: usize,
    pub budget: usize,
    pub phi: PhiWeight,
}

impl Resolved {
    pub fn from_params(c: &CheckParams) -> Self {
        Resolved {
            p: c.p.unwrap_or(2.0),
            q: c.q.unwrap_or(2.0),
            alpha: c.alpha.unwrap_or(0.5),
            beta: c.beta.unwrap_or(1.0),
            s: c.s.unwrap_or(1.0),
            s2: c.s2.unwrap_or(2.0),
            t: c.t.unwrap_or(1.5),
            n: c.n.unwrap_or(1),
            k: c.k.unwrap_or(2),
            budget: c.budget.unwrap_or(16),
            phi: c.phi.clone().unwrap_or(PhiWeight::Power { a: 0.5 }),
        }
    }

    /// Hypotheses each check needs, verified before any computation.
    pub fn validate(&self, id: CheckId, dim: usize) -> Result<()> {
        use CheckId::*;
        let bad = |m: String| Err(Error::Config(format!("{id}: {m}")));
        if !(self.p >= 1.0) || !(self.q >= 1.0) {
            return bad(format!("p = {}, q = {} must lie in [1, ∞]", self.p, self.q));
        }
        if self.n == 0 {
            return bad("order n must be ≥ 1".into());
        }
        if self.budget == 0 {
            return bad("sample budget must be ≥ 1".into());
        }
        match id {
            BesovDyadic | MultiplierOperator if !(self.alpha > 0.0) => bad(format!("α = {} must be positive", self.alpha)),
            BesovDyadic if !(self.s > self.alpha) => bad(format!("need s > α (s = {}, α = {})", self.s, self.alpha)),
            BesovSIndependence if !(self.s > self.alpha && self.s2 > self.alpha) => {
                bad(format!("need s, s2 > α (s = {}, s2 = {}, α = {})", self.s, self.s2, self.alpha))
            }
            RadialVsDifference | RadialVsRotationModulus | RadialVsUnitaryModulus | RadialVsContractionModulus
                if !(self.alpha > 0.0 && self.alpha < self.n as f64) =>
            {
                bad(format!("need 0 < α < n (α = {}, n = {})", self.alpha, self.n))
            }
            MultiplierOperator if !(self.t > self.alpha) => bad(format!("need t > α (t = {}, α = {})", self.t, self.alpha)),
            BestApproximationSequence if self.p != 2.0 => bad("only p = 2 is supported (exact projection)".into()),
            BlockRadialWindow if self.p != 2.0 => bad("the outright window holds for p = 2".into()),
            TangentialGradient | TangentialGradientPlus => {
                if dim < 2 {
                    bad("tangential derivatives vanish for N = 1".into())
                } else if !(self.k as f64 > 2.0 * self.alpha) || !(self.alpha > 0.0) {
                    bad(format!("need k > 2α > 0 (k = {}, α = {})", self.k, self.alpha))
                } else {
                    Ok(())
                }
            }
            WeightedGradientByDifference if !(self.alpha < self.n as f64) || self.q.is_infinite() => {
                bad(format!("need α < n and q < ∞ (α = {}, n = {}, q = {})", self.alpha, self.n, self.q))
            }
            RadialTailByDifference | RadialGrowthByDifference if !(self.alpha > -1.0) || self.q.is_infinite() => {
                bad(format!("need α > −1 and q < ∞ (α = {}, q = {})", self.alpha, self.q))
            }
            HardyIntegralOperator if !(self.alpha > 0.0 && self.beta > 0.0) || self.p.is_infinite() => {
                bad(format!("need α, β > 0 and p < ∞ (α = {}, β = {}, p = {})", self.alpha, self.beta, self.p))
            }
            TailSequence if !(self.alpha > 0.0) => bad(format!("α = {} must be positive", self.alpha)),
            PhiLipschitzInclusion => {
                if !(self.alpha > 0.0 && self.alpha < self.n as f64) {
                    bad(format!("α = {} must be positive", self.alpha))
                } else if !self.phi.ratio_increasing(self.alpha) {
                    bad(format!("φ(x)/x^{} is not increasing on (0, 1]", self.alpha))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

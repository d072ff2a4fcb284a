//! Running checks over families and rendering verdicts and reports.

use super::checks::{Category, CheckId, CheckParams, Resolved};
use super::evaluate::{evaluate, Ctx, Outcome};
use super::family::{FamilySpec, TestFamily};
use crate::error::{Error, Result};
use crate::holopoly::HoloPoly;
use crate::lpblocks::BlockBasis;
use crate::par;
use crate::quad::rule_for_degree;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Largest accepted relative change of the window (or constant) under doubling.
pub const DRIFT_TOLERANCE: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    Pass,
    Fail,
    HardFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FunctionRecord {
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<f64>,
    /// Same function truncated to half the degree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half: Option<Outcome>,
    /// Same function with twice the modulus sample budget.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doubled_budget: Option<Outcome>,
}

/// Ratio summary over the non-degenerate functions of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub count: usize,
    pub degenerate: usize,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    /// `max/min`.
    pub window: f64,
}

impl Summary {
    fn of(outcomes: &[Outcome]) -> Summary {
        let mut ratios: Vec<f64> = outcomes.iter().filter_map(|o| o.ratio()).collect();
        let degenerate = outcomes.len() - ratios.len();
        ratios.sort_by(f64::total_cmp);
        let n = ratios.len();
        if n == 0 {
            return Summary { count: 0, degenerate, min: 0.0, max: 0.0, median: 0.0, window: 1.0 };
        }
        let median = if n % 2 == 1 { ratios[n / 2] } else { 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]) };
        let (min, max) = (ratios[0], ratios[n - 1]);
        Summary { count: n, degenerate, min, max, median, window: max / min }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RatioStats {
    #[serde(flatten)]
    pub full: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half: Option<Summary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doubled_budget: Option<Summary>,
    /// Relative change of the verdict statistic from degree `D/2` to `D`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_drift: Option<f64>,
    /// Relative change of the verdict statistic when the sample budget doubles.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_drift: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub id: String,
    /// Statement of the measured relation (report key fixed by the report format).
    #[serde(rename = "paperAnchor")]
    pub anchor: String,
    pub kind: Category,
    pub params: Resolved,
    pub family: TestFamily,
    pub degree: usize,
    pub per_function: Vec<FunctionRecord>,
    pub ratio_stats: RatioStats,
    pub verdict: Verdict,
    pub reason: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, f64>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Partial family settings layered over a check's default family.
/// (Unknown keys cannot be rejected here: the generator fields are flattened in.)
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyOverride {
    #[serde(default, flatten, skip_serializing_if = "Option::is_none")]
    pub spec: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl FamilyOverride {
    fn apply(&self, f: &mut TestFamily) {
        if let Some(s) = &self.spec {
            f.spec = s.clone();
        }
        if let Some(c) = self.count {
            f.count = c;
        }
        if let Some(d) = self.dim {
            f.dim = d;
        }
        if let Some(s) = self.seed {
            f.seed = s;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CheckEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyOverride>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<CheckParams>,
}

impl CheckEntry {
    pub fn new(id: CheckId) -> Self {
        CheckEntry { id: id.name().to_string(), family: None, params: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_name")]
    pub suite: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default)]
    pub checks: Vec<CheckEntry>,
}

fn default_name() -> String {
    "custom".into()
}

fn default_degree() -> usize {
    32
}

impl SuiteConfig {
    /// Every registered check with its default family and parameters.
    pub fn default_suite(seed: u64, degree: usize) -> Self {
        SuiteConfig {
            suite: "default".into(),
            seed,
            degree,
            checks: CheckId::ALL.iter().map(|&id| CheckEntry::new(id)).collect(),
        }
    }

    /// A named suite: `default`, `empty`, or a single check id.
    pub fn named(name: &str, seed: u64, degree: usize) -> Result<Self> {
        match name {
            "default" => Ok(Self::default_suite(seed, degree)),
            "empty" => Ok(SuiteConfig { suite: "empty".into(), seed, degree, checks: Vec::new() }),
            id => {
                let id: CheckId = id.parse()?;
                Ok(SuiteConfig { suite: id.name().into(), seed, degree, checks: vec![CheckEntry::new(id)] })
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("suite configuration: {e}")))
    }

    /// Resolves ids and parameters without computing anything.
    pub fn validate(&self) -> Result<()> {
        if self.degree < 2 {
            return Err(Error::Config(format!("degree {} must be ≥ 2 (the half-degree run needs ≥ 1)", self.degree)));
        }
        for e in &self.checks {
            prepare(e, self.seed, self.degree)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub degree: usize,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    /// Process exit status: `0` when every verdict passes, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// `report.json` plus one CSV per check (suffixed by position when an id repeats).
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json() + "\n")?;
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        for c in &self.checks {
            let k = seen.entry(&c.id).or_insert(0);
            let name = if *k == 0 { format!("{}.csv", c.id) } else { format!("{}-{}.csv", c.id, k) };
            *k += 1;
            std::fs::write(dir.join(name), c.to_csv())?;
        }
        Ok(())
    }
}

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

impl CheckResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,lhs,rhs,ratio,at,lhs_half,rhs_half,ratio_half,lhs_budget,rhs_budget,ratio_budget\n");
        for r in &self.per_function {
            let half = r.half.as_ref();
            let bud = r.doubled_budget.as_ref();
            let _ = writeln!(
                s,
                "{},{:e},{:e},{},{},{},{},{},{},{},{}",
                r.index,
                r.lhs,
                r.rhs,
                num(r.ratio),
                num(r.at),
                num(half.map(|o| o.lhs)),
                num(half.map(|o| o.rhs)),
                num(half.and_then(|o| o.ratio())),
                num(bud.map(|o| o.lhs)),
                num(bud.map(|o| o.rhs)),
                num(bud.and_then(|o| o.ratio())),
            );
        }
        s
    }
}

struct Prepared {
    id: CheckId,
    prm: Resolved,
    family: TestFamily,
}

fn prepare(entry: &CheckEntry, seed: u64, degree: usize) -> Result<Prepared> {
    let id: CheckId = entry.id.parse()?;
    let params = entry.params.clone().unwrap_or_default().over(&id.default_params());
    let prm = Resolved::from_params(&params);
    let mut family = id.default_family(seed, degree);
    if let Some(o) = &entry.family {
        o.apply(&mut family);
    }
    family.max_degree = degree;
    family.validate()?;
    prm.validate(id, family.dim)?;
    Ok(Prepared { id, prm, family })
}

fn evaluate_all(id: CheckId, prm: &Resolved, fs: &[HoloPoly], degree: usize, budget: usize, seed: u64) -> Result<Vec<Outcome>> {
    let Some(first) = fs.first() else { return Ok(Vec::new()) };
    let rule = rule_for_degree(first.dim(), degree + id.rule_margin(prm))?;
    let basis = BlockBasis::new(degree);
    let ctx = Ctx { id, prm, rule: &rule, basis: &basis, degree, budget, seed };
    let idx: Vec<usize> = (0..fs.len()).collect();
    par::map(&idx, |&i| evaluate(&ctx, &fs[i], i)).into_iter().collect()
}

fn drift(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a / b - 1.0).abs()
    }
}

/// One check over its family at `degree`, `degree/2` and (for sampled moduli) doubled budget.
pub fn run_check(entry: &CheckEntry, seed: u64, degree: usize) -> Result<CheckResult> {
    if degree < 2 {
        return Err(Error::Config(format!("degree {degree} must be ≥ 2")));
    }
    let Prepared { id, prm, family } = prepare(entry, seed, degree)?;
    let fs = family.generate()?;
    let category = id.category();
    let stable = !matches!(category, Category::ConstantFree { .. });
    let full = evaluate_all(id, &prm, &fs, degree, prm.budget, seed)?;
    let (half, doubled) = if stable {
        let h = degree / 2;
        let truncated: Vec<HoloPoly> = fs.iter().map(|f| f.truncate(h).with_max_degree(h)).collect();
        let half = evaluate_all(id, &prm, &truncated, h, prm.budget, seed)?;
        let doubled =
            if id.uses_sampling() { Some(evaluate_all(id, &prm, &fs, degree, 2 * prm.budget, seed)?) } else { None };
        (Some(half), doubled)
    } else {
        (None, None)
    };
    log::info!("{id}: {} functions evaluated", fs.len());

    let per_function: Vec<FunctionRecord> = full
        .iter()
        .enumerate()
        .map(|(i, o)| FunctionRecord {
            index: i,
            lhs: o.lhs,
            rhs: o.rhs,
            ratio: o.ratio(),
            at: o.at,
            half: half.as_ref().map(|h| h[i].clone()),
            doubled_budget: doubled.as_ref().map(|d| d[i].clone()),
        })
        .collect();

    let s_full = Summary::of(&full);
    let s_half = half.as_deref().map(|h| Summary::of(h));
    let s_bud = doubled.as_deref().map(|d| Summary::of(d));
    let stat = |s: &Summary| match category {
        Category::Equivalence => s.window,
        _ => s.max,
    };
    let degree_drift = s_half.as_ref().map(|h| drift(stat(&s_full), stat(h)));
    let budget_drift = s_bud.as_ref().map(|b| drift(stat(&s_full), stat(b)));

    let (verdict, reason) =
        judge(id, category, &full, half.as_deref(), doubled.as_deref(), &s_full, degree_drift, budget_drift);

    let mut notes = BTreeMap::new();
    if id == CheckId::WeightedGradientByDifference {
        // doubling constant of ψ(t) = t^{q(n−α)−1}
        notes.insert("psiDoublingConstant".into(), 2f64.powf((prm.q * (prm.n as f64 - prm.alpha) - 1.0).abs()));
    }
    if id == CheckId::TailSequence {
        notes.insert("explicitConstant".into(), 1.0 / (1.0 - 2f64.powf(-prm.alpha)));
    }

    Ok(CheckResult {
        id: id.name().into(),
        anchor: id.anchor().into(),
        kind: category,
        params: prm,
        family,
        degree,
        per_function,
        ratio_stats: RatioStats {
            full: s_full,
            half: s_half,
            doubled_budget: s_bud,
            degree_drift,
            budget_drift,
        },
        verdict,
        reason,
        notes,
    })
}

#[allow(clippy::too_many_arguments)]
fn judge(
    id: CheckId,
    category: Category,
    full: &[Outcome],
    half: Option<&[Outcome]>,
    doubled: Option<&[Outcome]>,
    s: &Summary,
    degree_drift: Option<f64>,
    budget_drift: Option<f64>,
) -> (Verdict, String) {
    let runs = [("degree D", Some(full)), ("degree D/2", half), ("doubled budget", doubled)];
    for (label, run) in runs {
        let Some(run) = run else { continue };
        for (i, o) in run.iter().enumerate() {
            let vanishing_lhs = category == Category::Equivalence && o.lhs <= super::TINY && o.rhs > super::TINY;
            if o.is_hard_failure() || vanishing_lhs {
                let at = o.at.map(|a| format!(" at {a}")).unwrap_or_default();
                return (
                    Verdict::HardFailure,
                    format!("{id}, function {i} ({label}){at}: lhs = {:e}, rhs = {:e}", o.lhs, o.rhs),
                );
            }
        }
    }
    if s.count == 0 {
        let v = if full.is_empty() { Verdict::Pass } else { Verdict::Fail };
        return (v, "no non-degenerate function in the family".into());
    }
    match category {
        Category::ConstantFree { bound, slack } => {
            if s.max <= bound * (1.0 + slack) {
                (Verdict::Pass, format!("max ratio {:.6e} ≤ {bound}", s.max))
            } else {
                (Verdict::Fail, format!("max ratio {:.6e} exceeds {bound} (slack {slack:e})", s.max))
            }
        }
        Category::Equivalence | Category::Inequality => {
            let what = if category == Category::Equivalence { "window" } else { "constant" };
            let value = if category == Category::Equivalence { s.window } else { s.max };
            if !value.is_finite() {
                return (Verdict::Fail, format!("{what} is not finite"));
            }
            let mut bad = Vec::new();
            if let Some(d) = degree_drift {
                if !(d < DRIFT_TOLERANCE) {
                    bad.push(format!("degree drift {d:.3}"));
                }
            }
            if let Some(d) = budget_drift {
                if !(d < DRIFT_TOLERANCE) {
                    bad.push(format!("budget drift {d:.3}"));
                }
            }
            let tail = format!(
                "{what} {value:.4e}, degree drift {}, budget drift {}",
                degree_drift.map(|d| format!("{d:.4}")).unwrap_or_else(|| "n/a".into()),
                budget_drift.map(|d| format!("{d:.4}")).unwrap_or_else(|| "n/a".into())
            );
            if bad.is_empty() {
                (Verdict::Pass, tail)
            } else {
                (Verdict::Fail, format!("{tail}; exceeds {DRIFT_TOLERANCE}: {}", bad.join(", ")))
            }
        }
    }
}

fn entry_for(id: CheckId, family: Option<&TestFamily>, params: &CheckParams) -> (CheckEntry, Option<u64>, Option<usize>) {
    let fam = family.map(|f| FamilyOverride {
        spec: Some(f.spec.clone()),
        count: Some(f.count),
        dim: Some(f.dim),
        seed: Some(f.seed),
    });
    (
        CheckEntry { id: id.name().into(), family: fam, params: Some(params.clone()) },
        family.map(|f| f.seed),
        family.map(|f| f.max_degree),
    )
}

fn run_kind(id: &str, family: Option<&TestFamily>, params: &CheckParams, want: &[&str]) -> Result<CheckResult> {
    let cid: CheckId = id.parse()?;
    let ok = match cid.category() {
        Category::Equivalence => want.contains(&"equivalence"),
        _ => want.contains(&"inequality"),
    };
    if !ok {
        return Err(Error::Config(format!("{id} is not registered as {}", want.join(" or "))));
    }
    let (entry, seed, degree) = entry_for(cid, family, params);
    run_check(&entry, seed.unwrap_or(0), degree.unwrap_or(32))
}

/// A registered two-sided check on the given family.
pub fn check_equivalence(id: &str, family: Option<&TestFamily>, params: &CheckParams) -> Result<CheckResult> {
    run_kind(id, family, params, &["equivalence"])
}

/// A registered one-sided check (including the constant-free ones).
pub fn check_inequality(id: &str, family: Option<&TestFamily>, params: &CheckParams) -> Result<CheckResult> {
    run_kind(id, family, params, &["inequality"])
}

/// `‖f‖_p ≤ Σ‖W_ν*f‖_p` outright, then the φ-space inclusion as a bounded constant.
/// The φ precondition is checked before anything is computed.
pub fn check_membership_chain(family: Option<&TestFamily>, params: &CheckParams) -> Result<[CheckResult; 2]> {
    let (inclusion, seed, degree) = entry_for(CheckId::PhiLipschitzInclusion, family, params);
    let (seed, degree) = (seed.unwrap_or(0), degree.unwrap_or(32));
    prepare(&inclusion, seed, degree)?;
    let mut triangle_params = CheckParams { p: params.p, ..CheckParams::default() };
    triangle_params.p = triangle_params.p.or(Some(1.0));
    let (triangle, _, _) = entry_for(CheckId::HardyByBlocks, family, &triangle_params);
    Ok([run_check(&triangle, seed, degree)?, run_check(&inclusion, seed, degree)?])
}

/// Every entry in order; a configuration error in any entry aborts before computing.
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    let mut checks = Vec::with_capacity(config.checks.len());
    for e in &config.checks {
        checks.push(run_check(e, config.seed, config.degree)?);
    }
    Ok(Report { suite: config.suite.clone(), seed: config.seed, degree: config.degree, checks })
}

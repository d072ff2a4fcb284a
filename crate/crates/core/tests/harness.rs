//! Suite runner behavior: configuration errors, degenerate families, reports.

mod common;

use holoball::harness::{
    check_equivalence, check_inequality, check_membership_chain, run_check, run_suite, CheckEntry, CheckId,
    CheckParams, FamilyOverride, FamilySpec, SuiteConfig, TestFamily, Verdict,
};
use holoball::moduli::{ModulusEstimator, ModulusOptions};
use holoball::quad::{rule_for_degree, PhiWeight};
use holoball::{HoloPoly, C64};

fn family(spec: FamilySpec, count: usize, dim: usize, degree: usize) -> TestFamily {
    TestFamily::new(spec, count, 3, dim, degree)
}

#[test]
fn empty_suite_is_an_empty_success() {
    let report = run_suite(&SuiteConfig::named("empty", 1, 32).unwrap()).unwrap();
    assert!(report.checks.is_empty());
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn unknown_id_lists_registered_ids() {
    let cfg = SuiteConfig::from_json(r#"{"checks": [{"id": "no-such-check"}]}"#).unwrap();
    let err = run_suite(&cfg).unwrap_err();
    assert!(err.is_config());
    let msg = err.to_string();
    for id in CheckId::ALL {
        assert!(msg.contains(id.name()), "{msg}");
    }
}

#[test]
fn hypotheses_are_checked_before_computing() {
    let bad = [
        (CheckId::BesovDyadic, CheckParams { alpha: Some(1.5), s: Some(1.0), ..Default::default() }),
        (CheckId::TangentialGradient, CheckParams { alpha: Some(1.0), k: Some(2), ..Default::default() }),
        (CheckId::RadialVsDifference, CheckParams { alpha: Some(1.0), n: Some(1), ..Default::default() }),
        (CheckId::RadialTailByDifference, CheckParams { alpha: Some(-1.5), ..Default::default() }),
        (CheckId::BestApproximationSequence, CheckParams { p: Some(3.0), ..Default::default() }),
        (CheckId::HardyIntegralOperator, CheckParams { beta: Some(0.0), ..Default::default() }),
        (
            CheckId::PhiLipschitzInclusion,
            CheckParams { alpha: Some(0.75), phi: Some(PhiWeight::Power { a: 0.5 }), ..Default::default() },
        ),
    ];
    for (id, params) in bad {
        let entry = CheckEntry { id: id.name().into(), family: None, params: Some(params) };
        let err = run_check(&entry, 0, 8).unwrap_err();
        assert!(err.is_config(), "{id}: {err}");
    }
    let one_dim = CheckEntry {
        id: CheckId::TangentialGradient.name().into(),
        family: Some(FamilyOverride { dim: Some(1), ..Default::default() }),
        params: None,
    };
    assert!(run_check(&one_dim, 0, 8).unwrap_err().is_config());
    assert!(check_equivalence("radial-by-gradient", None, &CheckParams::default()).unwrap_err().is_config());
}

#[test]
fn zero_function_is_degenerate_everywhere() {
    let dir = std::env::temp_dir().join(format!("holoball-zero-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("zero.json");
    HoloPoly::zero(2, 8).write_file(&path).unwrap();
    let fam = family(FamilySpec::UserFile { path: path.clone() }, 1, 2, 8);
    let chain = check_membership_chain(Some(&fam), &CheckParams::default()).unwrap();
    for r in &chain {
        let f = &r.per_function[0];
        assert_eq!((f.lhs, f.rhs, f.ratio), (0.0, 0.0, None), "{}", r.id);
        assert_eq!(r.ratio_stats.full.degenerate, 1);
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn membership_chain_passes_on_random_family() {
    let fam = TestFamily::random_decay(1.5, 12, 9, 2, 16);
    let [triangle, inclusion] = check_membership_chain(Some(&fam), &CheckParams::default()).unwrap();
    assert_eq!(triangle.verdict, Verdict::Pass, "{}", triangle.reason);
    assert_eq!(inclusion.verdict, Verdict::Pass, "{}", inclusion.reason);
    let bad = CheckParams { alpha: Some(0.9), ..Default::default() };
    assert!(check_membership_chain(Some(&fam), &bad).unwrap_err().is_config());
}

#[test]
fn dilated_modulus_of_monomials_scales_consistently() {
    // δ = 1/k: ω^+_1(δ, f_{1−δ}) / (δ M_2(1−δ, R z^k)) should not depend on k
    let mut ratios = Vec::new();
    for k in [4u32, 8, 16, 32] {
        let f = HoloPoly::monomial(&[k, 0], C64::new(1.0, 0.0));
        let delta = 1.0 / k as f64;
        let rule = rule_for_degree(2, k as usize).unwrap();
        let g = f.dilate(1.0 - delta).unwrap();
        let est = ModulusEstimator::new(&g, 1, 2.0, &rule, &ModulusOptions::default()).unwrap();
        let lhs = est.estimate_all(delta).unwrap()[2].value;
        // ‖z_1^k‖_2 on S_2 is (k+1)^{−1/2}
        let rhs = delta * k as f64 * (1.0 - delta).powi(k as i32) / ((k + 1) as f64).sqrt();
        ratios.push(lhs / rhs);
    }
    let (lo, hi) = ratios.iter().fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(lo > 0.9 && hi / lo < 1.3, "{ratios:?}");
}

#[test]
fn monomial_family_equivalence() {
    let fam = family(FamilySpec::Monomial { alpha: vec![3, 2] }, 4, 2, 16);
    let r = check_equivalence("besov-dyadic", Some(&fam), &CheckParams::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{}", r.reason);
    // every member is the same monomial up to phase: a single ratio
    assert!((r.ratio_stats.full.window - 1.0).abs() < 1e-12);
}

#[test]
fn lacunary_family_at_q_infinity() {
    let fam = family(FamilySpec::Lacunary { levels: 4 }, 6, 1, 16);
    let params = CheckParams { q: Some(f64::INFINITY), ..Default::default() };
    let r = check_equivalence("besov-dyadic", Some(&fam), &params).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{}", r.reason);
    let r = check_inequality("radial-derivative-monotone", Some(&fam), &CheckParams::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{}", r.reason);
}

fn small_suite() -> SuiteConfig {
    let json = r#"{
        "suite": "small",
        "seed": 4,
        "degree": 8,
        "checks": [
            {"id": "besov-dyadic", "family": {"count": 5}, "params": {"q": "inf"}},
            {"id": "radial-vs-unitary-modulus", "family": {"count": 3}},
            {"id": "modulus-nesting", "family": {"count": 3, "dim": 3}},
            {"id": "monotone-means", "family": {"generator": "blockConcentrated", "nu": 2, "count": 3}}
        ]
    }"#;
    SuiteConfig::from_json(json).unwrap()
}

#[test]
fn reports_are_deterministic_across_worker_counts() {
    let cfg = small_suite();
    let one = holoball::par::with_jobs(Some(1), || run_suite(&cfg).unwrap()).to_json();
    let many = holoball::par::with_jobs(Some(4), || run_suite(&cfg).unwrap()).to_json();
    let again = run_suite(&cfg).unwrap().to_json();
    assert_eq!(one, many);
    assert_eq!(one, again);
}

#[test]
fn config_and_report_round_trip() {
    let cfg = small_suite();
    let text = serde_json::to_string(&cfg).unwrap();
    assert!(text.contains("\"inf\""));
    assert_eq!(SuiteConfig::from_json(&text).unwrap(), cfg);
    let report = run_suite(&cfg).unwrap();
    assert_eq!(report.checks.len(), 4);
    assert_eq!(report.checks[0].params.q, f64::INFINITY);
    let dir = std::env::temp_dir().join(format!("holoball-report-{}", std::process::id()));
    report.write(&dir).unwrap();
    let parsed: holoball::harness::Report =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(parsed.checks.len(), 4);
    let csv = std::fs::read_to_string(dir.join("besov-dyadic.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn unknown_config_fields_are_rejected() {
    assert!(SuiteConfig::from_json(r#"{"checks": [{"id": "besov-dyadic", "parms": {}}]}"#).unwrap_err().is_config());
}

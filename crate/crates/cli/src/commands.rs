//! Subcommand bodies. Each takes the merged [`RunConfig`].

use crate::config::{parse_grid, usage, RunConfig};
use anyhow::{bail, Context};
use holoball::harness::{mixed_of, run_suite, FamilySpec, Means, SuiteConfig, TestFamily};
use holoball::lpblocks::{best_approx_general, best_approx_l2, BlockBasis};
use holoball::moduli::{ModulusEstimator, ModulusKind, ModulusOptions};
use holoball::quad::{phi_seminorm, rule_for_degree, NormSpec, RadialRule, Weight};
use holoball::HoloPoly;
use std::io::Write;
use std::path::Path;

const DEFAULT_GRID: &str = "log:1e-3:0.5:20";

/// One polynomial: a JSON object, or an array holding exactly one (as `generate --count 1` writes).
fn read_poly(cfg: &RunConfig) -> anyhow::Result<HoloPoly> {
    let path = cfg.input()?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading polynomial {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let value = match value {
        serde_json::Value::Array(mut items) if items.len() == 1 => items.remove(0),
        serde_json::Value::Array(items) => bail!(usage(format!(
            "{} holds {} polynomials; pass a file with exactly one",
            path.display(),
            items.len()
        ))),
        other => other,
    };
    serde_json::from_value(value).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Writes `text` to `--output` when given, stdout otherwise.
fn emit(cfg: &RunConfig, text: &str) -> anyhow::Result<()> {
    match &cfg.output {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn fmt_exp(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        v.to_string()
    }
}

pub fn norm(cfg: &RunConfig) -> anyhow::Result<()> {
    let f = read_poly(cfg)?;
    let p = cfg.p.unwrap_or(2.0);
    let q = cfg.q.unwrap_or(2.0);
    let alpha = cfg.alpha.unwrap_or(0.5);
    let functional = cfg.functional.as_deref().unwrap_or("lambda");
    let degree = f.max_degree().max(1);
    let rule = rule_for_degree(f.dim(), degree)?;
    let nodes = RadialRule::default_size(degree, q);
    let value = match functional {
        "lambda" => {
            let s = cfg.s.unwrap_or(1.0);
            if !(s > alpha) {
                bail!(usage(format!("the Λ-functional needs s > α (s = {s}, α = {alpha})")));
            }
            if !(alpha > 0.0) {
                bail!(usage(format!("α = {alpha} must be positive")));
            }
            let m = Means::holo(&f.radial_power(s), p, &rule);
            let v = f.constant_term().norm() + mixed_of(&m, q, s - alpha, f.dim(), nodes);
            println!("lambda[p={}, q={}, alpha={alpha}, s={s}] = {v:.12e}", fmt_exp(p), fmt_exp(q));
            v
        }
        "mixed" => {
            if q.is_finite() && !(alpha > 0.0) {
                bail!(usage(format!("the mixed norm needs α > 0 for finite q (α = {alpha})")));
            }
            let m = Means::holo(&f, p, &rule);
            let v = mixed_of(&m, q, alpha, f.dim(), nodes);
            println!("mixed[p={}, q={}, alpha={alpha}] = {v:.12e}", fmt_exp(p), fmt_exp(q));
            v
        }
        "hardy" => {
            let v = Means::holo(&f, p, &rule).at(1.0);
            println!("hardy[p={}] = {v:.12e}", fmt_exp(p));
            v
        }
        "phi" => {
            let phi = cfg.phi.clone().unwrap_or(holoball::quad::PhiWeight::Power { a: 0.5 });
            let n = cfg.n.unwrap_or(1);
            let spec = NormSpec { p, q, weight: Weight::Phi { phi: phi.clone(), n } };
            let v = phi_seminorm(&f, &spec, &rule)?;
            println!("phi[p={}, q={}, n={n}, phi={phi:?}] = {v:.12e}", fmt_exp(p), fmt_exp(q));
            v
        }
        other => bail!(usage(format!("unknown functional {other:?} (lambda, mixed, hardy, phi)"))),
    };
    if let Some(path) = &cfg.output {
        emit(cfg, &format!("{value:e}\n"))?;
        log::info!("value written to {}", path.display());
    }
    Ok(())
}

fn parse_kind(kind: &str) -> anyhow::Result<Option<ModulusKind>> {
    if kind == "all" {
        return Ok(None);
    }
    kind.parse::<ModulusKind>().map(Some).map_err(|e| usage(e.to_string()))
}

pub fn modulus(cfg: &RunConfig) -> anyhow::Result<()> {
    let f = read_poly(cfg)?;
    let p = cfg.p.unwrap_or(2.0);
    let n = cfg.n.unwrap_or(1);
    if n == 0 {
        bail!(usage("difference order n must be ≥ 1"));
    }
    let kind = parse_kind(cfg.kind.as_deref().unwrap_or("all"))?;
    let grid = parse_grid(cfg.grid.as_deref().unwrap_or(DEFAULT_GRID))?;
    let rule = rule_for_degree(f.dim(), f.max_degree().max(1))?;
    let opts = ModulusOptions { budget: cfg.budget.unwrap_or(32), seed: cfg.seed.unwrap_or(0), metrized_minus: false };
    let est = ModulusEstimator::new(&f, n, p, &rule, &opts)?;
    let mut csv = String::new();
    match kind {
        None => {
            csv.push_str("delta,minus,unitary,plus\n");
            for row in est.dial(&grid)? {
                csv.push_str(&format!("{:e},{:e},{:e},{:e}\n", row[0].delta, row[0].value, row[1].value, row[2].value));
            }
        }
        Some(k) => {
            csv.push_str(&format!("delta,{}\n", k.name()));
            let mut prev = 0.0f64;
            for &d in &grid {
                let e = est.estimate(d, k)?;
                prev = prev.max(e.value);
                csv.push_str(&format!("{d:e},{prev:e}\n"));
            }
        }
    }
    emit(cfg, &csv)?;
    eprintln!(
        "modulus: {} rows, kind {}, n = {n}, p = {}, budget {}",
        grid.len(),
        kind.map_or("all", |k| k.name()),
        fmt_exp(p),
        opts.budget
    );
    Ok(())
}

pub fn blocks(cfg: &RunConfig) -> anyhow::Result<()> {
    let f = read_poly(cfg)?;
    let p = cfg.p.unwrap_or(2.0);
    let degree = f.max_degree().max(1);
    let rule = rule_for_degree(f.dim(), degree)?;
    let basis = BlockBasis::new(degree);
    let norms = basis.block_norms(&f, p, &rule);
    let mut csv = String::from("nu,norm\n");
    for (nu, v) in norms.iter().enumerate() {
        csv.push_str(&format!("{nu},{v:e}\n"));
    }
    emit(cfg, &csv)?;
    let (top, vmax) = norms.iter().enumerate().fold((0, 0.0f64), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
    eprintln!("blocks: {} blocks at p = {}, largest {vmax:e} at nu = {top}", norms.len(), fmt_exp(p));
    Ok(())
}

pub fn approx(cfg: &RunConfig) -> anyhow::Result<()> {
    let f = read_poly(cfg)?;
    let p = cfg.p.unwrap_or(2.0);
    let degree = f.max_degree();
    let budget = cfg.budget.unwrap_or(if p.is_infinite() { 3000 } else { 200 });
    let rule = rule_for_degree(f.dim(), degree.max(1))?;
    let targets: Vec<usize> = match cfg.nu {
        Some(nu) => vec![nu],
        None => (0..).map(|m| 1usize << m).take_while(|&d| d <= degree.max(1)).collect(),
    };
    let mut csv = String::from("degree,upper,lower,converged,iterations\n");
    let mut unconverged = 0;
    for nu in targets.iter().copied() {
        if p == 2.0 {
            let (v, _) = best_approx_l2(&f, nu);
            csv.push_str(&format!("{nu},{v:e},{v:e},true,0\n"));
        } else {
            let b = best_approx_general(&f, nu, p, &rule, budget)?;
            unconverged += usize::from(!b.converged);
            csv.push_str(&format!("{nu},{:e},{:e},{},{}\n", b.upper, b.lower, b.converged, b.iterations));
        }
    }
    emit(cfg, &csv)?;
    eprintln!(
        "approx: {} degrees at p = {}, {unconverged} without a certified gap (budget {budget})",
        targets.len(),
        fmt_exp(p)
    );
    Ok(())
}

/// Returns the process exit status of the suite.
pub fn verify(cfg: &RunConfig) -> anyhow::Result<i32> {
    let name = cfg.suite.as_deref().unwrap_or("default");
    let mut suite = if Path::new(name).is_file() {
        let text = std::fs::read_to_string(name)?;
        let s = SuiteConfig::from_json(&text)?;
        // explicit flags still win over the suite file
        SuiteConfig { seed: cfg.seed.unwrap_or(s.seed), degree: cfg.degree.unwrap_or(s.degree), ..s }
    } else {
        SuiteConfig::named(name, cfg.seed.unwrap_or(0), cfg.degree.unwrap_or(32))?
    };
    if let Some(budget) = cfg.budget {
        for c in suite.checks.iter_mut() {
            c.params.get_or_insert_with(Default::default).budget = Some(budget);
        }
    }
    suite.validate()?;
    let report = run_suite(&suite)?;
    let dir = cfg.output.clone().unwrap_or_else(|| "report".into());
    report.write(&dir)?;
    for c in &report.checks {
        println!("{}: {:?} ({})", c.id, c.verdict, c.reason);
    }
    let passed = report.checks.iter().filter(|c| c.passed()).count();
    println!(
        "{passed}/{} checks passed; report written to {}",
        report.checks.len(),
        dir.join("report.json").display()
    );
    Ok(report.exit_code())
}

fn family_spec(cfg: &RunConfig, generator: Option<&str>, gen: &GenFlags) -> anyhow::Result<FamilySpec> {
    let base = cfg.family.clone();
    let name = match (generator, &base) {
        (Some(g), _) => g.to_string(),
        (None, Some(FamilySpec::RandomDecay { .. })) | (None, None) => "random-decay".into(),
        (None, Some(FamilySpec::Lacunary { .. })) => "lacunary".into(),
        (None, Some(FamilySpec::Monomial { .. })) => "monomial".into(),
        (None, Some(FamilySpec::BlockConcentrated { .. })) => "block-concentrated".into(),
        (None, Some(FamilySpec::UserFile { .. })) => bail!(usage("generate cannot use a userFile family")),
    };
    Ok(match name.as_str() {
        "random-decay" => FamilySpec::RandomDecay {
            gamma: gen.gamma.or(match base {
                Some(FamilySpec::RandomDecay { gamma }) => Some(gamma),
                _ => None,
            })
            .unwrap_or(1.5),
        },
        "lacunary" => FamilySpec::Lacunary {
            levels: gen
                .levels
                .or(match base {
                    Some(FamilySpec::Lacunary { levels }) => Some(levels),
                    _ => None,
                })
                .unwrap_or(4),
        },
        "monomial" => FamilySpec::Monomial {
            alpha: gen
                .exponent
                .clone()
                .or(match base {
                    Some(FamilySpec::Monomial { alpha }) => Some(alpha),
                    _ => None,
                })
                .ok_or_else(|| usage("the monomial generator needs --exponent"))?,
        },
        "block-concentrated" => FamilySpec::BlockConcentrated {
            nu: cfg
                .nu
                .or(match base {
                    Some(FamilySpec::BlockConcentrated { nu }) => Some(nu),
                    _ => None,
                })
                .unwrap_or(2),
        },
        other => bail!(usage(format!(
            "unknown generator {other:?} (random-decay, lacunary, monomial, block-concentrated)"
        ))),
    })
}

/// Generator parameters that only exist as flags.
#[derive(Default)]
pub struct GenFlags {
    pub gamma: Option<f64>,
    pub levels: Option<u32>,
    pub exponent: Option<Vec<u32>>,
}

pub fn generate(cfg: &RunConfig, generator: Option<&str>, gen: &GenFlags) -> anyhow::Result<()> {
    let spec = family_spec(cfg, generator, gen)?;
    let dim = match &spec {
        FamilySpec::Monomial { alpha } => cfg.dim.unwrap_or(alpha.len()),
        _ => cfg.dim.unwrap_or(2),
    };
    let family = TestFamily::new(spec, cfg.count.unwrap_or(1), cfg.seed.unwrap_or(0), dim, cfg.degree.unwrap_or(16));
    let polys = family.generate()?;
    let text = serde_json::to_string_pretty(&polys)? + "\n";
    emit(cfg, &text)?;
    eprintln!(
        "generate: {} polynomials, N = {}, D = {}, seed {}{}",
        polys.len(),
        family.dim,
        family.max_degree,
        family.seed,
        cfg.output.as_ref().map(|p| format!(", written to {}", p.display())).unwrap_or_default()
    );
    Ok(())
}

//! Sphere quadrature against closed forms and a volume-form Monte Carlo.

mod common;

use common::{c, random_poly};
use holoball::quad::{hardy_norm, mixed_norm, rule_for_degree, sphere_mean, L2Profile, NormSpec, SphereRule};
use holoball::{HoloPoly, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn l2_quadrature_matches_moments(dim in 1usize..=3, d in 1usize..=32, seed in any::<u64>(), r in 0.0f64..=1.0) {
        let d = if dim == 3 { d.min(16) } else { d };
        let f = random_poly(dim, d, seed);
        let rule = rule_for_degree(dim, d).unwrap();
        let quad = sphere_mean(&f, r, 2.0, &rule);
        let exact = L2Profile::holo(&f).mean(r);
        prop_assert!((quad - exact).abs() <= 1e-10 * exact.max(1e-300), "{quad} vs {exact}");
        if r == 1.0 {
            prop_assert!((hardy_norm(&f, 2.0, &rule) - f.h2_norm()).abs() <= 1e-10 * f.h2_norm());
        }
    }

    #[test]
    fn means_are_nondecreasing(dim in 1usize..=2, seed in any::<u64>(), p in prop::sample::select(vec![1.0, 1.5, 3.0, f64::INFINITY])) {
        let f = random_poly(dim, 12, seed);
        let rule = rule_for_degree(dim, 12).unwrap();
        let mut prev = 0.0;
        for i in 0..=20 {
            let m = sphere_mean(&f, i as f64 / 20.0, p, &rule);
            prop_assert!(m >= prev * (1.0 - 1e-10), "p = {p}: M({}) = {m} < {prev}", i as f64 / 20.0);
            prev = m;
        }
    }
}

#[test]
fn monomial_means_on_the_circle() {
    for k in [0u32, 1, 5, 17, 32] {
        let f = HoloPoly::monomial(&[k], c(1.0));
        let rule = rule_for_degree(1, 32).unwrap();
        for p in [1.0, 2.0, 3.7, f64::INFINITY] {
            for r in [0.0f64, 0.3, 0.9, 1.0] {
                let want = r.powi(k as i32);
                assert!((sphere_mean(&f, r, p, &rule) - want).abs() < 1e-12, "k={k} p={p} r={r}");
            }
        }
    }
}

/// `z` uniform in the ball for normalized volume: Gaussian direction, radius `U^{1/2N}`.
fn ball_point(dim: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let g: Vec<C64> = (0..dim).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm = g.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let r = rng.random::<f64>().powf(1.0 / (2 * dim) as f64);
    g.into_iter().map(|x| x * (r / norm)).collect()
}

#[test]
fn mixed_norm_matches_volume_integral() {
    let samples = 400_000;
    for (dim, p, alpha) in [(1usize, 2.0, 1.0), (2, 2.0, 0.75), (2, 3.0, 0.5), (1, 1.5, 1.0)] {
        let f = random_poly(dim, 8, 11 + dim as u64);
        let rule = rule_for_degree(dim, 8).unwrap();
        let quad = mixed_norm(&f, &NormSpec::power(p, p, alpha), &rule, 48).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut acc = 0.0;
        for _ in 0..samples {
            let z = ball_point(dim, &mut rng);
            let rho2: f64 = z.iter().map(|x| x.norm_sqr()).sum();
            acc += f.eval(&z).norm().powf(p) * (1.0 - rho2).powf(p * alpha - 1.0);
        }
        let mc = (acc / samples as f64).powf(1.0 / p);
        assert!((mc / quad - 1.0).abs() < 0.01, "N={dim} p={p} α={alpha}: quadrature {quad}, Monte Carlo {mc}");
    }
}

#[test]
fn rule_rejects_large_dimension() {
    assert!(SphereRule::new(5, 4).unwrap_err().is_config());
}

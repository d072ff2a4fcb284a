//! Best approximation: the p = 2 tail formula and local optimality for other p.

mod common;

use common::random_poly;
use holoball::lpblocks::{best_approx_general, best_approx_l2};
use holoball::quad::{hardy_norm, rule_for_degree};
use holoball::{HoloPoly, MultiIndex, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn l2_error_is_the_tail_energy() {
    for seed in 0..20 {
        let f = random_poly(2, 24, seed);
        let e = f.part_energies();
        for nu in [0usize, 1, 2, 4, 8, 16, 24] {
            let (err, g) = best_approx_l2(&f, nu);
            let tail: f64 = e[nu + 1..].iter().sum::<f64>().sqrt();
            assert!((err - tail).abs() <= 1e-10 * tail.max(1e-300));
            assert!(((&f - &g).h2_norm() - tail).abs() <= 1e-10 * tail.max(1e-300));
        }
    }
}

fn perturbation(dim: usize, nu: usize, deg: usize, scale: f64, rng: &mut ChaCha8Rng) -> HoloPoly {
    let terms: Vec<(MultiIndex, C64)> = MultiIndex::all_up_to(dim, nu)
        .into_iter()
        .map(|a| (a, C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * scale))
        .collect();
    HoloPoly::from_terms(dim, deg, terms).unwrap()
}

#[test]
fn general_p_is_locally_optimal_and_bracketed() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (dim, p) in [(1usize, 1.0), (1, 4.0), (1, f64::INFINITY), (2, 1.5), (2, 3.0)] {
        let deg = if dim == 1 { 12 } else { 8 };
        let nu = 3;
        let f = random_poly(dim, deg, 40 + dim as u64);
        let rule = rule_for_degree(dim, deg).unwrap();
        let b = best_approx_general(&f, nu, p, &rule, 3000).unwrap();
        assert!(b.lower <= b.upper * (1.0 + 1e-12), "p={p}: {} > {}", b.lower, b.upper);
        assert!(b.converged, "p={p}: gap {} after {} steps", b.upper - b.lower, b.iterations);
        let trunc = hardy_norm(&(&f - &f.truncate(nu)), p, &rule);
        assert!(b.upper <= trunc * (1.0 + 1e-12));
        let attained = hardy_norm(&(&f - &b.poly), p, &rule);
        assert!((attained - b.upper).abs() <= 1e-9 * b.upper);
        for _ in 0..40 {
            let h = perturbation(dim, nu, deg, 1e-3 * b.upper, &mut rng);
            let moved = hardy_norm(&(&(&f - &b.poly) - &h), p, &rule);
            assert!(moved >= b.upper * (1.0 - 1e-4), "p={p}: perturbed {moved} < {} (lower {}, converged {}, iterations {})", b.upper, b.lower, b.converged, b.iterations);
        }
    }
}

//! Exact coefficient identities on random polynomials.

mod common;

use common::{c, random_poly, rel_diff, unitary};
use holoball::lpblocks::BlockBasis;
use holoball::moduli::{diagonal_difference, rotation_difference, transform_difference};
use holoball::{HoloPoly, MultiplierSpec, C64};
use proptest::prelude::*;

const EXACT: f64 = 1e-12;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

fn shape() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..=3, 1usize..=32, any::<u64>()).prop_map(|(n, d, s)| (n, if n == 3 { d.min(20) } else { d }, s))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn radial_powers_compose((dim, d, seed) in shape(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let f = random_poly(dim, d, seed);
        let two = f.radial_power(a).radial_power(b);
        let one = f.radial_power(a + b);
        prop_assert!(rel_diff(&two, &one) < EXACT);
    }

    #[test]
    fn gamma_ratio_multipliers_compose((dim, d, seed) in shape(), s in 0.0f64..2.0, t in 0.0f64..2.0, u in 0.0f64..2.0) {
        let f = random_poly(dim, d, seed);
        let two = f
            .apply_multiplier(&MultiplierSpec::gamma_ratio(s, t)).unwrap()
            .apply_multiplier(&MultiplierSpec::gamma_ratio(s + t, u)).unwrap();
        let one = f.apply_multiplier(&MultiplierSpec::gamma_ratio(s, t + u)).unwrap();
        prop_assert!(rel_diff(&two, &one) < EXACT);
    }

    #[test]
    fn json_round_trip_is_bit_exact((dim, d, seed) in shape()) {
        let f = random_poly(dim, d, seed);
        let back = HoloPoly::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn inverse_radial_power_round_trip((dim, d, seed) in shape(), s in 0.1f64..3.0) {
        let f = random_poly(dim, d, seed);
        let g = &f - &HoloPoly::constant(dim, f.constant_term()).with_max_degree(d);
        let back = g.radial_power(s).radial_derivative_inverse(s).unwrap();
        prop_assert!(rel_diff(&back, &g) < EXACT);
        prop_assert!(f.radial_derivative_inverse(s).is_err() || f.constant_term() == C64::default());
    }

    #[test]
    fn blocks_reconstruct((dim, d, seed) in shape()) {
        let f = random_poly(dim, d, seed);
        let basis = BlockBasis::new(d);
        let mut sum = HoloPoly::zero(dim, d);
        for nu in 0..basis.len() {
            sum = &sum + &basis.project(&f, nu);
        }
        prop_assert!(rel_diff(&sum, &f) < EXACT);
    }

    #[test]
    fn radial_power_commutes_with_unitary((dim, d, seed) in shape(), n in 1u32..4) {
        let f = random_poly(dim, d, seed);
        let u = unitary(dim, seed ^ 0x55);
        let lhs = f.compose_linear(&u).unwrap().radial_power(n as f64);
        let rhs = f.radial_power(n as f64).compose_linear(&u).unwrap();
        prop_assert!(rel_diff(&lhs, &rhs) < EXACT);
    }

    #[test]
    fn radial_power_commutes_with_differences((dim, d, seed) in shape(), k in 1u32..3, m in 1u32..3, shrink in 0.3f64..1.0) {
        let f = random_poly(dim, d.min(16), seed);
        let u = unitary(dim, seed ^ 0xAA) * c(shrink);
        let lhs = transform_difference(&f, &u, m).unwrap().radial_power(k as f64);
        let rhs = transform_difference(&f.radial_power(k as f64), &u, m).unwrap();
        prop_assert!(rel_diff(&lhs, &rhs) < EXACT);
    }

    #[test]
    fn derivative_shift_relation((dim, d, seed) in shape(), n in 1usize..5) {
        let f = random_poly(dim, d, seed);
        for j in 0..dim {
            let mut lhs = f.partial(j);
            for _ in 1..n {
                lhs = lhs.radial();
            }
            let mut shifted = f.clone();
            for _ in 1..n {
                shifted = &shifted.radial() - &shifted;
            }
            let rhs = shifted.partial(j);
            prop_assert!(rel_diff(&lhs, &rhs) < EXACT, "j = {j}");
        }
    }

    #[test]
    fn diagonal_and_general_differences_agree((dim, d, seed) in shape(), n in 1u32..4, angle in -3.0f64..3.0, rho in 0.2f64..1.0) {
        let f = random_poly(dim, d.min(16), seed);
        let mu: Vec<C64> = (0..dim).map(|j| C64::from_polar(rho, angle * (j + 1) as f64 / dim as f64)).collect();
        let u = holoball::CMatrix::from_diagonal(&nalgebra::DVector::from_vec(mu.clone()));
        let general = transform_difference(&f, &u, n).unwrap();
        prop_assert!(rel_diff(&diagonal_difference(&f, &mu, n), &general) < EXACT);
        // scalar rotation is the diagonal case with equal entries
        let rot: Vec<C64> = vec![C64::from_polar(1.0, angle); dim];
        prop_assert!(rel_diff(&rotation_difference(&f, angle, n), &diagonal_difference(&f, &rot, n)) < EXACT);
    }
}

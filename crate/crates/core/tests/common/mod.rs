#![allow(dead_code)]

use holoball::harness::TestFamily;
use holoball::{CMatrix, HoloPoly, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A random polynomial with `E‖f_k‖² = (1+k)^{−2γ}`, reproducible from `seed`.
pub fn random_poly(dim: usize, degree: usize, seed: u64) -> HoloPoly {
    TestFamily::random_decay(1.0, 1, seed, dim, degree).generate().unwrap().remove(0)
}

pub fn unitary(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    holoball::moduli::haar_unitary(dim, &mut rng)
}

/// `max |a_α − b_α|` relative to `max(‖a‖_∞, ‖b‖_∞, 1e−300)`.
pub fn rel_diff(a: &HoloPoly, b: &HoloPoly) -> f64 {
    let scale = a.max_abs().max(b.max_abs()).max(1e-300);
    a.max_abs_diff(b) / scale
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

//! Seeded transform samples `U = V diag(μ) V*` near the identity.
//!
//! Sample `i` draws from its own ChaCha stream, so the first `B` samples are
//! the same for every budget `≥ B` and for every worker count.

use crate::CMatrix;
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const STREAM_FRAME: u64 = 1 << 40;
const STREAM_UNITARY: u64 = 2 << 40;
const STREAM_PLUS: u64 = 3 << 40;
/// Eigenvalue sets drawn per eigenbasis.
pub const SAMPLES_PER_FRAME: usize = 4;
/// Strict inequality margin for `‖U − I‖ < δ`.
const MARGIN: f64 = 1.0 - 1e-9;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = CMatrix::from_fn(dim, dim, |_, _| {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        C64::new(a * s, b * s)
    });
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Shape of one sample independent of `δ`: eigen-angles as fractions of the
/// admissible maximum, or contraction offsets in the unit disk.
#[derive(Clone, Debug)]
pub struct DiagonalSample {
    pub frame: usize,
    pub index: usize,
    shape: SampleShape,
}

#[derive(Clone, Debug)]
enum SampleShape {
    /// `θ_i = u_i θ_max`, `u_i ∈ [−1, 1]`
    Unitary(Vec<f64>),
    /// `ρ U` for the unitary sample with the same index, `ρ = 1 − v δ`
    Shrunk(Vec<f64>, f64),
    /// `μ_i = 1 + δ w_i` projected to the closed disk, `|w_i| ≤ 1`
    Normal(Vec<C64>),
}

fn unitary_shape(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..dim)
        .map(|_| {
            let u: f64 = rng.random_range(-1.0..=1.0);
            // half the coordinates sit at the edge of the admissible set
            if rng.random_bool(0.5) {
                u.signum()
            } else {
                u
            }
        })
        .collect()
}

impl DiagonalSample {
    /// Eigenvalues `μ` for this sample at radius `δ`.
    pub fn eigenvalues(&self, delta: f64, theta_max: f64) -> Vec<C64> {
        match &self.shape {
            SampleShape::Unitary(u) => u.iter().map(|x| C64::from_polar(1.0, x * theta_max * MARGIN)).collect(),
            SampleShape::Shrunk(u, v) => {
                let lam: Vec<C64> = u.iter().map(|x| C64::from_polar(1.0, x * theta_max * MARGIN)).collect();
                let mut shrink = v * delta;
                for _ in 0..60 {
                    let rho = (1.0 - shrink).max(0.0);
                    if lam.iter().all(|l| (l * rho - 1.0).norm() < delta) {
                        return lam.iter().map(|l| l * rho).collect();
                    }
                    shrink *= 0.5;
                }
                lam
            }
            SampleShape::Normal(w) => w
                .iter()
                .map(|wi| {
                    let mu = C64::new(1.0, 0.0) + wi * (delta * MARGIN);
                    if mu.norm() > 1.0 {
                        mu / mu.norm()
                    } else {
                        mu
                    }
                })
                .collect(),
        }
    }

    pub fn describe(&self, mu: &[C64]) -> String {
        let kind = match self.shape {
            SampleShape::Unitary(_) => "unitary",
            SampleShape::Shrunk(..) => "scaled unitary",
            SampleShape::Normal(_) => "normal contraction",
        };
        let eig: Vec<String> = mu.iter().map(|m| format!("{:.6}{:+.6}i", m.re, m.im)).collect();
        format!("{kind} sample {} (frame {}), eigenvalues [{}]", self.index, self.frame, eig.join(", "))
    }
}

/// Eigenbases and sample shapes for one budget.
#[derive(Clone, Debug)]
pub struct SampleSet {
    pub frames: Vec<CMatrix>,
    pub unitary: Vec<DiagonalSample>,
    pub plus: Vec<DiagonalSample>,
}

impl SampleSet {
    pub fn new(dim: usize, budget: usize, seed: u64) -> Self {
        let n_frames = budget.div_ceil(SAMPLES_PER_FRAME).max(1);
        let frames = (0..n_frames)
            .map(|f| {
                if dim == 1 {
                    CMatrix::identity(1, 1)
                } else {
                    haar_unitary(dim, &mut stream(seed, STREAM_FRAME + f as u64))
                }
            })
            .collect();
        let unitary: Vec<DiagonalSample> = (0..budget)
            .map(|i| {
                let mut rng = stream(seed, STREAM_UNITARY + i as u64);
                DiagonalSample {
                    frame: i / SAMPLES_PER_FRAME,
                    index: i,
                    shape: SampleShape::Unitary(unitary_shape(dim, &mut rng)),
                }
            })
            .collect();
        let plus = (0..budget)
            .map(|i| {
                let mut rng = stream(seed, STREAM_PLUS + i as u64);
                let shape = if i % 2 == 0 {
                    let u = match &unitary[i].shape {
                        SampleShape::Unitary(u) => u.clone(),
                        _ => unreachable!("unitary list holds unitary shapes"),
                    };
                    SampleShape::Shrunk(u, rng.random_range(0.0..=1.0))
                } else {
                    SampleShape::Normal(
                        (0..dim)
                            .map(|_| {
                                let s: f64 = rng.random_range(0.0f64..=1.0).sqrt();
                                C64::from_polar(s, rng.random_range(0.0..std::f64::consts::TAU))
                            })
                            .collect(),
                    )
                };
                DiagonalSample { frame: i / SAMPLES_PER_FRAME, index: i, shape }
            })
            .collect();
        SampleSet { frames, unitary, plus }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_unitary() {
        let mut rng = stream(3, 0);
        for dim in 1..=3 {
            let q = haar_unitary(dim, &mut rng);
            let e = &q.adjoint() * &q - CMatrix::identity(dim, dim);
            assert!(e.norm() < 1e-13);
        }
    }

    #[test]
    fn samples_respect_radius() {
        let set = SampleSet::new(2, 40, 11);
        for delta in [0.05, 0.5, 1.5] {
            let tmax = 2.0 * (delta / 2.0f64).asin();
            for s in set.unitary.iter().chain(&set.plus) {
                let mu = s.eigenvalues(delta, tmax);
                for m in &mu {
                    assert!(m.norm() <= 1.0 + 1e-15);
                    assert!((m - 1.0).norm() < delta, "{}", s.describe(&mu));
                }
            }
        }
    }

    #[test]
    fn budgets_are_nested() {
        let a = SampleSet::new(2, 8, 5);
        let b = SampleSet::new(2, 16, 5);
        for (x, y) in a.unitary.iter().zip(&b.unitary) {
            assert_eq!(x.eigenvalues(0.3, 0.3), y.eigenvalues(0.3, 0.3));
        }
        assert_eq!(a.frames[1], b.frames[1]);
    }
}

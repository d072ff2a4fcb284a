use crate::error::{Error, Result};
use crate::C64;

/// `ℓ^q` norm of a finite nonnegative sequence; `q = ∞` is the maximum.
pub fn lq_norm(values: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        values.iter().copied().fold(0.0, f64::max)
    } else {
        values.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

/// Both sides of the tail bound for an eventually-zero sequence `s`:
/// `lhs = ‖{2^{να}|s_{ν−1}|}_{ν≥1}‖_q`,
/// `rhs = (1−2^{−α})^{−1} ‖{2^{να}|s_{ν−1}−s_ν|}_{ν≥1}‖_q`
/// (entries past the end of `s` are zero).
pub fn sequence_tail_bound(s: &[C64], alpha: f64, q: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0) {
        return Err(Error::Range(format!("α = {alpha} must be positive for the constant (1−2^−α)^−1")));
    }
    if !(q >= 1.0) {
        return Err(Error::Range(format!("q = {q} must lie in [1, ∞]")));
    }
    let at = |i: usize| s.get(i).copied().unwrap_or_default();
    let len = s.len();
    let lhs_terms: Vec<f64> = (1..=len).map(|nu| 2f64.powf(nu as f64 * alpha) * at(nu - 1).norm()).collect();
    let rhs_terms: Vec<f64> =
        (1..=len).map(|nu| 2f64.powf(nu as f64 * alpha) * (at(nu - 1) - at(nu)).norm()).collect();
    let constant = 1.0 / (1.0 - 2f64.powf(-alpha));
    Ok((lq_norm(&lhs_terms, q), constant * lq_norm(&rhs_terms, q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_impulse() {
        let s = [C64::new(1.0, 0.0), C64::default(), C64::default()];
        let (l, r) = sequence_tail_bound(&s, 1.0, 1.0).unwrap();
        assert_eq!((l, r), (2.0, 4.0));
        assert_eq!(sequence_tail_bound(&[C64::default(); 4], 0.5, 2.0).unwrap(), (0.0, 0.0));
        assert!(sequence_tail_bound(&s, 0.0, 1.0).is_err());
    }
}

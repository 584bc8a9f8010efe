//! Gaussian-channel capacity via water-filling, plus the determinant and
//! trace bounds that tie a power budget to estimation error.
//!
//! Capacity here is always in bits, so the error-floor formulas keep the
//! `2^{-2C}` shape and no nat/bit conversion ever appears downstream.

use crate::gaussmat::SymMatrix;
use crate::{Error, Result};

/// Water-filling allocation over the noise eigenmodes.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterFillResult {
    /// Common water level `ν`.
    pub nu: f64,
    /// Per-eigenchannel power `max(ν − λᵢ, 0)`, in the order of `noise_eigs`.
    pub powers: Vec<f64>,
    /// Total capacity `Σ ½·log₂(1 + powers[i]/λᵢ)`.
    pub capacity_bits: f64,
    /// Noise eigenvalues `λᵢ` the allocation was computed over.
    pub noise_eigs: Vec<f64>,
}

/// Water-filling over the eigenvalues of a positive-definite noise
/// covariance. Eigenvalues come out ascending.
pub fn waterfill(sigma_w: &SymMatrix, power: f64) -> Result<WaterFillResult> {
    let eigs: Vec<f64> = sigma_w.sym_eig().values.iter().copied().collect();
    waterfill_eigs(&eigs, power)
}

/// Water-filling with the noise eigenvalues given directly (kept in caller
/// order).
///
/// The water level solves `Σ max(ν − λᵢ, 0) = P` by bisection on
/// `ν ∈ [min λᵢ, min λᵢ + P]`: the budget is continuous, piecewise linear,
/// and increasing in `ν`, and at the right endpoint the quietest channel
/// alone already absorbs `P`, so the bracket always holds.
pub fn waterfill_eigs(noise_eigs: &[f64], power: f64) -> Result<WaterFillResult> {
    if noise_eigs.is_empty() {
        return Err(Error::Dim { expected: 1, got: 0 });
    }
    if noise_eigs.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidMatrix {
            context: "waterfill noise eigenvalues",
        });
    }
    let min_eig = noise_eigs.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig <= 1e-10 {
        return Err(Error::NotPd { min_eigenvalue: min_eig });
    }
    if !power.is_finite() || power < 0.0 {
        return Err(Error::InvalidPower { power });
    }

    let spent = |nu: f64| -> f64 { noise_eigs.iter().map(|&l| (nu - l).max(0.0)).sum() };

    let mut nu = min_eig;
    if power > 0.0 {
        let tol = 1e-12 * power.max(1.0);
        let mut lo = min_eig;
        let mut hi = min_eig + power;
        for _ in 0..200 {
            nu = 0.5 * (lo + hi);
            let budget = spent(nu);
            if (budget - power).abs() <= tol {
                break;
            }
            if budget > power {
                hi = nu;
            } else {
                lo = nu;
            }
        }
    }

    let powers: Vec<f64> = noise_eigs.iter().map(|&l| (nu - l).max(0.0)).collect();
    let capacity_bits: f64 = powers
        .iter()
        .zip(noise_eigs)
        .map(|(&p, &l)| 0.5 * (1.0 + p / l).log2())
        .sum();

    Ok(WaterFillResult {
        nu,
        powers,
        capacity_bits,
        noise_eigs: noise_eigs.to_vec(),
    })
}

/// Determinant floor on the error covariance after any code of total
/// capacity `C` bits: `|Σe| ≥ |Σm| · 2^{−2C}`.
pub fn det_error_floor(sigma_m: &SymMatrix, c_tot_bits: f64) -> f64 {
    sigma_m.det() * (-2.0 * c_tot_bits).exp2()
}

/// Geometric mean of the eigenvalues, `|M|^{1/n}`, computed in log space.
fn det_root(m: &SymMatrix) -> f64 {
    let eig = m.sym_eig();
    let n = m.dim() as f64;
    (eig.values.iter().map(|&v| v.ln()).sum::<f64>() / n).exp()
}

/// Lower bound on `2^{−2·C(P)/n}` for a power-`P` code over noise `Σw`:
/// `|Σw|^{1/n} / ((P + Tr Σw)/n)`.
///
/// Equality holds exactly when the noise is isotropic (uniform
/// water-filling).
pub fn capacity_factor_bound(sigma_w: &SymMatrix, power: f64) -> f64 {
    let n = sigma_w.dim() as f64;
    det_root(sigma_w) / ((power + sigma_w.trace()) / n)
}

/// Upper bound on the posterior-mean trace reachable with transmit power
/// `P`: `Tr(Σm) − n²·|Σm|^{1/n}·|Σw|^{1/n} / (P + Tr Σw)`.
pub fn trace_posterior_bound(sigma_m: &SymMatrix, sigma_w: &SymMatrix, power: f64) -> f64 {
    let n = sigma_m.dim() as f64;
    sigma_m.trace() - n * n * det_root(sigma_m) * det_root(sigma_w) / (power + sigma_w.trace())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn symmetric_channels_split_power_evenly() {
        let r = waterfill_eigs(&[1.0, 1.0], 2.0).unwrap();
        assert_close(r.nu, 2.0, 1e-9);
        assert_close(r.powers[0], 1.0, 1e-9);
        assert_close(r.powers[1], 1.0, 1e-9);
        assert_close(r.capacity_bits, 1.0, 1e-9);
    }

    #[test]
    fn quiet_channel_fills_first() {
        let r = waterfill_eigs(&[1.0, 3.0], 1.0).unwrap();
        assert_close(r.nu, 2.0, 1e-9);
        assert_close(r.powers[0], 1.0, 1e-9);
        assert_close(r.powers[1], 0.0, 1e-9);
        assert_close(r.capacity_bits, 0.5, 1e-9);
    }

    #[test]
    fn zero_power_is_silent() {
        let r = waterfill_eigs(&[0.7, 2.0, 5.0], 0.0).unwrap();
        assert_close(r.nu, 0.7, 1e-15);
        assert!(r.powers.iter().all(|&p| p == 0.0));
        assert_close(r.capacity_bits, 0.0, 1e-15);
    }

    #[test]
    fn budget_is_conserved() {
        for &p in &[0.1, 1.0, 7.3, 123.0] {
            let r = waterfill_eigs(&[0.5, 1.0, 4.0, 9.0], p).unwrap();
            let spent: f64 = r.powers.iter().sum();
            assert_close(spent, p, 1e-9);
            // Active channels sit below the water level.
            for (pw, l) in r.powers.iter().zip(&r.noise_eigs) {
                if *pw > 0.0 {
                    assert!(r.nu >= *l);
                }
            }
        }
    }

    #[test]
    fn waterfill_from_covariance_uses_eigenvalues() {
        // Rotating the noise covariance must not change the allocation.
        let w = SymMatrix::from_row_major(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let direct = waterfill(&w, 1.5).unwrap();
        let by_eigs = waterfill_eigs(&[1.0, 3.0], 1.5).unwrap();
        assert_close(direct.capacity_bits, by_eigs.capacity_bits, 1e-12);
        assert_close(direct.nu, by_eigs.nu, 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            waterfill_eigs(&[1.0, 0.0], 1.0),
            Err(Error::NotPd { .. })
        ));
        assert!(matches!(
            waterfill_eigs(&[1.0], -0.5),
            Err(Error::InvalidPower { .. })
        ));
        assert!(matches!(
            waterfill_eigs(&[], 1.0),
            Err(Error::Dim { .. })
        ));
        let singular = SymMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        assert!(matches!(waterfill(&singular, 1.0), Err(Error::NotPd { .. })));
    }

    #[test]
    fn det_error_floor_examples() {
        let sm = SymMatrix::from_diagonal(&[1.0, 1.5]).unwrap();
        assert_close(det_error_floor(&sm, 0.0), 1.5, 1e-12);
        assert_close(det_error_floor(&sm, 0.5), 0.75, 1e-12);
        let eye = SymMatrix::identity(2);
        assert_close(det_error_floor(&eye, 1.0), 0.25, 1e-12);
    }

    #[test]
    fn capacity_factor_bound_examples() {
        let iso = SymMatrix::scaled_identity(3, 0.8);
        assert_close(capacity_factor_bound(&iso, 0.0), 1.0, 1e-12);

        let half = SymMatrix::scaled_identity(2, 0.5);
        assert_close(capacity_factor_bound(&half, 1.0), 0.5, 1e-12);

        let skew = SymMatrix::from_diagonal(&[1.0, 3.0]).unwrap();
        assert_close(capacity_factor_bound(&skew, 0.0), 3.0_f64.sqrt() / 2.0, 1e-12);
    }

    #[test]
    fn trace_posterior_bound_examples() {
        let eye = SymMatrix::identity(2);
        let half = SymMatrix::scaled_identity(2, 0.5);
        assert_close(trace_posterior_bound(&eye, &half, 0.0), 0.0, 1e-12);
        assert_close(trace_posterior_bound(&eye, &half, 1.0), 1.0, 1e-12);

        let sm = SymMatrix::from_diagonal(&[1.0, 1.5]).unwrap();
        let expect = 2.5 - 2.0 * 1.5_f64.sqrt();
        assert_close(trace_posterior_bound(&sm, &half, 0.0), expect, 1e-12);
    }

    #[test]
    fn capacity_grows_with_power_and_flattens() {
        let eigs = [0.5, 1.0, 2.0];
        let caps: Vec<f64> = (0..40)
            .map(|i| waterfill_eigs(&eigs, 0.25 * i as f64).unwrap().capacity_bits)
            .collect();
        for w in caps.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "capacity decreased: {w:?}");
        }
        // Concavity: increments shrink.
        for w in caps.windows(3) {
            assert!(w[2] - w[1] <= w[1] - w[0] + 1e-9, "increments grew: {w:?}");
        }
    }
}

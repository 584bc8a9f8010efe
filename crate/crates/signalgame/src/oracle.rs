//! Brute-force reference solvers.
//!
//! Nothing here is clever on purpose: these functions certify the
//! closed-form solvers by direct search over the feasible set, so they must
//! share as little structure with them as possible. They are meant for
//! tests and small instances.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cheaptalk::{encoder_objective, mismatch_matrix, Scenario};
use crate::gaussmat::SymMatrix;
use crate::{Error, Result};

/// Exhaustive subset search refuses beyond this dimension (2ⁿ candidates).
pub const MAX_EXHAUSTIVE_DIM: usize = 12;

/// Draws posterior covariances uniformly-ish from the feasible Loewner
/// interval `[O, Σm]`, always including both endpoints.
///
/// Each draw builds `Π = W·diag(t)·Wᵀ` from a random orthogonal `W` (QR of
/// a Gaussian matrix) and `t` uniform in `[0,1]ⁿ`, then maps back through
/// `Σu = Σm^{1/2}·Π·Σm^{1/2}` — feasibility holds by construction.
pub struct FeasibleSampler<'a> {
    scenario: &'a Scenario,
    count: usize,
    seed: u64,
}

impl<'a> FeasibleSampler<'a> {
    pub fn new(scenario: &'a Scenario, count: usize, seed: u64) -> Self {
        Self { scenario, count, seed }
    }

    /// Emits `count` feasible matrices; the first two are the vertices
    /// `Σu = O` and `Σu = Σm` when `count` allows.
    pub fn posteriors(&self) -> Result<Vec<SymMatrix>> {
        let n = self.scenario.dim();
        let sqrt_m = self.scenario.sigma_m().sqrt_psd()?;

        let mut out = Vec::with_capacity(self.count);
        out.push(SymMatrix::zeros(n));
        out.push(self.scenario.sigma_m().clone());
        out.truncate(self.count);

        for index in out.len()..self.count {
            // Substream per emitted matrix, so sample i is the same no
            // matter how many were requested.
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(index as u64);

            let gauss: DMatrix<f64> =
                DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
            let w = gauss.qr().q();
            let t: DMatrix<f64> = DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    rng.random::<f64>()
                } else {
                    0.0
                }
            });
            let pi = &w * t * w.transpose();
            let sigma_u =
                SymMatrix::new(sqrt_m.as_matrix() * pi * sqrt_m.as_matrix())?;
            out.push(sigma_u);
        }
        Ok(out)
    }
}

/// Convenience wrapper over [`FeasibleSampler`].
pub fn sample_feasible_posteriors(
    scen: &Scenario,
    count: usize,
    seed: u64,
) -> Result<Vec<SymMatrix>> {
    FeasibleSampler::new(scen, count, seed).posteriors()
}

/// Minimizes the encoder objective over the full eigen-indicator family
/// (all `2ⁿ` projections onto eigenvector subsets of the mismatch matrix)
/// plus `count` random feasible posteriors.
///
/// Returns the best posterior covariance and its cost. The subset family is
/// exactly the candidate set the closed-form argument reduces to, so random
/// feasible points must never beat it — which is what makes this a useful
/// independent check.
pub fn brute_force_noiseless(
    scen: &Scenario,
    count: usize,
    seed: u64,
) -> Result<(SymMatrix, f64)> {
    if !scen.is_cheap_talk() {
        return Err(Error::NotCheapTalk {
            reason: "brute-force oracle covers the noiseless unpriced game only",
        });
    }
    let n = scen.dim();
    if n > MAX_EXHAUSTIVE_DIM {
        return Err(Error::TooLarge { dim: n, max: MAX_EXHAUSTIVE_DIM });
    }

    let sqrt_m = scen.sigma_m().sqrt_psd()?;
    let eig = mismatch_matrix(scen)?.sym_eig();

    let mut best: Option<(SymMatrix, f64)> = None;
    let mut consider = |sigma_u: SymMatrix, cost: f64| {
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((sigma_u, cost));
        }
    };

    for mask in 0u32..(1u32 << n) {
        let mut pi = DMatrix::zeros(n, n);
        for i in 0..n {
            if mask & (1 << i) != 0 {
                let q = eig.vectors.column(i);
                pi += q * q.transpose();
            }
        }
        let sigma_u = SymMatrix::new(sqrt_m.as_matrix() * pi * sqrt_m.as_matrix())?;
        let cost = encoder_objective(scen, &sigma_u)?;
        consider(sigma_u, cost);
    }

    for sigma_u in sample_feasible_posteriors(scen, count, seed)? {
        let cost = encoder_objective(scen, &sigma_u)?;
        consider(sigma_u, cost);
    }

    Ok(best.expect("candidate set is never empty"))
}

/// Golden-section minimizer of the scalar lower-bound cost over
/// `P ∈ [0, P_hi]`, with `P_hi = σw·√((2a−1)σm²/ρ) + 10σw²` safely past the
/// stationary point. Interval tolerance `1e-8`.
///
/// Preconditions: `a > 1/2`, `σm² > 0`, `σw² > 0`, `ρ > 0`.
pub fn golden_section_power(a: f64, sigma_m2: f64, sigma_w2: f64, rho: f64) -> f64 {
    let f = |p: f64| crate::noisy::lower_bound_cost(a, 0.0, sigma_m2, sigma_w2, rho, p);
    let hi = sigma_w2.sqrt() * ((2.0 * a - 1.0) * sigma_m2 / rho).sqrt() + 10.0 * sigma_w2;

    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut lo = 0.0;
    let mut hi = hi;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-8 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

//! Noisy costly signaling: optimal transmission power and informativeness
//! thresholds when the channel adds Gaussian noise and power is priced at
//! `ρ` per unit.
//!
//! In the scalar game the equilibrium is exact: an informative equilibrium
//! exists iff `0 < ρ < (2a−1)σm²/σw²`, with closed-form optimal power. In
//! higher dimension the same analysis runs through an information-theoretic
//! lower bound on the encoder's cost; it certifies an equilibrium only when
//! both covariances are isotropic (the i.i.d. case), and otherwise reports
//! signaling *potential* — the power level at which the lower bound, not
//! necessarily the game itself, turns informative.

use crate::cheaptalk::Scenario;
use crate::gaussmat::SymMatrix;
use crate::{Error, Result};

/// Relative guard band around the informativeness boundary.
///
/// Parameter sets that sit exactly on the boundary in real arithmetic (e.g.
/// `a = 0.8, σm² = 1, σw² = 0.5, ρ = 1.2`) can land a few ulps on either
/// side of it after rounding to binary, so a plain `ρ < threshold` would
/// classify them by roundoff luck. Informative therefore requires
/// `ρ < threshold·(1 − BOUNDARY_GUARD)`: the strict inequality, applied
/// deterministically. Points farther than ~1e-12 relative from the boundary
/// are unaffected.
pub const BOUNDARY_GUARD: f64 = 1e-12;

/// Entrywise tolerance for the isotropy check behind the `certified` flag.
pub const ISOTROPY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerRegime {
    NonInformative,
    Informative,
}

impl PowerRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NonInformative => "non-informative",
            Self::Informative => "informative",
        }
    }
}

impl std::fmt::Display for PowerRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of the power optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSolution {
    pub regime: PowerRegime,
    /// Optimal transmission power; zero in the non-informative regime.
    pub p_star: f64,
    /// Price threshold below which signaling pays; zero when `a ≤ 1/2`.
    pub rho_threshold: f64,
    /// Lower-bound cost at `p_star`, constants included. At `p_star = 0` in
    /// the isotropic case this equals the babbling cost exactly.
    pub f_p_star: f64,
    /// Gain of the isotropic linear encoder `L = α·I` spending exactly
    /// `p_star`; zero when non-informative.
    pub alpha: f64,
    /// True when the solution is a certified equilibrium (scalar instances,
    /// or isotropic covariances where the lower bound is known tight);
    /// false when it only bounds the general vector game.
    pub certified: bool,
}

/// `true` when `M` is within [`ISOTROPY_TOL`] of `(Tr M / n)·I` entrywise.
fn is_isotropic(m: &SymMatrix) -> bool {
    let n = m.dim();
    let mean = m.trace() / n as f64;
    let mat = m.as_matrix();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let want = if i == j { mean } else { 0.0 };
            (mat[(i, j)] - want).abs() <= ISOTROPY_TOL
        })
    })
}

/// Lower-bound cost of the scalar game at transmission power `P`:
/// `(2a−1)σm²σw²/(σw²+P) + ρP + (a−1)²σm² + b²`.
///
/// For `a > 1/2` this is strictly convex in `P ≥ 0` and its minimizer is
/// the equilibrium power.
pub fn lower_bound_cost(
    a: f64,
    b: f64,
    sigma_m2: f64,
    sigma_w2: f64,
    rho: f64,
    power: f64,
) -> f64 {
    (2.0 * a - 1.0) * sigma_m2 * sigma_w2 / (sigma_w2 + power)
        + rho * power
        + (a - 1.0) * (a - 1.0) * sigma_m2
        + b * b
}

fn check_signaling_params(sigma_m2: f64, sigma_w2: f64, rho: f64) -> Result<()> {
    if !(sigma_m2.is_finite() && sigma_m2 > 0.0) {
        return Err(Error::InvalidScenario {
            reason: "source variance must be positive",
        });
    }
    if !(sigma_w2.is_finite() && sigma_w2 > 0.0) {
        return Err(Error::InvalidScenario {
            reason: "noise variance must be positive",
        });
    }
    if !rho.is_finite() || rho < 0.0 {
        return Err(Error::InvalidScenario {
            reason: "power price rho must be finite and nonnegative",
        });
    }
    if rho == 0.0 {
        return Err(Error::NotSignaling);
    }
    Ok(())
}

/// Exact scalar equilibrium power.
///
/// For `a > 1/2` an informative equilibrium exists iff
/// `ρ < (2a−1)σm²/σw²` (strict; see [`BOUNDARY_GUARD`]), and then
/// `P* = σw·√((2a−1)σm²/ρ) − σw²`. Otherwise the unique equilibrium is
/// non-informative and `P* = 0`.
pub fn scalar_power(a: f64, b: f64, sigma_m2: f64, sigma_w2: f64, rho: f64) -> Result<PowerSolution> {
    check_signaling_params(sigma_m2, sigma_w2, rho)?;

    let rho_threshold = if a > 0.5 {
        (2.0 * a - 1.0) * sigma_m2 / sigma_w2
    } else {
        0.0
    };
    let informative = a > 0.5 && rho < rho_threshold * (1.0 - BOUNDARY_GUARD);

    let p_star = if informative {
        sigma_w2.sqrt() * ((2.0 * a - 1.0) * sigma_m2 / rho).sqrt() - sigma_w2
    } else {
        0.0
    };
    let alpha = if informative { (p_star / sigma_m2).sqrt() } else { 0.0 };

    Ok(PowerSolution {
        regime: if informative {
            PowerRegime::Informative
        } else {
            PowerRegime::NonInformative
        },
        p_star,
        rho_threshold,
        f_p_star: lower_bound_cost(a, b, sigma_m2, sigma_w2, rho, p_star),
        alpha,
        certified: true,
    })
}

/// Validates the isotropic-sensitivity preconditions shared by
/// [`multidim_threshold`] and [`optimize_bound_power`], returning
/// `(a, κ, τ)` with `κ = n²·|Σm|^{1/n}|Σw|^{1/n}` and `τ = Tr(Σw)`.
fn isotropic_setup(scen: &Scenario) -> Result<(f64, f64, f64)> {
    let a = scen.isotropic_gain().ok_or(Error::NotIsotropic)?;
    let min_w = scen.sigma_w().min_eig();
    if min_w <= 1e-10 {
        return Err(Error::NotPd { min_eigenvalue: min_w });
    }
    let n = scen.dim() as f64;
    let kappa = n * n * det_root(scen.sigma_m()) * det_root(scen.sigma_w());
    let tau = scen.sigma_w().trace();
    Ok((a, kappa, tau))
}

/// `|M|^{1/n}` via the log-domain eigenvalue mean.
fn det_root(m: &SymMatrix) -> f64 {
    let eig = m.sym_eig();
    let n = m.dim() as f64;
    (eig.values.iter().map(|&v| v.ln()).sum::<f64>() / n).exp()
}

/// Price threshold below which the cost lower bound is minimized at
/// strictly positive power, for `A = a·I`:
/// `(2a−1)·n²·|Σm|^{1/n}|Σw|^{1/n} / Tr(Σw)²`.
///
/// Returns 0 when `a ≤ 1/2` (non-informative regardless of price). For
/// `Σm = σm²·I` and `Σw = σw²·I` the expression collapses to the scalar
/// threshold `(2a−1)σm²/σw²`.
pub fn multidim_threshold(scen: &Scenario) -> Result<f64> {
    let (a, kappa, tau) = isotropic_setup(scen)?;
    if a <= 0.5 {
        return Ok(0.0);
    }
    Ok((2.0 * a - 1.0) * kappa / (tau * tau))
}

/// Minimizes the vector-game cost lower bound
/// `(2a−1)·κ/(P+τ) + ρP + (a−1)²·Tr(Σm) + ‖b‖²` over `P ≥ 0`.
///
/// The function is strictly convex with stationary point
/// `√((2a−1)κ/ρ) − τ`, taken when positive; the informative classification
/// applies the same guarded strict threshold as [`scalar_power`]. The
/// result is `certified` only when both covariances are isotropic, where
/// the bound is known to be achieved; otherwise it reports signaling
/// potential.
pub fn optimize_bound_power(scen: &Scenario) -> Result<PowerSolution> {
    let (a, kappa, tau) = isotropic_setup(scen)?;
    let rho = scen.rho();
    if !rho.is_finite() || rho < 0.0 {
        return Err(Error::InvalidScenario {
            reason: "power price rho must be finite and nonnegative",
        });
    }
    if rho == 0.0 {
        return Err(Error::NotSignaling);
    }

    let rho_threshold = if a > 0.5 { (2.0 * a - 1.0) * kappa / (tau * tau) } else { 0.0 };
    let informative = a > 0.5 && rho < rho_threshold * (1.0 - BOUNDARY_GUARD);

    let p_star = if informative {
        ((2.0 * a - 1.0) * kappa / rho).sqrt() - tau
    } else {
        0.0
    };

    let trace_m = scen.sigma_m().trace();
    let f_p_star = (2.0 * a - 1.0) * kappa / (p_star + tau)
        + rho * p_star
        + (a - 1.0) * (a - 1.0) * trace_m
        + scen.bias().norm_squared();

    let alpha = if informative { (p_star / trace_m).sqrt() } else { 0.0 };
    let certified = is_isotropic(scen.sigma_m()) && is_isotropic(scen.sigma_w());

    Ok(PowerSolution {
        regime: if informative {
            PowerRegime::Informative
        } else {
            PowerRegime::NonInformative
        },
        p_star,
        rho_threshold,
        f_p_star,
        alpha,
        certified,
    })
}

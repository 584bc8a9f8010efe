//! Noiseless cheap-talk equilibria.
//!
//! With a noiseless, costless channel the encoder's commitment problem
//! reduces to choosing a posterior covariance `Σu` inside the Loewner
//! interval `[O, Σm]` to minimize `Tr(V·Σu)` with cost kernel
//! `V = I − (A + Aᵀ)`. Whitening by `Σm^{1/2}` turns that into minimizing
//! `Tr(B·Π)` over projections, where `B = Σm^{1/2} V Σm^{1/2}` — so the
//! optimum is the projection onto the strictly negative eigenspace of `B`,
//! and the equilibrium reveals exactly those directions.

use nalgebra::{DMatrix, DVector};

use crate::gaussmat::{EigenPairs, SymMatrix, DEFAULT_PINV_TOL, PSD_TOL};
use crate::{Error, Result};

/// Eigenvalues of `B` with magnitude at or below this count as zero:
/// excluded from the revealed subspace (minimum-rank selection) and flagged
/// as degenerate, since any disclosure level in those directions is
/// equilibrium-indifferent.
pub const ZERO_EIG_TOL: f64 = 1e-10;

/// Loewner slack when checking a candidate posterior covariance against
/// `O ⪯ Σu ⪯ Σm`.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// A complete game instance: Gaussian source, encoder sensitivity, channel
/// noise, and power price. `sigma_w = O` with `rho = 0` is the cheap-talk
/// regime; anything else belongs to the noisy solvers.
#[derive(Debug, Clone)]
pub struct Scenario {
    sigma_m: SymMatrix,
    a: DMatrix<f64>,
    b: DVector<f64>,
    sigma_w: SymMatrix,
    rho: f64,
}

impl Scenario {
    /// Validates and assembles a scenario.
    ///
    /// Requirements: `Σm ≻ O` (smallest eigenvalue above `1e-10`), `Σw ⪰ O`,
    /// `ρ ≥ 0`, and consistent dimensions throughout.
    pub fn new(
        sigma_m: SymMatrix,
        a: DMatrix<f64>,
        b: DVector<f64>,
        sigma_w: SymMatrix,
        rho: f64,
    ) -> Result<Self> {
        let n = sigma_m.dim();
        if a.nrows() != n || a.ncols() != n {
            return Err(Error::Dim {
                expected: n,
                got: a.nrows().max(a.ncols()),
            });
        }
        if b.len() != n {
            return Err(Error::Dim { expected: n, got: b.len() });
        }
        if sigma_w.dim() != n {
            return Err(Error::Dim {
                expected: n,
                got: sigma_w.dim(),
            });
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix { context: "Scenario A" });
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix { context: "Scenario b" });
        }
        let min_m = sigma_m.min_eig();
        if min_m <= 1e-10 {
            return Err(Error::NotPd { min_eigenvalue: min_m });
        }
        let min_w = sigma_w.min_eig();
        if min_w < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue: min_w });
        }
        if !rho.is_finite() || rho < 0.0 {
            return Err(Error::InvalidScenario {
                reason: "power price rho must be finite and nonnegative",
            });
        }
        Ok(Self { sigma_m, a, b, sigma_w, rho })
    }

    /// One-dimensional scenario from scalar parameters.
    pub fn scalar(a: f64, b: f64, sigma_m2: f64, sigma_w2: f64, rho: f64) -> Result<Self> {
        if !(sigma_m2.is_finite() && sigma_m2 > 0.0) {
            return Err(Error::InvalidScenario {
                reason: "source variance must be positive",
            });
        }
        if !(sigma_w2.is_finite() && sigma_w2 >= 0.0) {
            return Err(Error::InvalidScenario {
                reason: "noise variance must be nonnegative",
            });
        }
        Self::new(
            SymMatrix::from_diagonal(&[sigma_m2])?,
            DMatrix::from_element(1, 1, a),
            DVector::from_element(1, b),
            SymMatrix::from_diagonal(&[sigma_w2])?,
            rho,
        )
    }

    pub fn dim(&self) -> usize {
        self.sigma_m.dim()
    }

    pub fn sigma_m(&self) -> &SymMatrix {
        &self.sigma_m
    }

    /// Sensitivity matrix `A`: the encoder wants the decoder's action to
    /// track `A·m + b` rather than `m`.
    pub fn sensitivity(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn bias(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn sigma_w(&self) -> &SymMatrix {
        &self.sigma_w
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// True when the channel is exactly noiseless and unpriced.
    pub fn is_cheap_talk(&self) -> bool {
        self.rho == 0.0 && self.sigma_w.as_matrix().iter().all(|&x| x == 0.0)
    }

    /// If `A = a·I` within `1e-12` entrywise, returns `a`.
    pub fn isotropic_gain(&self) -> Option<f64> {
        let n = self.dim();
        let a = self.a[(0, 0)];
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { a } else { 0.0 };
                if (self.a[(i, j)] - want).abs() > 1e-12 {
                    return None;
                }
            }
        }
        Some(a)
    }
}

/// Disclosure regime of a multidimensional equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    NonInformative,
    PartiallyRevealing,
    FullyRevealing,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NonInformative => "non-informative",
            Self::PartiallyRevealing => "partially-revealing",
            Self::FullyRevealing => "fully-revealing",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scalar cheap-talk classification; the boundary `a = 1/2` leaves the
/// encoder indifferent between every disclosure level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarRegime {
    NonInformative,
    FullyRevealing,
    Indifferent,
}

impl ScalarRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NonInformative => "non-informative",
            Self::FullyRevealing => "fully-revealing",
            Self::Indifferent => "indifferent",
        }
    }
}

impl std::fmt::Display for ScalarRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed-form cheap-talk equilibrium.
#[derive(Debug, Clone)]
pub struct EquilibriumSolution {
    /// Cost kernel `V = I − (A + Aᵀ)`.
    pub v: SymMatrix,
    /// Whitened kernel `B = Σm^{1/2} V Σm^{1/2}`.
    pub b: SymMatrix,
    /// Eigendecomposition of `B`, ascending.
    pub eig: EigenPairs,
    /// Number of strictly negative eigenvalues of `B` — the rank of the
    /// revealed subspace.
    pub k: usize,
    /// Projection onto the revealed subspace (in whitened coordinates).
    pub pi_star: SymMatrix,
    /// Equilibrium posterior covariance `Σu* = Σm^{1/2} Π* Σm^{1/2}`.
    pub sigma_u_star: SymMatrix,
    /// Linear encoder realizing the equilibrium: rows `1..k` are
    /// `Qₖᵀ Σm^{−1/2}`, remaining rows zero.
    pub l: DMatrix<f64>,
    pub encoder_cost: f64,
    pub decoder_cost: f64,
    pub regime: Regime,
    /// True when some eigenvalue of `B` is zero within tolerance: the
    /// equilibrium set is then non-unique (disclosure along those directions
    /// is cost-neutral) and this solution is the minimum-rank representative.
    pub degenerate: bool,
}

/// Cost kernel `V = I − (A + Aᵀ)`.
pub fn cost_kernel(a: &DMatrix<f64>) -> Result<SymMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dim {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    let n = a.nrows();
    SymMatrix::new(DMatrix::identity(n, n) - (a + a.transpose()))
}

/// Whitened mismatch matrix `B = Σm^{1/2} V Σm^{1/2}`. Its strictly negative
/// eigenspace is exactly the subspace the equilibrium reveals.
pub fn mismatch_matrix(scen: &Scenario) -> Result<SymMatrix> {
    let v = cost_kernel(scen.sensitivity())?;
    let sqrt_m = scen.sigma_m().sqrt_psd()?;
    SymMatrix::new(sqrt_m.as_matrix() * v.as_matrix() * sqrt_m.as_matrix())
}

/// Scalar cheap-talk regime as a function of the sensitivity `a`.
pub fn scalar_regime(a: f64) -> ScalarRegime {
    if a > 0.5 {
        ScalarRegime::FullyRevealing
    } else if a < 0.5 {
        ScalarRegime::NonInformative
    } else {
        ScalarRegime::Indifferent
    }
}

/// Encoder's committed cost at posterior covariance `Σu`:
/// `Tr(V·Σu) + Tr(AᵀA·Σm) + ‖b‖²`.
///
/// Rejects `Σu` outside the Loewner interval `[O, Σm]` (slack
/// [`FEASIBILITY_TOL`]).
pub fn encoder_objective(scen: &Scenario, sigma_u: &SymMatrix) -> Result<f64> {
    if sigma_u.dim() != scen.dim() {
        return Err(Error::Dim {
            expected: scen.dim(),
            got: sigma_u.dim(),
        });
    }
    if !sigma_u.loewner_geq(&SymMatrix::zeros(scen.dim()), FEASIBILITY_TOL)? {
        return Err(Error::Infeasible {
            reason: "posterior covariance has a negative eigenvalue",
        });
    }
    if !scen.sigma_m().loewner_geq(sigma_u, FEASIBILITY_TOL)? {
        return Err(Error::Infeasible {
            reason: "posterior covariance exceeds the source covariance",
        });
    }
    let v = cost_kernel(scen.sensitivity())?;
    Ok(objective_value(scen, &v, sigma_u))
}

/// Objective without the feasibility gate, for internal use on matrices that
/// are feasible by construction.
fn objective_value(scen: &Scenario, v: &SymMatrix, sigma_u: &SymMatrix) -> f64 {
    let a = scen.sensitivity();
    let constant = (a.transpose() * a * scen.sigma_m().as_matrix()).trace();
    (v.as_matrix() * sigma_u.as_matrix()).trace() + constant + scen.bias().norm_squared()
}

/// Solves the noiseless game in closed form.
///
/// The equilibrium posterior covariance is `Σm^{1/2} Π* Σm^{1/2}` where `Π*`
/// projects onto the eigenvectors of `B` with strictly negative eigenvalues.
/// Zero eigenvalues (within [`ZERO_EIG_TOL`]) are excluded, giving the
/// minimum-rank (least informative) equilibrium; their presence is surfaced
/// through [`EquilibriumSolution::degenerate`].
pub fn solve_noiseless(scen: &Scenario) -> Result<EquilibriumSolution> {
    if scen.rho() > 0.0 {
        return Err(Error::NotCheapTalk {
            reason: "transmission power is priced (rho > 0)",
        });
    }
    if !scen.is_cheap_talk() {
        return Err(Error::NotCheapTalk {
            reason: "channel noise covariance is nonzero",
        });
    }

    let n = scen.dim();
    let v = cost_kernel(scen.sensitivity())?;
    let sqrt_m = scen.sigma_m().sqrt_psd()?;
    let inv_sqrt_m = sqrt_m.pinv_psd(DEFAULT_PINV_TOL)?;
    let b = SymMatrix::new(sqrt_m.as_matrix() * v.as_matrix() * sqrt_m.as_matrix())?;
    let eig = b.sym_eig();

    // Ascending order puts the strictly negative eigenvalues first, so the
    // revealed subspace is spanned by the leading k columns.
    let k = eig.values.iter().filter(|&&beta| beta < -ZERO_EIG_TOL).count();
    let degenerate = eig.values.iter().any(|&beta| beta.abs() <= ZERO_EIG_TOL);

    let qk = eig.vectors.columns(0, k);
    let pi_star = SymMatrix::new(qk * qk.transpose())?;
    let sigma_u_star =
        SymMatrix::new(sqrt_m.as_matrix() * pi_star.as_matrix() * sqrt_m.as_matrix())?;

    let mut l = DMatrix::zeros(n, n);
    l.rows_mut(0, k)
        .copy_from(&(qk.transpose() * inv_sqrt_m.as_matrix()));

    let encoder_cost = objective_value(scen, &v, &sigma_u_star);
    let decoder_cost = scen.sigma_m().trace() - sigma_u_star.trace();
    let regime = if k == 0 {
        Regime::NonInformative
    } else if k == n {
        Regime::FullyRevealing
    } else {
        Regime::PartiallyRevealing
    };

    Ok(EquilibriumSolution {
        v,
        b,
        eig,
        k,
        pi_star,
        sigma_u_star,
        l,
        encoder_cost,
        decoder_cost,
        regime,
        degenerate,
    })
}

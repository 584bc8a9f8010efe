//! Deterministic Monte Carlo validation of equilibria.
//!
//! A run draws i.i.d. pairs `(m, w)`, pushes them through a fixed linear
//! encoder `x = L·m`, the additive channel `y = x + w`, and the exact LMMSE
//! decoder `u = K·y`, then reports empirical second moments and costs with
//! batch-means standard errors.
//!
//! Reproducibility contract: identical [`SimConfig`] (seed included) yields
//! a bit-identical [`SimReport`], independent of thread scheduling. Batches
//! get independent counter-based RNG streams keyed by `(seed, batch index)`,
//! results are collected in batch order, and the merge is a fixed-order
//! sequential fold — so parallelism never touches the arithmetic.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::cheaptalk::Scenario;
use crate::gaussmat::{SymMatrix, DEFAULT_PINV_TOL};
use crate::{Error, Result};

/// Number of batches used for batch-means error estimation (fewer when the
/// sample count is smaller).
pub const BATCHES: usize = 20;

/// A complete, reproducible simulation request.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub scenario: Scenario,
    /// Linear encoder `L`; the channel input is `x = L·m`.
    pub encoder: DMatrix<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(scenario: Scenario, encoder: DMatrix<f64>, samples: usize, seed: u64) -> Result<Self> {
        let n = scenario.dim();
        if encoder.nrows() != n || encoder.ncols() != n {
            return Err(Error::Dim {
                expected: n,
                got: encoder.nrows().max(encoder.ncols()),
            });
        }
        if encoder.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix { context: "encoder L" });
        }
        if samples == 0 {
            return Err(Error::InvalidScenario {
                reason: "sample count must be at least 1",
            });
        }
        Ok(Self { scenario, encoder, samples, seed })
    }

    /// Isotropic encoder `L = α·I`.
    pub fn with_gain(scenario: Scenario, alpha: f64, samples: usize, seed: u64) -> Result<Self> {
        let n = scenario.dim();
        Self::new(scenario, DMatrix::identity(n, n) * alpha, samples, seed)
    }
}

/// Empirical moments and costs from one run. Matrix standard errors are
/// entrywise; `stderr_ortho` aggregates the entrywise standard errors of
/// `E[u(m−u)ᵀ]` in quadrature so it bounds the Frobenius residual the same
/// way a scalar standard error bounds a scalar estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    /// Empirical `E[u·uᵀ]`.
    pub emp_sigma_u: SymMatrix,
    /// Empirical `E[(m−u)(m−u)ᵀ]`.
    pub emp_sigma_e: SymMatrix,
    /// Empirical `E‖m − u‖²`.
    pub emp_decoder_cost: f64,
    /// Empirical `E‖u − (A·m + b)‖² + ρ·E‖x‖²`.
    pub emp_encoder_cost: f64,
    /// Empirical `E‖x‖²`.
    pub emp_power: f64,
    /// Frobenius norm of the empirical `E[u(m−u)ᵀ]`; zero in expectation for
    /// the exact LMMSE decoder.
    pub ortho_residual: f64,
    pub stderr_decoder_cost: f64,
    pub stderr_encoder_cost: f64,
    pub stderr_power: f64,
    pub stderr_sigma_u: DMatrix<f64>,
    pub stderr_sigma_e: DMatrix<f64>,
    pub stderr_ortho: f64,
    pub seed: u64,
    pub samples: usize,
    pub batches: usize,
}

/// Exact LMMSE decoder for the linear channel: `K = Σm·Lᵀ·(L·Σm·Lᵀ + Σw)⁺`,
/// so `u = K·y` is the conditional mean of `m` given `y`. The pseudoinverse
/// keeps the noiseless (`Σw = O`) case well-defined.
pub fn lmmse_decoder(l: &DMatrix<f64>, sigma_m: &SymMatrix, sigma_w: &SymMatrix) -> Result<DMatrix<f64>> {
    let n = sigma_m.dim();
    if l.nrows() != n || l.ncols() != n || sigma_w.dim() != n {
        return Err(Error::Dim {
            expected: n,
            got: l.nrows().max(l.ncols()).max(sigma_w.dim()),
        });
    }
    let sigma_yy = SymMatrix::new(l * sigma_m.as_matrix() * l.transpose() + sigma_w.as_matrix())?;
    let pinv = sigma_yy.pinv_psd(DEFAULT_PINV_TOL)?;
    Ok(sigma_m.as_matrix() * l.transpose() * pinv.as_matrix())
}

/// Draws `n_samples` columns from `N(0, Σ)` deterministically from `seed`.
///
/// The factor is the PSD square root (not Cholesky), so rank-deficient and
/// zero covariances sample cleanly.
pub fn sample_gaussian(sigma: &SymMatrix, n_samples: usize, seed: u64) -> Result<DMatrix<f64>> {
    let factor = sigma.sqrt_psd()?;
    let n = sigma.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = DMatrix::zeros(n, n_samples);
    for mut col in z.column_iter_mut() {
        for zi in col.iter_mut() {
            *zi = StandardNormal.sample(&mut rng);
        }
    }
    Ok(factor.as_matrix() * z)
}

/// Per-batch running sums. Second moments are accumulated without mean
/// subtraction — every sampled process here is zero-mean by construction.
struct BatchSums {
    count: usize,
    uu: DMatrix<f64>,
    ee: DMatrix<f64>,
    ue: DMatrix<f64>,
    dec: f64,
    enc: f64,
    pow: f64,
    scatter: Vec<(DVector<f64>, DVector<f64>)>,
}

fn run_batch(
    cfg: &SimConfig,
    factor_m: &DMatrix<f64>,
    factor_w: &DMatrix<f64>,
    decoder: &DMatrix<f64>,
    batch_index: usize,
    count: usize,
    keep_scatter: bool,
) -> BatchSums {
    let n = cfg.scenario.dim();
    let a = cfg.scenario.sensitivity();
    let b = cfg.scenario.bias();
    let rho = cfg.scenario.rho();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(batch_index as u64);

    let mut sums = BatchSums {
        count,
        uu: DMatrix::zeros(n, n),
        ee: DMatrix::zeros(n, n),
        ue: DMatrix::zeros(n, n),
        dec: 0.0,
        enc: 0.0,
        pow: 0.0,
        scatter: if keep_scatter { Vec::with_capacity(count) } else { Vec::new() },
    };

    let mut zm = DVector::zeros(n);
    let mut zw = DVector::zeros(n);
    for _ in 0..count {
        for zi in zm.iter_mut() {
            *zi = StandardNormal.sample(&mut rng);
        }
        for zi in zw.iter_mut() {
            *zi = StandardNormal.sample(&mut rng);
        }
        let m = factor_m * &zm;
        let w = factor_w * &zw;
        let x = &cfg.encoder * &m;
        let y = &x + &w;
        let u = decoder * &y;
        let e = &m - &u;

        sums.uu += &u * u.transpose();
        sums.ee += &e * e.transpose();
        sums.ue += &u * e.transpose();
        sums.dec += e.norm_squared();
        let target_gap = &u - (a * &m + b);
        sums.pow += x.norm_squared();
        sums.enc += target_gap.norm_squared() + rho * x.norm_squared();

        if keep_scatter {
            sums.scatter.push((m, u));
        }
    }
    sums
}

/// Unweighted batch-means spread: standard error of the mean of `values`.
/// Returns 0 when fewer than two batches exist (spread undefined).
fn batch_stderr(values: &[f64]) -> f64 {
    let nb = values.len();
    if nb < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / nb as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nb - 1) as f64;
    (var / nb as f64).sqrt()
}

fn matrix_batch_stderr(batch_means: &[DMatrix<f64>]) -> DMatrix<f64> {
    let (r, c) = (batch_means[0].nrows(), batch_means[0].ncols());
    DMatrix::from_fn(r, c, |i, j| {
        let vals: Vec<f64> = batch_means.iter().map(|m| m[(i, j)]).collect();
        batch_stderr(&vals)
    })
}

/// Per-sample `(m, u)` pairs in draw order, as collected for scatter output.
pub type ScatterPairs = Vec<(DVector<f64>, DVector<f64>)>;

fn run_internal(cfg: &SimConfig, keep_scatter: bool) -> Result<(SimReport, ScatterPairs)> {
    let factor_m = cfg.scenario.sigma_m().sqrt_psd()?.into_matrix();
    let factor_w = cfg.scenario.sigma_w().sqrt_psd()?.into_matrix();
    let decoder = lmmse_decoder(&cfg.encoder, cfg.scenario.sigma_m(), cfg.scenario.sigma_w())?;

    let nb = cfg.samples.min(BATCHES);
    let counts: Vec<usize> = (0..nb)
        .map(|b| cfg.samples / nb + usize::from(b < cfg.samples % nb))
        .collect();

    // Indexed parallel map + ordered collect: the result vector is in batch
    // order no matter how the batches were scheduled.
    let batches: Vec<BatchSums> = counts
        .par_iter()
        .enumerate()
        .map(|(b, &count)| run_batch(cfg, &factor_m, &factor_w, &decoder, b, count, keep_scatter))
        .collect();

    let n = cfg.scenario.dim();
    let total = cfg.samples as f64;
    let mut sum_uu = DMatrix::zeros(n, n);
    let mut sum_ee = DMatrix::zeros(n, n);
    let mut sum_ue = DMatrix::zeros(n, n);
    let (mut sum_dec, mut sum_enc, mut sum_pow) = (0.0, 0.0, 0.0);
    for batch in &batches {
        sum_uu += &batch.uu;
        sum_ee += &batch.ee;
        sum_ue += &batch.ue;
        sum_dec += batch.dec;
        sum_enc += batch.enc;
        sum_pow += batch.pow;
    }

    let mean_uu: Vec<DMatrix<f64>> = batches.iter().map(|b| &b.uu / b.count as f64).collect();
    let mean_ee: Vec<DMatrix<f64>> = batches.iter().map(|b| &b.ee / b.count as f64).collect();
    let mean_ue: Vec<DMatrix<f64>> = batches.iter().map(|b| &b.ue / b.count as f64).collect();
    let dec_means: Vec<f64> = batches.iter().map(|b| b.dec / b.count as f64).collect();
    let enc_means: Vec<f64> = batches.iter().map(|b| b.enc / b.count as f64).collect();
    let pow_means: Vec<f64> = batches.iter().map(|b| b.pow / b.count as f64).collect();

    let stderr_ue = matrix_batch_stderr(&mean_ue);
    let report = SimReport {
        emp_sigma_u: SymMatrix::new(&sum_uu / total)?,
        emp_sigma_e: SymMatrix::new(&sum_ee / total)?,
        emp_decoder_cost: sum_dec / total,
        emp_encoder_cost: sum_enc / total,
        emp_power: sum_pow / total,
        ortho_residual: (&sum_ue / total).norm(),
        stderr_decoder_cost: batch_stderr(&dec_means),
        stderr_encoder_cost: batch_stderr(&enc_means),
        stderr_power: batch_stderr(&pow_means),
        stderr_sigma_u: matrix_batch_stderr(&mean_uu),
        stderr_sigma_e: matrix_batch_stderr(&mean_ee),
        stderr_ortho: stderr_ue.iter().map(|s| s * s).sum::<f64>().sqrt(),
        seed: cfg.seed,
        samples: cfg.samples,
        batches: nb,
    };

    let scatter = if keep_scatter {
        let mut all = Vec::with_capacity(cfg.samples);
        for batch in batches {
            all.extend(batch.scatter);
        }
        all
    } else {
        Vec::new()
    };

    Ok((report, scatter))
}

/// Runs the simulation and reports empirical moments.
pub fn run_sim(cfg: &SimConfig) -> Result<SimReport> {
    run_internal(cfg, false).map(|(report, _)| report)
}

/// Like [`run_sim`], additionally returning every `(m, u)` pair in draw
/// order (batch order, then sample order within each batch).
pub fn run_sim_with_scatter(cfg: &SimConfig) -> Result<(SimReport, ScatterPairs)> {
    run_internal(cfg, true)
}

//! Machine-readable result documents: versioned JSON for solutions and
//! reports, CSV for bulk grids and scatter data.
//!
//! All floats are printed in shortest round-trip decimal form (both
//! `serde_json` and `format!("{}")` guarantee it), so re-parsing an emitted
//! document recovers bit-identical values and repeated runs are
//! byte-comparable.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use signalgame::cheaptalk::EquilibriumSolution;
use signalgame::noisy::PowerSolution;
use signalgame::simulate::SimReport;

pub const SCHEMA: &str = "signalgame/1";

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct CheaptalkDoc {
    pub schema: String,
    pub kind: String,
    pub dim: usize,
    pub regime: String,
    pub k: usize,
    pub degenerate: bool,
    #[serde(rename = "V")]
    pub v: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    #[serde(rename = "Pi_star")]
    pub pi_star: Vec<Vec<f64>>,
    #[serde(rename = "Sigma_u_star")]
    pub sigma_u_star: Vec<Vec<f64>>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<f64>>,
    pub encoder_cost: f64,
    pub decoder_cost: f64,
}

impl CheaptalkDoc {
    pub fn from_solution(sol: &EquilibriumSolution) -> Self {
        Self {
            schema: SCHEMA.to_owned(),
            kind: "cheaptalk-equilibrium".to_owned(),
            dim: sol.l.nrows(),
            regime: sol.regime.as_str().to_owned(),
            k: sol.k,
            degenerate: sol.degenerate,
            v: matrix_rows(sol.v.as_matrix()),
            b: matrix_rows(sol.b.as_matrix()),
            eigenvalues: sol.eig.values.iter().copied().collect(),
            eigenvectors: matrix_rows(&sol.eig.vectors),
            pi_star: matrix_rows(sol.pi_star.as_matrix()),
            sigma_u_star: matrix_rows(sol.sigma_u_star.as_matrix()),
            l: matrix_rows(&sol.l),
            encoder_cost: sol.encoder_cost,
            decoder_cost: sol.decoder_cost,
        }
    }
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerDoc {
    pub schema: String,
    pub kind: String,
    pub dim: usize,
    pub regime: String,
    #[serde(rename = "P_star")]
    pub p_star: f64,
    pub rho_threshold: f64,
    #[serde(rename = "fP_star")]
    pub f_p_star: f64,
    pub alpha: f64,
    pub certified: bool,
}

impl PowerDoc {
    pub fn from_solution(dim: usize, sol: &PowerSolution) -> Self {
        Self {
            schema: SCHEMA.to_owned(),
            kind: "power-solution".to_owned(),
            dim,
            regime: sol.regime.as_str().to_owned(),
            p_star: sol.p_star,
            rho_threshold: sol.rho_threshold,
            f_p_star: sol.f_p_star,
            alpha: sol.alpha,
            certified: sol.certified,
        }
    }
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct SimDoc {
    pub schema: String,
    pub kind: String,
    pub dim: usize,
    /// Which solver produced the encoder: "cheaptalk", "noisy-scalar", or
    /// "noisy-isotropic".
    pub solver: String,
    pub seed: u64,
    pub samples: u64,
    pub batches: u64,
    #[serde(rename = "L")]
    pub l: Vec<Vec<f64>>,
    #[serde(rename = "emp_Sigma_u")]
    pub emp_sigma_u: Vec<Vec<f64>>,
    #[serde(rename = "emp_Sigma_e")]
    pub emp_sigma_e: Vec<Vec<f64>>,
    pub emp_decoder_cost: f64,
    pub emp_encoder_cost: f64,
    pub emp_power: f64,
    pub ortho_residual: f64,
    pub stderr_decoder_cost: f64,
    pub stderr_encoder_cost: f64,
    pub stderr_power: f64,
    #[serde(rename = "stderr_Sigma_u")]
    pub stderr_sigma_u: Vec<Vec<f64>>,
    #[serde(rename = "stderr_Sigma_e")]
    pub stderr_sigma_e: Vec<Vec<f64>>,
    pub stderr_ortho: f64,
}

impl SimDoc {
    pub fn from_report(solver: &str, encoder: &DMatrix<f64>, report: &SimReport) -> Self {
        Self {
            schema: SCHEMA.to_owned(),
            kind: "sim-report".to_owned(),
            dim: encoder.nrows(),
            solver: solver.to_owned(),
            seed: report.seed,
            samples: report.samples as u64,
            batches: report.batches as u64,
            l: matrix_rows(encoder),
            emp_sigma_u: matrix_rows(report.emp_sigma_u.as_matrix()),
            emp_sigma_e: matrix_rows(report.emp_sigma_e.as_matrix()),
            emp_decoder_cost: report.emp_decoder_cost,
            emp_encoder_cost: report.emp_encoder_cost,
            emp_power: report.emp_power,
            ortho_residual: report.ortho_residual,
            stderr_decoder_cost: report.stderr_decoder_cost,
            stderr_encoder_cost: report.stderr_encoder_cost,
            stderr_power: report.stderr_power,
            stderr_sigma_u: matrix_rows(&report.stderr_sigma_u),
            stderr_sigma_e: matrix_rows(&report.stderr_sigma_e),
            stderr_ortho: report.stderr_ortho,
        }
    }
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct WaterfillDoc {
    pub schema: String,
    pub kind: String,
    pub nu: f64,
    pub powers: Vec<f64>,
    pub capacity_bits: f64,
    pub noise_eigs: Vec<f64>,
}

impl WaterfillDoc {
    pub fn from_result(r: &signalgame::channel::WaterFillResult) -> Self {
        Self {
            schema: SCHEMA.to_owned(),
            kind: "waterfill".to_owned(),
            nu: r.nu,
            powers: r.powers.clone(),
            capacity_bits: r.capacity_bits,
            noise_eigs: r.noise_eigs.clone(),
        }
    }
}

/// One row of the phase-diagram sweep.
pub struct PhaseCell {
    pub a: f64,
    pub rho: f64,
    pub regime: &'static str,
    pub p_star: f64,
}

/// CSV with header `a,rho,regime,p_star`, rows in (a, ρ) order.
pub fn phase_diagram_csv(cells: &[PhaseCell]) -> String {
    let mut out = String::with_capacity(32 * (cells.len() + 1));
    out.push_str("a,rho,regime,p_star\n");
    for cell in cells {
        out.push_str(&format!(
            "{},{},{},{}\n",
            cell.a, cell.rho, cell.regime, cell.p_star
        ));
    }
    out
}

/// CSV with header `m1,...,mn,u1,...,un`, one row per sample.
pub fn scatter_csv(pairs: &[(DVector<f64>, DVector<f64>)], dim: usize) -> String {
    let mut out = String::with_capacity(24 * dim * (pairs.len() + 1));
    for i in 1..=dim {
        if i > 1 {
            out.push(',');
        }
        out.push_str(&format!("m{i}"));
    }
    for i in 1..=dim {
        out.push_str(&format!(",u{i}"));
    }
    out.push('\n');
    for (m, u) in pairs {
        for (idx, value) in m.iter().chain(u.iter()).enumerate() {
            if idx > 0 {
                out.push(',');
            }
            out.push_str(&format!("{value}"));
        }
        out.push('\n');
    }
    out
}

/// Pretty JSON document with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents always serialize");
    text.push('\n');
    text
}

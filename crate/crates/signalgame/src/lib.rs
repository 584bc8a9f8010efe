//! Stackelberg equilibria of Gaussian signaling games with linear
//! sensitivity mismatch.
//!
//! A Gaussian source `m ~ N(0, Σm)` is observed by an encoder who commits to
//! a signaling strategy before a decoder picks its action. The decoder
//! minimizes mean-square error, so its best response is always the
//! conditional mean `u = E[m | y]`. The encoder instead wants the action to
//! track `A·m + b` for a sensitivity matrix `A` and bias `b`, and pays
//! `ρ·E‖x‖²` for transmission power when the channel is priced. The gap
//! between the two objectives is what makes disclosure partial rather than
//! all-or-nothing.
//!
//! The crate is organized by channel model:
//!
//! - [`gaussmat`] — symmetric-matrix primitives (eigendecomposition, PSD
//!   square roots, pseudoinverses, Loewner order) used everywhere else.
//! - [`cheaptalk`] — noiseless, costless channel. The equilibrium posterior
//!   covariance has a closed form built from the eigenvectors of a mismatch
//!   matrix; informativeness is decided by its negative eigenvalues.
//! - [`noisy`] — additive Gaussian noise with priced power. Scalar instances
//!   admit an exact threshold and optimal power; vector instances get a
//!   capacity-based lower bound that is tight for isotropic scenarios.
//! - [`channel`] — water-filling capacity and the determinant/trace bounds
//!   linking power budgets to estimation error.
//! - [`simulate`] — Monte Carlo validation of equilibria with a deterministic,
//!   batched sampler and an LMMSE decoder.
//! - [`oracle`] — brute-force reference solvers used to cross-check the
//!   analytic ones in tests.

pub mod channel;
pub mod cheaptalk;
mod error;
pub mod gaussmat;
pub mod noisy;
pub mod oracle;
pub mod simulate;

pub use error::{Error, Result};

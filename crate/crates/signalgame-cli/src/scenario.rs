//! TOML scenario files.
//!
//! ```toml
//! version = "signalgame/1"
//!
//! [source]
//! covariance = [1.0, 0.0, 0.0, 1.5]   # row-major, n×n
//!
//! [bias]
//! A = [0.8, 0.0, 0.0, 0.2]            # row-major, n×n
//! b = [0.0, 0.0]                      # length n (fixes the dimension)
//! rho = 0.0
//!
//! [channel]                           # optional; defaults to the zero matrix
//! covariance = [0.0, 0.0, 0.0, 0.0]
//!
//! [sim]                               # optional defaults for `simulate`
//! samples = 100000
//! seed = 7
//! ```

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;
use signalgame::cheaptalk::Scenario;
use signalgame::gaussmat::SymMatrix;

pub const SCHEMA_VERSION: &str = "signalgame/1";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    version: String,
    source: SourceSection,
    bias: BiasSection,
    channel: Option<ChannelSection>,
    sim: Option<SimSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceSection {
    covariance: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BiasSection {
    #[serde(rename = "A")]
    a: Vec<f64>,
    b: Vec<f64>,
    rho: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelSection {
    covariance: Vec<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimSection {
    samples: Option<u64>,
    seed: Option<u64>,
}

/// A parsed scenario plus the file's optional simulation defaults.
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub default_samples: Option<u64>,
    pub default_seed: Option<u64>,
}

/// Reads and validates a scenario file. Error messages carry the file path
/// plus either the TOML position or the offending field.
pub fn load_scenario(path: &Path) -> Result<LoadedScenario, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let file: ScenarioFile =
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;

    let fail = |field: &str, msg: String| format!("{}: {field}: {msg}", path.display());

    if file.version != SCHEMA_VERSION {
        return Err(fail(
            "version",
            format!("unsupported value {:?} (expected {SCHEMA_VERSION:?})", file.version),
        ));
    }

    let n = file.bias.b.len();
    if n == 0 {
        return Err(fail("bias.b", "must have at least one entry".into()));
    }
    let expect_square = |field: &str, entries: &[f64]| -> Result<(), String> {
        if entries.len() != n * n {
            return Err(fail(
                field,
                format!("expected {} entries for dimension {n}, got {}", n * n, entries.len()),
            ));
        }
        Ok(())
    };

    expect_square("source.covariance", &file.source.covariance)?;
    expect_square("bias.A", &file.bias.a)?;
    let channel_cov = match &file.channel {
        Some(section) => {
            expect_square("channel.covariance", &section.covariance)?;
            SymMatrix::from_row_major(n, &section.covariance)
                .map_err(|e| fail("channel.covariance", e.to_string()))?
        }
        None => SymMatrix::zeros(n),
    };

    let sigma_m = SymMatrix::from_row_major(n, &file.source.covariance)
        .map_err(|e| fail("source.covariance", e.to_string()))?;
    let a = DMatrix::from_row_slice(n, n, &file.bias.a);
    let b = DVector::from_row_slice(&file.bias.b);

    let scenario = Scenario::new(sigma_m, a, b, channel_cov, file.bias.rho)
        .map_err(|e| format!("{}: {e}", path.display()))?;

    let sim = file.sim.unwrap_or_default();
    Ok(LoadedScenario {
        scenario,
        default_samples: sim.samples,
        default_seed: sim.seed,
    })
}

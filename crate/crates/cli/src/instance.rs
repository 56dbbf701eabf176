//! Instance files: schema-versioned TOML with centers as coordinate rows,
//! an optional second configuration for rearrangement pairs, and optional
//! run parameters that command-line flags override.

use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use kp_core::BallConfiguration;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    schema: u32,
    dimension: usize,
    centers: Vec<Vec<f64>>,
    radii: Vec<f64>,
    /// Second configuration of centers (same radii) for pair commands.
    centers_q: Option<Vec<Vec<f64>>>,
    s: Option<f64>,
    seed: Option<u64>,
    samples: Option<u64>,
}

/// A parsed and validated instance plus the digest of its raw bytes.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub p: BallConfiguration,
    pub q: Option<BallConfiguration>,
    pub s: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub digest: String,
}

impl LoadedInstance {
    pub fn require_pair(&self) -> Result<&BallConfiguration, CliError> {
        self.q.as_ref().ok_or_else(|| {
            CliError::Parse("instance file must provide `centers_q` for pair commands".into())
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex::encode(hasher.finalize())
}

pub fn load_instance(path: &Path) -> Result<LoadedInstance, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let digest = sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Parse(format!("{} is not UTF-8", path.display())))?;
    let file: InstanceFile =
        toml::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if file.schema != SCHEMA_VERSION {
        return Err(CliError::Parse(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            file.schema
        )));
    }

    let p = BallConfiguration::from_rows(file.dimension, file.centers, file.radii.clone())
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let q = match file.centers_q {
        Some(rows) => Some(
            BallConfiguration::from_rows(file.dimension, rows, file.radii)
                .map_err(|e| CliError::Domain(e.to_string()))?,
        ),
        None => None,
    };
    Ok(LoadedInstance {
        p,
        q,
        s: file.s,
        seed: file.seed,
        samples: file.samples,
        digest,
    })
}

/// Renders a configuration pair back to instance-file TOML (used for the
/// worst-case dump of search campaigns).
pub fn render_instance_toml(
    p: &BallConfiguration,
    q: Option<&BallConfiguration>,
    s: f64,
) -> String {
    let mut out = String::new();
    out.push_str(&format!("schema = {SCHEMA_VERSION}\n"));
    out.push_str(&format!("dimension = {}\n", p.dim()));
    out.push_str(&format!("s = {}\n", fmt17(s)));
    out.push_str(&format!("centers = {}\n", rows_toml(p)));
    let radii: Vec<String> = p.radii().iter().map(|r| fmt17(*r)).collect();
    out.push_str(&format!("radii = [{}]\n", radii.join(", ")));
    if let Some(q) = q {
        out.push_str(&format!("centers_q = {}\n", rows_toml(q)));
    }
    out
}

fn rows_toml(c: &BallConfiguration) -> String {
    let rows: Vec<String> = c
        .centers()
        .iter()
        .map(|p| {
            let coords: Vec<String> = p.coords().iter().map(|x| fmt17(*x)).collect();
            format!("[{}]", coords.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// 17 significant digits: lossless round-trip for f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

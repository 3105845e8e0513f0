//! Run configuration: resolved once from the command line, serialized into
//! every report so a run can be reproduced from its output alone.

use serde::{Deserialize, Serialize};
use std::path::PathBuf;

pub const DEFAULT_R_MAX: f64 = 1e3;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_BISECT_TOL: f64 = 1e-8;
pub const DEFAULT_GRID: GridSpec = GridSpec {
    lo: 1e-4,
    hi: 1e3,
    count: 2048,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridSpec {
    /// Parses `lo:hi:count`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid spec must be lo:hi:count, got '{s}'"));
        }
        let lo: f64 = parts[0].parse().map_err(|_| format!("bad grid lo '{}'", parts[0]))?;
        let hi: f64 = parts[1].parse().map_err(|_| format!("bad grid hi '{}'", parts[1]))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("bad grid count '{}'", parts[2]))?;
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(format!("grid needs lo < hi, got {lo}:{hi}"));
        }
        if count < 2 {
            return Err(format!("grid needs at least 2 points, got {count}"));
        }
        Ok(Self { lo, hi, count })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub n: u32,
    pub p: Option<f64>,
    pub a: Option<f64>,
    pub r_max: f64,
    pub tol: f64,
    pub bisect_tol: f64,
    pub grid: GridSpec,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Serial execution flag; always true (the process is single-threaded),
    /// echoed so `EMDEN_SEED_DETERMINISTIC=1` runs are self-documenting.
    pub serial: bool,
}

//! Artifact emission: atomic writes, the profile table format and generic
//! named-column tables. Floats print with 17 significant digits so a
//! round-trip through the file reproduces the exact doubles.

use crate::config::OutputFormat;
use crate::error::CliError;
use emden_core::RadialProfile64;
use serde_json::json;
use std::fs;
use std::path::Path;

/// 17-significant-digit decimal form, round-trip exact for f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write-then-rename so readers never observe a half-written file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp~");
    fs::write(&tmp, bytes).map_err(|e| CliError::io(path, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))?;
    Ok(())
}

/// Profile table: CSV columns exactly `r,U,dU,V,dV`, or the JSON mirror with
/// a metadata block.
pub fn emit_profile(
    profile: &RadialProfile64,
    format: OutputFormat,
    path: &Path,
) -> Result<(), CliError> {
    if profile.samples.is_empty() {
        return Err(CliError::usage("refusing to emit an empty profile"));
    }
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("r,U,dU,V,dV\n");
            for s in &profile.samples {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt17(s.r),
                    fmt17(s.u),
                    fmt17(s.du),
                    fmt17(s.v),
                    fmt17(s.dv)
                ));
            }
            atomic_write(path, out.as_bytes())
        }
        OutputFormat::Json => {
            let doc = json!({
                "schema": 1,
                "meta": {
                    "n": profile.params.n(),
                    "p": profile.params.p(),
                    "a": profile.a,
                    "outcome": profile.outcome.tag(),
                    "r_event": profile.outcome.radius(),
                },
                "columns": ["r", "U", "dU", "V", "dV"],
                "samples": profile
                    .samples
                    .iter()
                    .map(|s| vec![s.r, s.u, s.du, s.v, s.dv])
                    .collect::<Vec<_>>(),
            });
            atomic_write(path, format!("{doc:#}\n").as_bytes())
        }
    }
}

/// Generic table with string cells (numeric cells should already be through
/// [`fmt17`] for CSV determinism).
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn emit(
        &self,
        format: OutputFormat,
        path: &Path,
        meta: serde_json::Value,
    ) -> Result<(), CliError> {
        match format {
            OutputFormat::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                atomic_write(path, out.as_bytes())
            }
            OutputFormat::Json => {
                let doc = json!({
                    "schema": 1,
                    "meta": meta,
                    "columns": self.columns,
                    "rows": self.rows,
                });
                atomic_write(path, format!("{doc:#}\n").as_bytes())
            }
        }
    }
}

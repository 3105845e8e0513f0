//! Error taxonomy: every failure maps to exactly one exit status with a
//! machine-readable record on stderr. Status 2 rejects a config before any
//! numerics run (regime gates, bad flags, empty grids); status 1 reports a
//! numerical failure inside an accepted run.

use emden_core::{IdentityError, IntegrateError, ModelError, PotentialError, ShootError};
use std::path::Path;

#[derive(Debug)]
pub struct CliError {
    pub exit: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self {
            exit: 2,
            kind: "usage",
            message: msg.into(),
        }
    }

    pub fn regime(msg: impl Into<String>) -> Self {
        Self {
            exit: 2,
            kind: "regime",
            message: msg.into(),
        }
    }

    pub fn numeric(kind: &'static str, msg: impl Into<String>) -> Self {
        Self {
            exit: 1,
            kind,
            message: msg.into(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self {
            exit: 1,
            kind: "io",
            message: format!("{}: {e}", path.display()),
        }
    }

    pub fn record(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": 1,
            "error": { "exit": self.exit, "kind": self.kind, "message": self.message }
        })
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Param(_) | ModelError::Regime(_) | ModelError::Kind(_) => Self {
                exit: 2,
                kind: "precondition",
                message: e.to_string(),
            },
            ModelError::Singularity | ModelError::Differentiation { .. } => {
                Self::numeric("model", e.to_string())
            }
        }
    }
}

impl From<IntegrateError> for CliError {
    fn from(e: IntegrateError) -> Self {
        match e {
            IntegrateError::Param(_) | IntegrateError::Domain(_) => Self {
                exit: 2,
                kind: "precondition",
                message: e.to_string(),
            },
            IntegrateError::Stiffness { .. } => Self::numeric("stiffness", e.to_string()),
            IntegrateError::Model(inner) => inner.into(),
        }
    }
}

impl From<ShootError> for CliError {
    fn from(e: ShootError) -> Self {
        match e {
            ShootError::Bracket(_) | ShootError::Window(_) | ShootError::Param(_) => Self {
                exit: 2,
                kind: "precondition",
                message: e.to_string(),
            },
            ShootError::ThresholdUnresolved(_) | ShootError::Positivity(_) => {
                Self::numeric("shooting", e.to_string())
            }
            ShootError::Integrate(inner) => inner.into(),
        }
    }
}

impl From<PotentialError> for CliError {
    fn from(e: PotentialError) -> Self {
        match e {
            PotentialError::Grid(_) | PotentialError::Field(_) => Self {
                exit: 2,
                kind: "precondition",
                message: e.to_string(),
            },
            PotentialError::Tail(_) => Self::numeric("tail", e.to_string()),
        }
    }
}

impl From<IdentityError> for CliError {
    fn from(e: IdentityError) -> Self {
        match e {
            IdentityError::Param(_) | IdentityError::Kind(_) => Self {
                exit: 2,
                kind: "precondition",
                message: e.to_string(),
            },
            IdentityError::Decay(_) | IdentityError::Boundary(_) => {
                Self::numeric("identity", e.to_string())
            }
            IdentityError::Potential(inner) => inner.into(),
        }
    }
}

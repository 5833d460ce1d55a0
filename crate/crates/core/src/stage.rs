//! Pass/fail wrapper used in reports.

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Outcome of one stage; failures keep the locus so that partial reports stay useful.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Stage<T> {
    Passed { certificate: T },
    Failed { locus: String },
}

impl<T> Stage<T> {
    pub fn from_result(r: Result<T>, passed: impl Fn(&T) -> bool, locus: impl Fn(&T) -> String) -> Self {
        match r {
            Ok(c) if passed(&c) => Stage::Passed { certificate: c },
            Ok(c) => Stage::Failed { locus: locus(&c) },
            Err(e) => Stage::Failed { locus: e.to_string() },
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self, Stage::Passed { .. })
    }

    pub fn certificate(&self) -> Option<&T> {
        match self {
            Stage::Passed { certificate } => Some(certificate),
            Stage::Failed { .. } => None,
        }
    }

    pub fn locus(&self) -> Option<&str> {
        match self {
            Stage::Passed { .. } => None,
            Stage::Failed { locus } => Some(locus),
        }
    }
}

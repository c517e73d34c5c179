//! Verification reports and resource guards shared by all check operations.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// Outcome of one identity check. `max_rel_err` is set for numeric checks,
/// `exact` for symbolic ones. Every report carries enough parameters to
/// reproduce the run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_rel_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn note(mut self, note: impl ToString) -> Self {
        self.notes.push(note.to_string());
        self
    }
}

/// Builder that stamps the elapsed time when the body finishes.
pub struct ReportBuilder {
    check: String,
    params: BTreeMap<String, String>,
    seed: Option<u64>,
    notes: Vec<String>,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(check: &str) -> Self {
        ReportBuilder {
            check: check.to_string(),
            params: BTreeMap::new(),
            seed: None,
            notes: Vec::new(),
            start: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn note(mut self, note: impl ToString) -> Self {
        self.notes.push(note.to_string());
        self
    }

    pub fn exact(self, ok: bool) -> VerificationReport {
        VerificationReport {
            check: self.check,
            params: self.params,
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            max_rel_err: None,
            exact: Some(ok),
            elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
            seed: self.seed,
            notes: self.notes,
        }
    }

    pub fn numeric(self, max_rel_err: f64, tol: f64) -> VerificationReport {
        VerificationReport {
            check: self.check,
            params: self.params,
            status: if max_rel_err.is_finite() && max_rel_err <= tol {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            max_rel_err: Some(max_rel_err),
            exact: None,
            elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
            seed: self.seed,
            notes: self.notes,
        }
    }

    pub fn failed(self, note: impl ToString) -> VerificationReport {
        VerificationReport {
            check: self.check,
            params: self.params,
            status: CheckStatus::Fail,
            max_rel_err: None,
            exact: None,
            elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
            seed: self.seed,
            notes: {
                let mut n = self.notes;
                n.push(note.to_string());
                n
            },
        }
    }
}

/// Resource guards for the symbolic checks and quadrature grids. Term counts
/// of the operator determinants grow factorially, so the defaults keep desk
/// runs snappy; `lifted()` raises them for the expensive confirmations.
#[derive(Clone, Copy, Debug)]
pub struct Guards {
    pub max_capelli_r: usize,
    pub max_nonconf_r: usize,
    pub max_nonconf_m: usize,
    pub max_grid_points: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_capelli_r: 4,
            max_nonconf_r: 2,
            max_nonconf_m: 4,
            max_grid_points: 10_000_000,
        }
    }
}

impl Guards {
    pub fn lifted() -> Self {
        Guards {
            max_capelli_r: 6,
            max_nonconf_r: 3,
            max_nonconf_m: 6,
            max_grid_points: 200_000_000,
        }
    }
}

/// Error raised when a request exceeds a resource guard or is malformed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardError(pub String);

impl std::fmt::Display for GuardError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for GuardError {}

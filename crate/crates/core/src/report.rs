//! Machine-readable reports for the identity verifiers.

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: &str = "yangian-kit/report-v1";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    /// 1-based row/column in the tensor-space matrix where the identity broke.
    pub row: usize,
    pub col: usize,
    /// Offending entry rendered as a rational function.
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub schema: String,
    pub identity: String,
    pub algebra: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Max (deg_u, deg_v) over residual numerator entries before reduction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<(usize, usize)>,
    pub elapsed_ms: u128,
}

impl IdentityReport {
    pub fn pass(identity: &str, algebra: &str, elapsed_ms: u128) -> Self {
        IdentityReport {
            schema: REPORT_SCHEMA.into(),
            identity: identity.into(),
            algebra: algebra.into(),
            status: Status::Pass,
            detail: None,
            witness: None,
            max_degree: None,
            elapsed_ms,
        }
    }

    pub fn fail(identity: &str, algebra: &str, witness: Witness, elapsed_ms: u128) -> Self {
        IdentityReport {
            schema: REPORT_SCHEMA.into(),
            identity: identity.into(),
            algebra: algebra.into(),
            status: Status::Fail,
            detail: None,
            witness: Some(witness),
            max_degree: None,
            elapsed_ms,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

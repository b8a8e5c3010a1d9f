//! Check reports and the crate-wide error type.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A list of violated laws.  Empty iff the checked structure is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

/// One violated law, with the exact offending instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub detail: String,
}

impl Report {
    pub fn ok() -> Self {
        Report::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, law: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation { law: law.into(), detail: detail.into() });
    }

    pub fn merge(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    /// Prefix every violation's law name, for nesting sub-checks.
    pub fn scoped(mut self, scope: &str) -> Report {
        for v in &mut self.violations {
            v.law = format!("{scope}/{}", v.law);
        }
        self
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("no (co)limit exists: {0}")]
    NoLimit(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a cone: {0}")]
    NotACone(String),
    #[error("base category has no terminal object")]
    NoTerminalObject,
    #[error("fibre limit missing: {0}")]
    FibreLimitMissing(String),
    #[error("limit not preserved: {0}")]
    NotPreserved(String),
    #[error("incoherent monoidal data: {0}")]
    IncoherentMonoidalData(String),
    #[error("not a componentwise adjoint: {0}")]
    NotComponentwiseAdjoint(String),
    #[error("unknown object: {0}")]
    UnknownObject(String),
    #[error("generator is not free: {0}")]
    NotFree(String),
    #[error("regular resolution missing from generator list")]
    MissingRegularResolution,
    #[error("resolution generator list not closed under naivification: {0}")]
    ResolutionNotClosed(String),
    #[error("generator list not closed under induction: {0}")]
    NotClosedUnderInduction(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invariance failure: {0}")]
    InvarianceFailure(String),
    #[error("unknown point: {0}")]
    UnknownPoint(String),
    #[error("point is not fixed: {0}")]
    NotFixed(String),
    #[error("map is not injective: {0}")]
    NotInjective(String),
    #[error("unknown fixture: {0}")]
    UnknownFixture(String),
    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;

use std::fmt;

use ql_bridge_core::contextuality::ContextualityError;
use ql_bridge_core::hilbert::HilbertError;
use ql_bridge_core::language::LanguageError;
use ql_bridge_core::order::OrderError;
use ql_bridge_core::pragmatics::PragmaticsError;
use ql_bridge_core::probability::ProbabilityError;
use ql_bridge_core::semantics::SemanticsError;
use serde_json::Value;

/// Exit status classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Input,
    Precondition,
    TPrime,
    Budget,
}

impl Kind {
    pub fn code(self) -> i32 {
        match self {
            Kind::Input => 2,
            Kind::Precondition => 3,
            Kind::TPrime => 4,
            Kind::Budget => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Input => "input",
            Kind::Precondition => "precondition",
            Kind::TPrime => "t-prime-violation",
            Kind::Budget => "budget-exhausted",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
    /// Partial result worth printing anyway.
    pub report: Option<Value>,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            kind: Kind::Input,
            message: message.into(),
            report: None,
        }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        CliError {
            kind: Kind::Precondition,
            message: message.into(),
            report: None,
        }
    }

    /// Prefixes the message with the operation or file it came from.
    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind.name(), self.message)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn with(kind: Kind, e: &impl fmt::Display) -> CliError {
    CliError {
        kind,
        message: e.to_string(),
        report: None,
    }
}

impl From<LanguageError> for CliError {
    fn from(e: LanguageError) -> Self {
        with(Kind::Input, &e)
    }
}

impl From<OrderError> for CliError {
    fn from(e: OrderError) -> Self {
        let kind = match e {
            OrderError::NotLattice { .. } | OrderError::Unbounded => Kind::Precondition,
            _ => Kind::Input,
        };
        with(kind, &e)
    }
}

impl From<SemanticsError> for CliError {
    fn from(e: SemanticsError) -> Self {
        match e {
            SemanticsError::Language(l) => l.into(),
            SemanticsError::Order(o) => o.into(),
            SemanticsError::UnknownObject(_) | SemanticsError::InvalidWeights(_) => {
                with(Kind::Input, &e)
            }
            SemanticsError::OrthoViolations(ref v) => CliError {
                kind: Kind::Precondition,
                message: e.to_string(),
                report: serde_json::to_value(v).ok(),
            },
            SemanticsError::StateAtom(_) | SemanticsError::OrthoNotClosed(_) => {
                with(Kind::Precondition, &e)
            }
        }
    }
}

impl From<HilbertError> for CliError {
    fn from(e: HilbertError) -> Self {
        match e {
            HilbertError::Semantics(s) => s.into(),
            HilbertError::Budget(_) => with(Kind::Budget, &e),
            HilbertError::NotClosed(_) => with(Kind::Precondition, &e),
            _ => with(Kind::Input, &e),
        }
    }
}

impl From<PragmaticsError> for CliError {
    fn from(e: PragmaticsError) -> Self {
        match e {
            PragmaticsError::Language(l) => l.into(),
            PragmaticsError::Hilbert(h) => h.into(),
            PragmaticsError::Order(o) => o.into(),
            PragmaticsError::Budget(_) => with(Kind::Budget, &e),
            PragmaticsError::OracleInconsistent { .. } | PragmaticsError::NoSuchPoint(_) => {
                with(Kind::Precondition, &e)
            }
            PragmaticsError::Unbound(_) | PragmaticsError::TooManyAtoms(_) => with(Kind::Input, &e),
        }
    }
}

impl From<ProbabilityError> for CliError {
    fn from(e: ProbabilityError) -> Self {
        match e {
            ProbabilityError::Semantics(s) => s.into(),
            ProbabilityError::Language(l) => l.into(),
            ProbabilityError::Hilbert(h) => h.into(),
            ProbabilityError::TPrimeViolation(ref report) => CliError {
                kind: Kind::TPrime,
                message: e.to_string(),
                report: serde_json::to_value(report).ok(),
            },
            ProbabilityError::ZeroMeasure(_)
            | ProbabilityError::NotTestable(_)
            | ProbabilityError::NotJointlyTestable { .. }
            | ProbabilityError::EmptyPostSelection { .. }
            | ProbabilityError::Resolution { .. } => with(Kind::Precondition, &e),
            ProbabilityError::InvalidProcedure { .. }
            | ProbabilityError::InvalidTransition(_)
            | ProbabilityError::InvalidLatticeSpec(_)
            | ProbabilityError::NoTrials => with(Kind::Input, &e),
        }
    }
}

impl From<ContextualityError> for CliError {
    fn from(e: ContextualityError) -> Self {
        with(Kind::Input, &e)
    }
}

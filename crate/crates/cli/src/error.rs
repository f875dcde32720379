use std::fmt;
use std::path::Path;

use dirroute::discovery::DiscoveryError;
use dirroute::network::NetworkError;
use dirroute::pathfinding::PathError;
use dirroute::sim::SimError;

/// Failure classes, each with its own exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Bad flags, unreadable inputs, invalid configuration: exit 1.
    Usage,
    /// Malformed or invalid data, unknown hubs, missing paths: exit 2.
    Validation,
    /// Internal consistency failures and output errors: exit 3.
    Internal,
}

impl Kind {
    pub fn exit_code(self) -> u8 {
        match self {
            Kind::Usage => 1,
            Kind::Validation => 2,
            Kind::Internal => 3,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Kind::Usage => "usage",
            Kind::Validation => "validation",
            Kind::Internal => "internal",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: Kind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new(Kind::Usage, message)
    }

    pub fn read(path: &Path, e: std::io::Error) -> Self {
        CliError::usage(format!("cannot read {}: {e}", path.display()))
    }

    pub fn write(path: &Path, e: std::io::Error) -> Self {
        CliError::new(Kind::Internal, format!("cannot write {}: {e}", path.display()))
    }
}

/// Single line: `error[<kind>]: <message>`.
impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line = self.message.replace('\n', " ");
        write!(f, "error[{}]: {one_line}", self.kind.tag())
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        let kind = match e {
            NetworkError::Generation(_) => Kind::Usage,
            _ => Kind::Validation,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<PathError> for CliError {
    fn from(e: PathError) -> Self {
        CliError::new(Kind::Validation, e.to_string())
    }
}

impl From<DiscoveryError> for CliError {
    fn from(e: DiscoveryError) -> Self {
        let kind = match e {
            DiscoveryError::NegativeBudget(_) | DiscoveryError::NegativeHandling(_) => Kind::Usage,
            DiscoveryError::TableMismatch { .. } => Kind::Internal,
            _ => Kind::Validation,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        let kind = match &e {
            SimError::Config(_) | SimError::MismatchedScenarios(_) => Kind::Usage,
            SimError::InvalidShipment(_) | SimError::Path(_) => Kind::Validation,
            SimError::Discovery(d) => CliError::from(d.clone()).kind,
            SimError::Stall(_) | SimError::Policy(_) => Kind::Internal,
        };
        CliError::new(kind, e.to_string())
    }
}

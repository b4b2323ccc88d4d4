use heightlab_core::arch::ArchError;
use heightlab_core::equidist::EquidistError;
use heightlab_core::heights::HeightError;
use heightlab_core::padic::PadicError;
use heightlab_core::{PolyError, RootError};

/// Failure of a command, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input: unparsable polynomial, invalid prime, unmet precondition.
    #[error("{0}")]
    Input(String),
    /// A numerical method failed on valid input.
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn input(msg: impl ToString) -> Self {
        CliError::Input(msg.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<RootError> for CliError {
    fn from(e: RootError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<PadicError> for CliError {
    fn from(e: PadicError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ArchError> for CliError {
    fn from(e: ArchError) -> Self {
        match e {
            ArchError::Root(e) => e.into(),
            ArchError::AllNodesDropped => CliError::Numeric(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<HeightError> for CliError {
    fn from(e: HeightError) -> Self {
        match e {
            HeightError::Arch(e) => e.into(),
            HeightError::Root(e) => e.into(),
            HeightError::BudgetExhausted { .. } | HeightError::UndecidedTie(_) => CliError::Numeric(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<EquidistError> for CliError {
    fn from(e: EquidistError) -> Self {
        match e {
            EquidistError::Arch(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

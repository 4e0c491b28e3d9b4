use epsilon_stability::Error as CoreError;

/// Exit code for a finished computation that reports divergence, non-convergence or a
/// failed check.
pub const EXIT_FLAGGED: i32 = 1;
/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Computation(String),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Computation(_) => EXIT_FLAGGED,
            CliError::Input(_) | CliError::Io { .. } => EXIT_INPUT,
        }
    }

    /// Wraps a library error with the scenario it came from.
    pub fn from_core(context: &str, e: CoreError) -> Self {
        let msg = format!("{context}: {e}");
        match e {
            CoreError::InvalidParameter { .. } | CoreError::EnumerationCap { .. } | CoreError::Domain(_) => {
                CliError::Input(msg)
            }
            _ => CliError::Computation(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

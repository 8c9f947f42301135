//! Command errors and their exit codes.

use rittcalc_core::Error as CoreError;
use std::fmt;

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for unusable input (files, flags, preconditions).
pub const EXIT_INPUT: i32 = 2;
/// Exit code for numerical failures.
pub const EXIT_NUMERICAL: i32 = 3;
/// Exit code for a check that ran and failed.
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    /// Wraps a core error, prefixing what was being done.
    pub fn core(context: &str, e: CoreError) -> Self {
        let msg = format!("{context}: {e}");
        if e.is_input_error() || matches!(e, CoreError::NotPowerBounded { .. }) {
            CliError::Input(msg)
        } else {
            CliError::Numerical(msg)
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Adds command context to core results.
pub trait Context<T> {
    fn context(self, what: &str) -> Result<T, CliError>;
}

impl<T> Context<T> for Result<T, CoreError> {
    fn context(self, what: &str) -> Result<T, CliError> {
        self.map_err(|e| CliError::core(what, e))
    }
}

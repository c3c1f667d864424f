use std::fmt;

/// Errors surfaced by the store, the file formats, and the CLI.
#[derive(Debug)]
pub enum AppError {
    Core(geonc_core::Error),
    /// query_path hit a node pair with no stored statistics.
    MissingLink { from: String, to: String },
    Io(std::io::Error),
    /// Bad flags, bad config files, schema violations.
    Config(String),
    /// The optimization problem has no feasible candidate (exit code 3).
    Infeasible(String),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Core(e) => write!(f, "{e}"),
            AppError::MissingLink { from, to } => {
                write!(f, "no stored link statistics for {from} -> {to}")
            }
            AppError::Io(e) => write!(f, "io error: {e}"),
            AppError::Config(msg) => write!(f, "config error: {msg}"),
            AppError::Infeasible(msg) => write!(f, "infeasible: {msg}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<geonc_core::Error> for AppError {
    fn from(e: geonc_core::Error) -> Self {
        match e {
            geonc_core::Error::InfeasibleBudget { beta0, min_required } => AppError::Infeasible(
                format!("budget {beta0} below minimum required {min_required}"),
            ),
            other => AppError::Core(other),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

impl AppError {
    /// Exit-code contract: 0 success, 2 usage/config, 3 infeasible.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Infeasible(_) => 3,
            _ => 2,
        }
    }
}

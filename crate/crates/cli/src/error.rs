use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("integration failed (eps = {epsilon}): {source}")]
    Integrator {
        epsilon: f64,
        #[source]
        source: dca_core::Error,
    },
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Integrator { .. } => 3,
            CliError::Validation(_) => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Sort a core error raised while running at `epsilon` into config or integrator failures.
    pub(crate) fn from_core(epsilon: f64, e: dca_core::Error) -> Self {
        use dca_core::Error as E;
        match e {
            E::StepSizeUnderflow { .. } | E::MaxStepsExceeded { .. } | E::Negativity { .. } | E::NonFinite { .. } => {
                CliError::Integrator { epsilon, source: e }
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

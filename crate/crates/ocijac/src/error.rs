use ocijac_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("config: {0}")]
    Config(String),
    #[error("subspace file: {0}")]
    Subspace(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 3 for a failed smoothness diagnostic, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::SmoothnessDiagnostic(_)) => 3,
            _ => 2,
        }
    }
}

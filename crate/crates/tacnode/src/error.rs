use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(#[from] tacnode_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cache invalid: {0}")]
    CacheInvalid(String),
    #[error("{0} verification check(s) failed")]
    VerificationFailed(usize),
}

impl CliError {
    /// 2 for argument errors, 3 for numerical or I/O failure, 4 for failed
    /// verification.
    pub fn exit_code(&self) -> i32 {
        use tacnode_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(
                E::Parameter(_) | E::UnsupportedRange { .. } | E::MultiTimeUnsupported,
            ) => 2,
            CliError::Numerical(_)
            | CliError::Io(_)
            | CliError::Json(_)
            | CliError::CacheInvalid(_) => 3,
            CliError::VerificationFailed(_) => 4,
        }
    }
}

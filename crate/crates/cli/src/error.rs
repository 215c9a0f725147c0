use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] weylpath::Error),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad configuration, 3 for guard violations, 4 for failed
    /// numerical invariants, 1 for i/o.
    pub fn exit_code(&self) -> i32 {
        use weylpath::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_guard() => 3,
            CliError::Core(E::NotConverged { .. } | E::Singular(_)) => 4,
            CliError::Core(_) => 2,
            CliError::Invariant(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error(transparent)]
    Library(#[from] nclorentz_core::Error),
}

impl CliError {
    /// 2 usage, 3 unknown scenario, 4 malformed input, 5 I/O. Library
    /// errors caused by parameters count as usage errors, the rest as
    /// malformed input.
    pub fn exit_code(&self) -> i32 {
        use nclorentz_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::UnknownScenario(_) => 3,
            CliError::MalformedInput(_) => 4,
            CliError::Io(_) => 5,
            CliError::Library(e) => match e {
                E::InvalidExponent { .. }
                | E::WeakIndexUnsupported
                | E::OutOfRange(_)
                | E::EnumerationBudget { .. }
                | E::EmptyFamily
                | E::EmptySampleSet => 2,
                _ => 4,
            },
        }
    }
}

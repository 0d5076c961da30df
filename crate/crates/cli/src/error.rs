use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] mgfm_core::Error),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for usage, parameter and domain problems, 3 for numerical failures,
    /// 4 for failed validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                mgfm_core::Error::Parameter(_) | mgfm_core::Error::Domain(_) | mgfm_core::Error::DegenerateStrip(_) => 2,
                _ => 3,
            },
            CliError::Validation(_) => 4,
        }
    }
    }

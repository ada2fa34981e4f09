use thiserror::Error;

/// Failures of the harness, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(wkb_march::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<wkb_march::Error> for CliError {
    fn from(e: wkb_march::Error) -> Self {
        use wkb_march::Error as E;
        match e {
            E::UnknownModel(_) | E::ExactPhaseUnavailable | E::InvalidGrid(_) | E::InvalidParameter(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numerical(e),
        }
    }
}

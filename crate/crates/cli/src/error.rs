use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] ptsusy::Error),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

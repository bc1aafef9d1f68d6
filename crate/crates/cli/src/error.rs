use std::fmt;

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad input files, flags or configs: exit 2.
    Input(String),
    /// A method's preconditions failed on otherwise valid input: exit 3.
    Method(String),
    /// Filesystem trouble: exit 1.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Method(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Method(m) => write!(f, "method failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<topolasso::Error> for CliError {
    fn from(e: topolasso::Error) -> Self {
        use topolasso::Error as E;
        match e {
            E::NotApplicable(_) | E::SelectionFailed(_) => CliError::Method(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_errors_map_to_exit_codes() {
        assert_eq!(CliError::from(topolasso::Error::InvalidInput("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(topolasso::Error::NotApplicable("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(topolasso::Error::SelectionFailed("x".into())).exit_code(), 3);
        assert_eq!(CliError::Io("x".into()).exit_code(), 1);
    }
}

use std::fmt;

/// Process exit statuses.
pub mod exit {
    pub const IDENTITY_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const EXCLUDED: i32 = 3;
    pub const REPRESENTATION: i32 = 4;
    pub const BODY: i32 = 5;
}

/// An error carrying the exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: exit::USAGE,
            message: message.into(),
        }
    }

    pub fn representation(message: impl Into<String>) -> Self {
        CliError {
            code: exit::REPRESENTATION,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<coslab::Error> for CliError {
    fn from(e: coslab::Error) -> Self {
        use coslab::Error as E;
        let code = match &e {
            E::ExcludedParameter { .. }
            | E::NumeratorPole { .. }
            | E::GammaPole { .. }
            | E::QuadratureWindow { .. } => exit::EXCLUDED,
            E::RepresentationMismatch(_) | E::DimensionMismatch { .. } | E::OddInput { .. } => {
                exit::REPRESENTATION
            }
            E::NonPositiveBody { .. } | E::OddBody { .. } | E::NegativeOutput { .. } => exit::BODY,
            _ => exit::USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

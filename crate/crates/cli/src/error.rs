use std::process::ExitCode;
use thiserror::Error;

/// Exit status 2: the job was rejected before or during validation.
pub const EXIT_VALIDATION: u8 = 2;
/// Exit status 3: a numerical stage did not converge.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid job: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) | CliError::Io(_) => ExitCode::from(EXIT_VALIDATION),
            CliError::Numerical(_) => ExitCode::from(EXIT_NUMERICAL),
        }
    }
}

/// The hypothesis a library error violates, when it maps to one.
fn hypothesis(e: &klt::Error) -> Option<&'static str> {
    use klt::Error as E;
    match e {
        E::KernelZeroOnContour(_) => Some("solvability: (Fh) must not vanish on the contour"),
        E::EnvelopeTooWeak(_) => Some("growth condition on the contour"),
        E::StripViolation { .. } => Some("Mellin strip of the input"),
        E::DomainViolation(_) => Some("admissibility of the parameters"),
        E::DivergentNorm(_) => Some("weighted integrability of the input"),
        E::PoleOnContour(_) => Some("contour must avoid the poles of the integrand"),
        _ => None,
    }
}

impl From<klt::Error> for CliError {
    fn from(e: klt::Error) -> Self {
        let msg = match hypothesis(&e) {
            Some(h) => format!("{h}: {e}"),
            None => e.to_string(),
        };
        if e.is_validation() {
            CliError::Validation(msg)
        } else {
            CliError::Numerical(msg)
        }
    }
}

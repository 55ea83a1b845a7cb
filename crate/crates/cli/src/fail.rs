//! Process-level failure: an exit code plus a message for stderr.
//!
//! Exit code conventions:
//! * `0` — success
//! * `2` — invalid input (bad flags, config file, limits, or IO)
//! * `3` — the inputs are well-formed but no travelling wave exists
//! * `4` — a numerical process failed or a verification check missed

use hjbwave_core::Error;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub type CliResult<T> = Result<T, Failure>;

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NoWave(_) => 3,
            Error::Numeric(_) => 4,
            Error::Domain(_) | Error::InvalidLimits(_) | Error::Precondition(_) => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: 2,
            message: format!("io error: {e}"),
        }
    }
}

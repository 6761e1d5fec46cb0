use thiserror::Error;

/// Errors produced by the library and surfaced by the CLI.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// Number of detector phases does not match the number of atoms.
    #[error("expected {expected} detector phases, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// The requested size exceeds the configured cap of an evaluation route.
    #[error("{route} is capped at N = {cap}, got N = {n}")]
    CapExceeded {
        route: &'static str,
        n: usize,
        cap: usize,
    },

    /// Least-squares fit could not be carried out.
    #[error("fit failed: {0}")]
    Fit(String),

    /// Too many empty histogram bins to fit a fringe.
    #[error("insufficient statistics: {empty} of {bins} bins are empty")]
    InsufficientStatistics { empty: usize, bins: usize },

    /// Scenario file or command-line configuration is invalid.
    #[error("{0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable category used in CLI diagnostics.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) | Error::LengthMismatch { .. } | Error::Config(_) => "config",
            Error::CapExceeded { .. } => "cap",
            Error::Fit(_) | Error::InsufficientStatistics { .. } => "numerical",
            Error::Io(_) => "io",
        }
    }

    /// Process exit code for this error: 2 config, 3 cap, 4 numerical.
    pub fn exit_code(&self) -> u8 {
        match self.category() {
            "cap" => 3,
            "numerical" => 4,
            _ => 2,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_categories() {
        assert_eq!(Error::Config("x".into()).exit_code(), 2);
        assert_eq!(Error::domain("x").exit_code(), 2);
        let cap = Error::CapExceeded {
            route: "naive permutation sum",
            n: 10,
            cap: 9,
        };
        assert_eq!(cap.exit_code(), 3);
        assert_eq!(cap.category(), "cap");
        assert_eq!(Error::Fit("singular".into()).exit_code(), 4);
        assert_eq!(
            Error::InsufficientStatistics { empty: 9, bins: 12 }.exit_code(),
            4
        );
    }
}

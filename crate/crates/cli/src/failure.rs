use std::fmt;

/// Process exit codes.
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_VERIFICATION: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn parse(field: &str, msg: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: format!("{field}: {msg}"),
        }
    }

    pub fn domain(field: &str, msg: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            message: format!("{field}: {msg}"),
        }
    }

    /// Parse errors keep exit code 2, everything else from the engine is 3.
    pub fn engine(field: &str, err: fraclim::Error) -> Self {
        match err {
            fraclim::Error::Parse { .. } => Failure::parse(field, err),
            _ => Failure::domain(field, err),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub trait Context<T> {
    fn field(self, name: &str) -> Result<T, Failure>;
}

impl<T> Context<T> for fraclim::Result<T> {
    fn field(self, name: &str) -> Result<T, Failure> {
        self.map_err(|e| Failure::engine(name, e))
    }
}

use std::fmt;

/// A command failure carrying its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const CHECK_FAILED: u8 = 1;
pub const INVALID_CONFIG: u8 = 2;
pub const EXHAUSTED: u8 = 3;

impl Failure {
    pub fn config(message: String) -> Self {
        Failure { code: INVALID_CONFIG, message }
    }

    pub fn exhausted(message: String) -> Self {
        Failure { code: EXHAUSTED, message }
    }

    pub fn checks(message: String) -> Self {
        Failure { code: CHECK_FAILED, message }
    }
}

impl From<thoma::Error> for Failure {
    fn from(e: thoma::Error) -> Self {
        let code = match e {
            thoma::Error::Truncation(_) | thoma::Error::CapExceeded { .. } => EXHAUSTED,
            _ => INVALID_CONFIG,
        };
        Failure { code, message: e.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

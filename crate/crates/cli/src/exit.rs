use std::fmt;

/// A failure with its process exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

pub type ExitResult<T> = Result<T, Exit>;

pub const CONFIG: u8 = 2;
pub const OUT_OF_SCOPE: u8 = 3;
pub const IO: u8 = 4;
pub const VERIFICATION: u8 = 5;

impl Exit {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: CONFIG, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: IO, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self { code: VERIFICATION, message: message.into() }
    }
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<gkmn::Error> for Exit {
    fn from(e: gkmn::Error) -> Self {
        let code = match e {
            gkmn::Error::OutOfScope(_) | gkmn::Error::Degenerate(_) => OUT_OF_SCOPE,
            _ => CONFIG,
        };
        Self { code, message: e.to_string() }
    }
}

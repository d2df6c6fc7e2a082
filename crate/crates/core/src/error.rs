use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of {what} at {location}")]
    Pole { what: String, location: f64 },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("no convergence in {0}")]
    Convergence(String),

    #[error("degenerate reduction: {0}")]
    Degenerate(String),

    #[error("outside the supported parameter range: {0}")]
    OutOfScope(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("roots do not lie on one energy level (spread {spread:e})")]
    EnergyMismatch { spread: f64 },

    #[error("profile exceeds the clip bound at xi = {xi}{}", pole_note(*.pole))]
    Blowup { xi: f64, pole: Option<f64> },

    #[error("printed expression is not real at xi = {xi}")]
    NotReal { xi: f64 },

    #[error("family {family} is not admissible here; admissible: {admissible}")]
    Inadmissible { family: String, admissible: String },
}

fn pole_note(pole: Option<f64>) -> String {
    match pole {
        Some(p) => format!(" (nearest pole {p})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

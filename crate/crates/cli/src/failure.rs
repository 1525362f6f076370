//! Process-level error taxonomy. Every failure maps to one of the stable
//! exit codes so scripts can branch on what went wrong:
//! 2 = configuration, 3 = data, 4 = method mismatch, 5 = environment mismatch.

use std::fmt;

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Data(String),
    Method(String),
    Env(String),
}

pub type CliResult<T> = Result<T, Failure>;

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Data(_) => 3,
            Failure::Method(_) => 4,
            Failure::Env(_) => 5,
        }
    }

    pub fn config(msg: impl fmt::Display) -> Self {
        Failure::Config(msg.to_string())
    }

    pub fn data(msg: impl fmt::Display) -> Self {
        Failure::Data(msg.to_string())
    }

    pub fn method(msg: impl fmt::Display) -> Self {
        Failure::Method(msg.to_string())
    }

    pub fn env(msg: impl fmt::Display) -> Self {
        Failure::Env(msg.to_string())
    }
}

impl From<equigoal_core::Error> for Failure {
    fn from(e: equigoal_core::Error) -> Self {
        use equigoal_core::Error as E;
        match e {
            E::InvalidConfig(_) => Failure::Config(e.to_string()),
            E::EnvMismatch(_) => Failure::Env(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Data(m) => write!(f, "data error: {m}"),
            Failure::Method(m) => write!(f, "method mismatch: {m}"),
            Failure::Env(m) => write!(f, "env mismatch: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

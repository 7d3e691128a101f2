use std::fmt;

use thiserror::Error;

use crate::config::ConfigError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Validation(String),

    #[error("full stress matrix is singular at the origin")]
    SingularPoint,

    #[error("particles {first} and {second} collide")]
    Collision { first: usize, second: usize },

    #[error("time step {dt:e} violates the stability bound; admissible dt <= {max_dt:e}")]
    StepSize { dt: f64, max_dt: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("degenerate gradient at node {index}: kappa_y = {kappa_y:e}, rho_y = {rho_y:e}")]
    DegenerateGradient {
        index: usize,
        kappa_y: f64,
        rho_y: f64,
    },

    #[error("curve topology error: {0}")]
    Topology(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{}", ConfigErrors(.0))]
    Config(Vec<ConfigError>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable short identifier used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Validation(_) => "validation",
            Error::SingularPoint => "singular_point",
            Error::Collision { .. } => "collision",
            Error::StepSize { .. } => "step_size",
            Error::InvalidState(_) => "invalid_state",
            Error::DegenerateGradient { .. } => "degenerate_gradient",
            Error::Topology(_) => "topology",
            Error::Precondition(_) => "precondition",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

struct ConfigErrors<'a>(&'a [ConfigError]);

impl fmt::Display for ConfigErrors<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} configuration error(s)", self.0.len())?;
        for e in self.0 {
            write!(f, "; {e}")?;
        }
        Ok(())
    }
}

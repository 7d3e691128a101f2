//! Dislocation density dynamics.
//!
//! * [`micro2d`]: signed straight edge dislocations interacting through the
//!   Volterra shear-stress kernel.
//! * [`gb2d`]: the periodic two-dimensional mean-field transport model, with
//!   the stress computed by Fourier multipliers from [`spectral`].
//! * [`sub1d`]: the translation-invariant one-dimensional nonlocal submodel.
//! * [`gcz1d`]: the regularized slab model with back stress.
//! * [`curves`]: front tracking of closed curves and their lifted
//!   position-angle measures.
//!
//! [`config`] and [`driver`] turn a key-value configuration file into a run
//! with CSV outputs.

pub mod config;
pub mod curves;
pub mod driver;
pub mod elasticity;
pub mod error;
pub mod exec;
pub mod gb2d;
pub mod gcz1d;
pub mod io;
pub mod micro2d;
pub mod spectral;
pub mod sub1d;

pub use elasticity::ElasticConstants;
pub use error::{Error, Result};
pub use exec::Execution;
pub use spectral::PeriodicField2D;

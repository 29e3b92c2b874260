//! Identification of monetary-policy and information shocks from
//! announcement surprises, with spillover estimation into a small open
//! economy via Bayesian VARX and local-projection impulse responses.

pub mod band;
pub mod bvar;
pub mod dataio;
pub mod error;
pub mod linalg;
pub mod localproj;
pub mod svg;
pub mod month;
pub mod pipeline;
pub mod rng;
pub mod shockid;

pub use error::{Error, Result};
pub use month::Month;

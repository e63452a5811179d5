//! Exact truncated models of the Dolbeault dga of a formal neighborhood,
//! cohesive modules over them, descent over finite covers, and a numerical
//! gauge solver for flat dbar-connections.

pub mod cli;
pub mod coeff;
pub mod cohesive;
pub mod descent;
pub mod error;
pub mod gauge;
pub mod linalg;
pub mod model;

pub use error::{Error, Result};

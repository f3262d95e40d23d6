//! Exact construction, verification and classification of slash structures on
//! the extended space `V + V*`.

pub mod error;
pub mod extended;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod matrix;
pub mod orbit;
pub mod sampling;
pub mod scalars;
pub mod slash;

pub use error::{Error, Result};

pub mod census;
pub mod cli;
pub mod criteria;
pub mod disk;
pub mod error;
pub mod mc;
pub mod random;
pub mod schemes;
pub mod sphere;
pub mod weight;

pub use error::{Error, Result};

pub mod characteristics;
pub mod cli;
pub mod energy;
pub mod error;
pub mod field;
pub mod numerics;
pub mod output;
pub mod pressure;
pub mod riemann;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};

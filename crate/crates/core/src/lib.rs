pub mod asymptotics;
pub mod error;
pub mod fixtures;
pub mod mat2;
pub mod phase;
pub mod scattering;
pub mod soliton;
pub mod verify;

pub use error::{Error, Result};

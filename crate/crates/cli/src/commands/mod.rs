pub mod asym;
pub mod phase;
pub mod scatter;
pub mod soliton;
pub mod verify;

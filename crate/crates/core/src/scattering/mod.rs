pub mod boundary;
pub mod data;
pub mod datum;
pub mod jost;
pub mod matrix;
pub mod spectrum;
pub mod transmission;

pub use boundary::{background_eigenvector_matrix, BoundaryData, Side};
pub use data::{nu, ContourSample, ScatteringData};
pub use datum::InitialDatum;
pub use jost::{jost_solutions, JostConfig, JostPair};
pub use matrix::{reflection_coefficients, scattering_matrix, ReflectionSample};
pub use spectrum::{discrete_spectrum, SearchConfig, SpectralZero, SpectrumReport};
pub use transmission::{partial_transmission, PartialTransmission, TransmissionConfig};

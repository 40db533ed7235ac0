//! Leading-order long-time behaviour `q ≈ c·q_sol − t^{−1/2} f` on rays
//! `x = ξt`, `−6 < ξ < 6`.

pub mod assemble;
pub mod gamma;
pub mod model;
pub mod pc;

pub use assemble::{q_asymptotic, AsymptoticConfig, AsymptoticResult, AsymptoticSolver, Intermediates, ERROR_ORDER, T_MIN};
pub use gamma::complex_gamma;
pub use model::{error_term_e1, local_model, local_model_residue, radiation_coefficient_f};
pub use pc::{pc_coefficients, BetaReading, PCCoefficients, SaddleCoefficients, BETA_READING};

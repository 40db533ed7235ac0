use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong in the pipeline.
///
/// Variants map one-to-one onto the failure classes the CLI reports through
/// its exit codes (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("ray x/t = {xi} outside the admissible region: {reason}")]
    Region { xi: f64, reason: String },

    #[error("iteration did not converge: {0}")]
    Convergence(String),

    #[error("initial datum fails decay check: |q0(-L) - q_-| = {left:.3e}, |q0(L) - q_+| = {right:.3e}")]
    Decay { left: f64, right: f64 },

    #[error("ODE step error estimate {estimate:.3e} exceeds {tolerance:.1e} at minimum step")]
    Step { estimate: f64, tolerance: f64 },

    #[error("singular Jost matrix at z = {z}: |det| = {det:.3e}")]
    Singular { z: Complex64, det: f64 },

    #[error("spectral singularity at z = {z}: |s11| = {s11:.3e}")]
    SpectralSingularity { z: Complex64, s11: f64 },

    #[error("zero of s11 near {z} has multiplicity {multiplicity} (only simple zeros are supported)")]
    Multiplicity { z: Complex64, multiplicity: i64 },

    #[error("1 - rho*rho_tilde nearly vanishes ({value:.3e}) on an arc panel")]
    Nonvanishing { value: f64 },

    #[error("branch error: {0}")]
    Branch(String),

    #[error("singular residue system (condition {condition:.3e}); worst pole pair ({i}, {j})")]
    SingularSystem { condition: f64, i: usize, j: usize },

    #[error("recovered potential has imaginary part {imag:.3e} (convention mismatch)")]
    Reality { imag: f64 },

    #[error("pole of the Gamma function at {0}")]
    Pole(Complex64),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("split-step field norm grew from {initial:.3e} to {current:.3e} at t = {t}")]
    Blowup { initial: f64, current: f64, t: f64 },

    #[error("evaluation failed: {0}")]
    Eval(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Region { .. } | Error::Invalid(_) | Error::Pole(_) => 2,
            Error::Convergence(_) | Error::Multiplicity { .. } | Error::Step { .. } => 3,
            Error::SpectralSingularity { .. } | Error::Singular { .. } | Error::Nonvanishing { .. } => 4,
            Error::Decay { .. } => 5,
            _ => 1,
        }
    }
}

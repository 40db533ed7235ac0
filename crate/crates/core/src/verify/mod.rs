pub mod crosscheck;
pub mod fit;
pub mod residual;
pub mod splitstep;
pub mod suite;

pub use crosscheck::{evolution_cross_check, ray_decay, residual_scaling, EvolutionCheck, RayDecay, ResidualScaling};
pub use fit::{decay_fit, DecayFit};
pub use residual::{pde_residual, residual_at, Field, FnField, ResidualGrid, ResidualReport};
pub use splitstep::{evolve_local_mkdv, splitstep_local_mkdv, Evolution, PeriodicGrid, Scheme};
pub use suite::{beta_modulus, dual_path_constancy, outer_structure, random_pc, symmetry_suite, SuiteConfig, SuiteEntry, SuiteReport};

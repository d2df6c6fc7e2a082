//! Closed-form amplitude and phase families, and assembled waves.

mod catalog;
mod family;
mod phase;
mod profile;
mod wave;

pub use catalog::{
    amplitude_of, catalog, catalog_instance, default_energy, default_system, roots_at, type1_physical, type1_wave,
    type2_physical, type2_wave,
};
pub use family::{PhaseFamily, SolutionFamily};
pub use phase::{eval_phase, eval_phase_closed, eval_phase_quadrature, phase_rate_along, quadrature_only, PhaseParams};
pub use profile::{
    amplitude_scale, domain_and_period, eval_amplitude, eval_amplitude_raw, validate_profile, Extent,
    ProfileSpec, CLIP, ENERGY_TOL, ROOT_TOL,
};
pub use wave::{assemble_type1, PhaseSource, TypeIIWave, TypeIWave, Wave, ZeroWave};

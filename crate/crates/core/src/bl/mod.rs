//! Boundary-layer algebra: profiles `Σ_l c_l(x) z^l e^{-√κ z}` whose coefficients
//! are Fourier series in `x` times derivatives of a cutoff in the distance `d`.

pub mod coeff;
pub mod cutoff;
pub mod lemma;
pub mod profile;

pub use coeff::{CoeffField, DistanceHooks, FlatHooks, SyntheticCurvature};
pub use cutoff::Cutoff;
pub use profile::{bl_dz, bl_ode_solve, bl_tail_integral, BLProfile, ProfileRole};

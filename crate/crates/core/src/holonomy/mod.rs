//! Adiabatic transport of the spectrum around the singular point of a slice.
//!
//! Levels are followed along a [`ParameterPath`](crate::params::ParameterPath)
//! by energy continuity. On a closed loop that winds around `(1/gamma0, 0)` the
//! followed levels come back two spectral slots higher per counterclockwise
//! turn; the same permutation shows up in the product of step-to-step
//! overlap matrices.

mod branch;
mod track;
mod transport;

pub use crate::spectrum::overlap;
pub use branch::{compare_asymptotic, theta_branch, AsymptoticOptions, POLE_EPS};
pub use track::{loop_permutation, trace_path, LevelStatus, LoopResult, TrackOptions, TrackedLevel, ORIENTATION};
pub use transport::{connection, evolution_matrix, ConnectionMatrix, EvolutionOptions};

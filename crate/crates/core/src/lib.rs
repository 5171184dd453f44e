//! Spectrum, spectral flow and loop holonomy of a quantum particle in a
//! one-dimensional box with the general three-parameter point interaction.
//!
//! * [`params`]: matching parameters, the fixed-gamma slice and its singular
//!   point, polar coordinates, parameter paths and winding numbers.
//! * [`spectrum`]: the secular function, eigenvalue search, eigenfunctions,
//!   overlaps, node counts and boundary-condition checks.
//! * [`regularize`]: the same interaction built from three nearby Dirac deltas,
//!   solved by transfer matrices; an independent cross-check of [`spectrum`].
//! * [`holonomy`]: level tracking along parameter paths, loop permutations,
//!   the asymptotic branch near the singularity, overlap connections and the
//!   adiabatic evolution matrix.
//! * [`cli`]: the `spiral` command line front end.

pub mod cli;
pub mod error;
pub mod format;
pub mod holonomy;
pub mod params;
pub mod regularize;
pub mod roots;
pub mod spectrum;

pub use error::{Error, Result};
pub use params::{BCParams, Coupling, ParameterPath, PolarCoords, PolarLoop, SliceCoords};
pub use spectrum::{Domain, EnergyLevel, Wavefunction};

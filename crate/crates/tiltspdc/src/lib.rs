//! Simulator and design tool for the joint spectral properties of photon
//! pairs from collinear type-II spontaneous parametric downconversion
//! pumped by a pulse-front-tilted beam.
//!
//! The library is layered bottom-up:
//! - [`crystal`] / [`dispersion`]: Sellmeier data and uniaxial dispersion
//!   (indices, group velocities, GVD, walk-off, phase matching);
//! - [`tilt`]: grating-induced angular dispersion, effective group
//!   velocities of tilted waves, and the tilt-angle solvers for
//!   frequency-anticorrelated and frequency-correlated pairs;
//! - [`biphoton`]: the joint spectral amplitude on a frequency grid and
//!   its diagnostics (marginals, diagonal spectra, Pearson correlation,
//!   Schmidt number, analytic CW branches);
//! - [`hom`]: Hong-Ou-Mandel coincidence traces, visibility, dip center,
//!   triangular-shape analysis;
//! - [`polarization`]: polarization-entanglement quality of the mixed
//!   two-photon state (purity, polarizer-sweep visibilities);
//! - [`scenario`] / [`output`] / [`commands`]: scenario-file front end
//!   with plot-ready data files and deterministic manifests.
//!
//! Internal units: lengths in um, time in fs, angular frequency in
//! rad/fs (see [`units`]).

pub mod biphoton;
pub mod commands;
pub mod crystal;
pub mod dispersion;
pub mod error;
pub mod hom;
pub mod output;
pub mod polarization;
pub mod scenario;
pub mod tilt;
pub mod units;

pub use error::{Error, Result};

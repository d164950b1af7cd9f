//! Dual-polarization NFDM transceiver toolkit.
//!
//! Implements the nonlinear Fourier transform (direct and inverse) for the
//! Manakov system, joint modulation of the continuous and discrete nonlinear
//! spectra, a split-step fiber channel, and the transmitter/receiver DSP
//! chains needed to run back-to-back and transmission experiments.
//!
//! Everything operates on [`DualPolSignal`] values carrying an explicit
//! physical/normalized units flag; [`norm`] holds the change of variables
//! between the two.

pub mod channel;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod inft;
pub mod norm;
pub mod rx;
pub mod scatter;
pub mod signal;
pub mod spectrum;
pub mod tx;

pub use error::{Error, Result};
pub use grid::{TimeGrid, Units};
pub use norm::NormalizationParams;
pub use signal::DualPolSignal;
pub use spectrum::{DiscreteMode, LambdaGrid, NonlinearSpectrum};

/// Complex sample type used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

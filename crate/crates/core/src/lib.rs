//! Simulation toolkit for a parametric amplifier built from two coupled qubits.
//!
//! The pair is biased by a strong pump tone, a weak signal tone and optional
//! white noise. The fifteen Bloch-tensor components are integrated in time,
//! the response of the first qubit is Fourier analysed, and the weak signal's
//! gain is read off the combination-frequency peaks `k w_pump + l w_weak`.
//!
//! Module map:
//!
//! * [`model`]: parameters, Hamiltonian, transition frequencies, drive.
//! * [`bloch`]: the Bloch tensor, its equations of motion, physicality checks.
//! * [`integrate`]: Euler / Runge-Kutta stepping, noise streams, ensembles.
//! * [`spectrum`]: magnitude spectra, peaks, labels, amplification metrics.
//! * [`app`]: scenario files, presets, sweeps, CSV and SVG output.

pub mod app;
pub mod bloch;
pub mod error;
pub mod integrate;
pub mod model;
pub mod pauli;
pub mod spectrum;

pub use bloch::{BlochTensor, Component};
pub use error::{Error, Result};
pub use integrate::{IntegratorConfig, Method, TimeSeries};
pub use model::{transition_frequencies, DriveParams, QubitPairParams};
pub use spectrum::{PeakSet, Spectrum, Window};

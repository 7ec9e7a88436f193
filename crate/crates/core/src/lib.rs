//! Entanglement dynamics of three open optical cavities.
//!
//! Each cavity holds at most one photon and leaks into its own bath. The bath
//! is described by a spectral density ([`spectral`]), from which the
//! time-dependent master-equation coefficients α(t), β(t) and the decay rate
//! κ(t) = 2 Re β(t) follow ([`rates`]). The density matrix lives on the
//! eight-dimensional product space of [`hilbert`] and is propagated either
//! deterministically ([`dynamics`]) or as an ensemble of non-Markovian quantum
//! jump trajectories ([`nmqj`]). Tripartite entanglement is reported as the
//! negativity of the state partially transposed on the first cavity.
//!
//! Units: ħ = 1 and every frequency, rate and time is expressed in units of
//! the common cavity frequency ω_c, so ω_c = 1 internally.
//!
//! The crate is `no_std` and only needs `alloc`. Enabling the `parallel`
//! feature propagates trajectory ensembles on a rayon thread pool; results are
//! bitwise identical with and without it.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod dynamics;
pub mod hilbert;
pub mod nmqj;
pub mod rates;
pub mod spectral;

pub use num_complex::Complex64;

/// The cavity resonance frequency in internal units.
pub const OMEGA_C: f64 = 1.0;

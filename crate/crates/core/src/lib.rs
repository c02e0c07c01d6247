//! Cavity-free optomechanical cooling of a mirror by a remotely trapped
//! Λ-atom cloud.
//!
//! An oscillating mirror is illuminated by two CW drives (Probe and Control).
//! Mirror motion scatters the drives into red and blue sidebands; a distant
//! cloud of Λ-level atoms, held dark by EIT-style driving, converts the
//! mirror correlation of a chosen sideband from the outgoing Control beam to
//! the incoming Probe beam. Depending on the cloud position this either
//! enhances the beam-splitting (cooling) channel or cancels the
//! two-mode-squeezing (heating) channel.
//!
//! The crate is organised along the pipeline:
//!
//! * [`params`] — physical specs (mirror, drives, cloud, environment) and the
//!   derived coupling constants μ, Ω, 𝒩th.
//! * [`atom`] — the single-atom 8×8 Bloch system, its dark steady state, the
//!   frequency-domain resolvent responses and the closed-form spectral
//!   factor J(ω).
//! * [`chain`] — transport of the mirror–sideband correlations through the
//!   atom chain: exact boundary-value solve, transfer-matrix oracle post and
//!   the leading-order closed form.
//! * [`cooling`] — the phonon-occupation rate equation: N₀, Λ±, environmental
//!   heating, steady states, time evolution, and strategy design (detuning
//!   and cloud placement).
//! * [`sweep`] — validated scenarios, parameter grid sweeps and
//!   derivative-free minimisation of the steady-state occupation.
//! * [`scenario`] — the strict JSON scenario-file schema used by the CLI.

pub mod atom;
pub mod chain;
pub mod constants;
pub mod cooling;
pub mod error;
pub mod params;
pub mod scenario;
pub mod sweep;

pub use error::CoolError;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CoolError>;

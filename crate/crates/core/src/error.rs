//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong when building specs or running the pipeline.
#[derive(Debug, Clone, Error)]
pub enum CoolError {
    /// A physical parameter violates its domain constraint.
    #[error("invalid parameter {name}: {value} ({constraint})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The Bloch system has no unique steady state (all drives and decay
    /// channels vanish).
    #[error("degenerate Bloch system: all rates and Rabi frequencies are zero")]
    DegenerateBloch,

    /// The Bloch matrix is singular or too ill-conditioned to trust a solve.
    #[error("near-singular Bloch matrix (1-norm condition estimate {condition:.3e})")]
    SingularBloch { condition: f64 },

    /// iω sits on (or too close to) an eigenvalue of the Bloch matrix.
    #[error(
        "resolvent singular at omega = {omega:.6e} rad/s: i*omega matches a Bloch eigenvalue \
         (condition estimate {condition:.3e})"
    )]
    ResolventPole { omega: f64, condition: f64 },

    /// The spectral-factor denominator vanishes (requires zero total
    /// linewidth on resonance).
    #[error("spectral factor pole at omega = {omega:.6e} rad/s")]
    SpectralPole { omega: f64 },

    /// Both Rabi frequencies vanish; the dark state is not defined.
    #[error("degenerate dark state: both Rabi frequencies are zero")]
    DegenerateDarkState,

    /// The collective coupling η sits on the unphysical saturation boundary.
    #[error("collective coupling eta = {eta_re:.6e}{eta_im:+.6e}i too close to 1: |1-eta| = {dist:.3e}")]
    EtaNearUnity { eta_re: f64, eta_im: f64, dist: f64 },

    /// The assembled chain system is singular.
    #[error("singular chain system at row {index}")]
    SingularChain { index: usize },

    /// A sweep parameter path does not name a sweepable quantity.
    #[error("unknown parameter path '{path}'")]
    UnknownPath { path: String },

    /// The requested grid exceeds the configured cardinality limit.
    #[error("sweep grid has {size} points, exceeding the limit of {limit}")]
    GridTooLarge { size: u64, limit: u64 },

    /// The optimiser found no finite objective value anywhere in the box.
    #[error("objective is divergent everywhere in the search box")]
    ObjectiveDivergent,

    /// Scenario-file parsing or validation failure.
    #[error("scenario error: {0}")]
    Scenario(String),
}

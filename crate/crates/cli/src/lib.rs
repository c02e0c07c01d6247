//! Library surface of the `optocool` command-line tool, split out so the
//! commands and table emitter are unit-testable.

pub mod commands;
pub mod table;

/// Exit codes of the CLI contract.
pub mod exit {
    /// Success.
    pub const OK: i32 = 0;
    /// Input error: parse failure, validation failure, bad usage.
    pub const INPUT: i32 = 2;
    /// Physical divergence: no finite steady state.
    pub const DIVERGENT: i32 = 3;
    /// Numerical failure: pole or singular solve.
    pub const NUMERICAL: i32 = 4;
}

use optocool_core::CoolError;

/// Map a core error onto the exit-code contract.
pub fn exit_code_for(err: &CoolError) -> i32 {
    match err {
        CoolError::Scenario(_)
        | CoolError::InvalidParameter { .. }
        | CoolError::UnknownPath { .. }
        | CoolError::GridTooLarge { .. } => exit::INPUT,
        CoolError::ObjectiveDivergent => exit::DIVERGENT,
        CoolError::DegenerateBloch
        | CoolError::SingularBloch { .. }
        | CoolError::ResolventPole { .. }
        | CoolError::SpectralPole { .. }
        | CoolError::DegenerateDarkState
        | CoolError::EtaNearUnity { .. }
        | CoolError::SingularChain { .. } => exit::NUMERICAL,
    }
}

//! Reversible cellular automata: Margolus block rules on 2D grids, multi-track
//! rings, a strobe that singles out every `t`-th step, and the compiler that
//! runs a 2D Margolus automaton on a 1D ring.

mod dimredux;
mod margolus;
mod strobe;
mod tracks;

use thiserror::Error;

pub use dimredux::{dim_redux_compile, DimReduxAutomaton};
pub use margolus::{
    bbm_rule, rule_is_bijective, simulate, simulate_back, Boundary, MargolusGrid, MargolusRule,
    Phase,
};
pub use strobe::{PartitionRule, StrobeAutomaton};
pub use tracks::{band_shift_back, band_shift_step, TrackedConfig1D};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaError {
    #[error("bad rule: {0}")]
    Rule(String),
    #[error("bad geometry: {0}")]
    Geometry(String),
    #[error("bad configuration: {0}")]
    Config(String),
}

/// `n` BBM steps.
pub fn simulate_bbm(g: &MargolusGrid, n: u64) -> Result<MargolusGrid, CaError> {
    simulate(g, &bbm_rule(), n)
}

//! Reversible and classical logic circuits, and lifts from the latter to the former.

mod circuit;
mod classical;
mod gate;
mod lift;

pub use circuit::{negation_map, permutation_of_bijection, ReversibleCircuit, MAX_PERMUTATION_WIDTH};
pub use classical::{ClassicalCircuit, ClassicalGate, ClassicalOp};
pub use gate::{Gate, GateKind};
pub use lift::{bennett_lift, jms_lift, LiftResult, BENNETT_GATES_PER_GATE, MAX_JMS_CHECK_WIDTH};

use thiserror::Error;

use crate::bijection::KernelError;

#[derive(Debug, Error)]
pub enum RevError {
    #[error("gate {gate} uses wire {wire} but the circuit has {width} wires")]
    WireOutOfRange { gate: usize, wire: usize, width: usize },
    #[error("gate {gate} uses wire {wire} more than once")]
    RepeatedWire { gate: usize, wire: usize },
    #[error("expected {expected} bits, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("width {width} exceeds the enumeration limit of {max}")]
    TooWide { width: usize, max: usize },
    #[error("{0} is not a bijection")]
    NotBijective(String),
    #[error("classical circuit: {0}")]
    Classical(String),
    #[error("circuits are not mutually inverse (fails at input {input})")]
    NotInverse { input: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

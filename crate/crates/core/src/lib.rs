//! Iterated bijections made executable: reversible circuits and their lifts,
//! reductions between iteration problems, connected-leaf solvers, reversible
//! cellular automata, piecewise linear bijections and integer interval exchanges.

pub mod bijection;
pub mod bits;
pub mod ca;
pub mod formats;
pub mod graphs;
pub mod iet;
pub mod implicit;
pub mod perm;
pub mod plb;
pub mod random;
pub mod reductions;
pub mod revcirc;

pub use bijection::{Bijection, IterationProblem, KernelError};
pub use bits::Bitstring;
pub use perm::{Parity, Permutation};

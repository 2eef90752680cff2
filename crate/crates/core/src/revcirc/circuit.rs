use num_bigint::BigUint;

use super::{Gate, RevError};
use crate::bijection::{self, Bijection};
use crate::bits::Bitstring;
use crate::perm::Permutation;

/// Largest wire count for which [`ReversibleCircuit::permutation`] enumerates states.
pub const MAX_PERMUTATION_WIDTH: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversibleCircuit {
    width: usize,
    gates: Vec<Gate>,
}

impl ReversibleCircuit {
    pub fn new(width: usize, gates: Vec<Gate>) -> Result<Self, RevError> {
        for (index, g) in gates.iter().enumerate() {
            let wires = g.wires();
            for &w in &wires {
                if w >= width {
                    return Err(RevError::WireOutOfRange {
                        gate: index,
                        wire: w,
                        width,
                    });
                }
            }
            for (i, a) in wires.iter().enumerate() {
                if wires[i + 1..].contains(a) {
                    return Err(RevError::RepeatedWire { gate: index, wire: *a });
                }
            }
        }
        Ok(ReversibleCircuit { width, gates })
    }

    pub fn empty(width: usize) -> Self {
        ReversibleCircuit {
            width,
            gates: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn eval(&self, a: &Bitstring) -> Result<Bitstring, RevError> {
        if a.width() != self.width {
            return Err(RevError::WidthMismatch {
                expected: self.width,
                got: a.width(),
            });
        }
        let mut s = a.clone();
        for g in &self.gates {
            g.apply(&mut s);
        }
        Ok(s)
    }

    /// Evaluation on the integer encoding; requires at most 64 wires.
    pub fn eval_word(&self, x: u64) -> u64 {
        assert!(self.width <= 64);
        self.gates.iter().fold(x, |v, g| g.apply_word(v))
    }

    /// Gate list reversed. Each gate is its own inverse.
    pub fn inverse(&self) -> ReversibleCircuit {
        ReversibleCircuit {
            width: self.width,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    /// `self` followed by `next`, on the wider of the two wire sets.
    pub fn then(&self, next: &ReversibleCircuit) -> ReversibleCircuit {
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&next.gates);
        ReversibleCircuit {
            width: self.width.max(next.width),
            gates,
        }
    }

    /// The circuit as a bijection, with the reversed circuit as its backward map.
    pub fn to_bijection(&self) -> Bijection {
        let label = format!("circuit({} wires, {} gates)", self.width, self.gates.len());
        let inv = self.inverse();
        if self.width <= 64 {
            let fwd = self.clone();
            Bijection::from_words(self.width, label, move |x| fwd.eval_word(x))
                .with_backward_words(move |x| inv.eval_word(x))
        } else {
            let fwd = self.clone();
            Bijection::from_bits(self.width, label, move |x| fwd.eval(x).expect("width checked"))
                .with_backward_bits(move |x| inv.eval(x).expect("width checked"))
        }
    }

    /// Feeds outputs back to inputs `n` times.
    pub fn iterate(&self, n: &BigUint, a: &Bitstring) -> Result<Bitstring, RevError> {
        if a.width() != self.width {
            return Err(RevError::WidthMismatch {
                expected: self.width,
                got: a.width(),
            });
        }
        Ok(bijection::iterate(&self.to_bijection(), n, a)?)
    }

    /// The permutation of `[0, 2^w)` computed by the circuit.
    pub fn permutation(&self) -> Result<Permutation, RevError> {
        if self.width > MAX_PERMUTATION_WIDTH {
            return Err(RevError::TooWide {
                width: self.width,
                max: MAX_PERMUTATION_WIDTH,
            });
        }
        let images = (0..1u64 << self.width)
            .map(|x| self.eval_word(x) as usize)
            .collect();
        Ok(Permutation::from_images(images).expect("reversible gates compose to a permutation"))
    }
}

/// Two's-complement negation `x -> -x mod 2^w`; fixes `0` and `2^(w-1)`.
pub fn negation_map(w: usize) -> Bijection {
    assert!((1..=64).contains(&w));
    let mask = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
    let neg = move |x: u64| x.wrapping_neg() & mask;
    Bijection::from_words(w, format!("negation({w})"), neg).with_backward_words(neg)
}

/// Permutation of a bijection of width at most [`MAX_PERMUTATION_WIDTH`].
pub fn permutation_of_bijection(f: &Bijection) -> Result<Permutation, RevError> {
    if f.width() > MAX_PERMUTATION_WIDTH {
        return Err(RevError::TooWide {
            width: f.width(),
            max: MAX_PERMUTATION_WIDTH,
        });
    }
    let images = (0..1u64 << f.width())
        .map(|x| f.forward_word(x) as usize)
        .collect();
    Permutation::from_images(images).map_err(|_| RevError::NotBijective(f.label().to_string()))
}

//! Explicit permutations of `[0, n)`.

use num_bigint::BigUint;
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("value {value} at index {index} is out of range")]
    OutOfRange { index: usize, value: usize },
    #[error("value {value} appears twice")]
    Repeated { value: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// `image[i]` is where `i` goes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn from_images(image: Vec<usize>) -> Result<Self, PermError> {
        let mut seen = vec![false; image.len()];
        for (index, &value) in image.iter().enumerate() {
            if value >= image.len() {
                return Err(PermError::OutOfRange { index, value });
            }
            if std::mem::replace(&mut seen[value], true) {
                return Err(PermError::Repeated { value });
            }
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &Permutation) -> Permutation {
        assert_eq!(self.len(), then.len());
        Permutation {
            image: self.image.iter().map(|&j| then.image[j]).collect(),
        }
    }

    /// Disjoint cycles, each starting at its smallest element, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.image[i];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable();
        lens
    }

    /// Sign from the cycle structure: a cycle of length `l` is `l - 1` transpositions.
    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Number of 2-cycles.
    pub fn swapped_pairs(&self) -> usize {
        self.cycles().iter().filter(|c| c.len() == 2).count()
    }

    /// Order in the symmetric group: lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        self.cycles()
            .iter()
            .fold(BigUint::from(1u32), |acc, c| acc.lcm(&BigUint::from(c.len())))
    }
}

/// Parity of an image vector, validating it first.
pub fn parity(image: &[usize]) -> Result<Parity, PermError> {
    Ok(Permutation::from_images(image.to_vec())?.parity())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_even() {
        assert_eq!(Permutation::identity(5).parity(), Parity::Even);
    }

    #[test]
    fn transposition_is_odd() {
        assert_eq!(parity(&[1, 0, 2]).unwrap(), Parity::Odd);
    }

    #[test]
    fn three_cycle_is_even() {
        assert_eq!(parity(&[1, 2, 0]).unwrap(), Parity::Even);
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(
            parity(&[0, 0]),
            Err(PermError::Repeated { value: 0 })
        );
        assert_eq!(
            parity(&[0, 5]),
            Err(PermError::OutOfRange { index: 1, value: 5 })
        );
    }

    #[test]
    fn order_is_lcm_of_cycles() {
        let p = Permutation::from_images(vec![1, 0, 3, 4, 2]).unwrap();
        assert_eq!(p.cycle_type(), vec![2, 3]);
        assert_eq!(p.order(), BigUint::from(6u32));
    }

    #[test]
    fn inverse_composes_to_identity() {
        let p = Permutation::from_images(vec![3, 0, 4, 1, 2]).unwrap();
        assert_eq!(p.then(&p.inverse()), Permutation::identity(5));
    }
}

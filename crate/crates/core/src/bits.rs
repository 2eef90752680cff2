//! Fixed-width bitstrings.
//!
//! Bit index 0 is the least significant bit. The text form prints the most
//! significant bit first, so `"110"` has bits `[0, 1, 1]` and value 6.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("invalid bit character {0:?}")]
    BadChar(char),
    #[error("value needs more than {width} bits")]
    Overflow { width: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bitstring {
    words: Vec<u64>,
    width: usize,
}

impl Bitstring {
    pub fn zeros(width: usize) -> Self {
        Bitstring {
            words: vec![0; width.div_ceil(64)],
            width,
        }
    }

    /// Low `width` bits of `value`. Panics if `value` does not fit.
    pub fn from_u64(value: u64, width: usize) -> Self {
        assert!(
            width >= 64 || value >> width == 0,
            "{value} does not fit in {width} bits"
        );
        let mut b = Self::zeros(width);
        if width > 0 {
            b.words[0] = value;
        }
        b
    }

    pub fn from_biguint(value: &BigUint, width: usize) -> Result<Self, BitsError> {
        if value.bits() as usize > width {
            return Err(BitsError::Overflow { width });
        }
        let mut b = Self::zeros(width);
        for (dst, src) in b.words.iter_mut().zip(value.iter_u64_digits()) {
            *dst = src;
        }
        Ok(b)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut b = Self::zeros(bits.len());
        for (i, &v) in bits.iter().enumerate() {
            b.set(i, v);
        }
        b
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.width, "bit {i} out of range for width {}", self.width);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.width, "bit {i} out of range for width {}", self.width);
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    pub fn swap_bits(&mut self, i: usize, j: usize) {
        let (a, b) = (self.get(i), self.get(j));
        self.set(i, b);
        self.set(j, a);
    }

    /// Integer value; panics above 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.width <= 64, "width {} exceeds 64 bits", self.width);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn to_biguint(&self) -> BigUint {
        if self.words.is_empty() {
            return BigUint::zero();
        }
        let mut digits = Vec::with_capacity(self.words.len() * 2);
        for w in &self.words {
            digits.push(*w as u32);
            digits.push((*w >> 32) as u32);
        }
        BigUint::new(digits)
    }

    pub fn bools(&self) -> Vec<bool> {
        (0..self.width).map(|i| self.get(i)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Bits `[start, start + len)` as a new bitstring.
    pub fn slice(&self, start: usize, len: usize) -> Bitstring {
        let mut out = Bitstring::zeros(len);
        for i in 0..len {
            out.set(i, self.get(start + i));
        }
        out
    }

    /// Writes `part` into bits `[start, start + part.width())`.
    pub fn splice(&mut self, start: usize, part: &Bitstring) {
        for i in 0..part.width {
            self.set(start + i, part.get(i));
        }
    }

    /// Concatenation with `self` in the low bits and `high` above it.
    pub fn concat(&self, high: &Bitstring) -> Bitstring {
        let mut out = Bitstring::zeros(self.width + high.width);
        out.splice(0, self);
        out.splice(self.width, high);
        out
    }

    /// Prepends `k` zero bits on the most significant side.
    pub fn pad(&self, k: usize) -> Bitstring {
        self.concat(&Bitstring::zeros(k))
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.width).rev() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}

impl FromStr for Bitstring {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        let mut b = Bitstring::zeros(chars.len());
        for (pos, &c) in chars.iter().rev().enumerate() {
            match c {
                '0' => {}
                '1' => b.set(pos, true),
                other => return Err(BitsError::BadChar(other)),
            }
        }
        Ok(b)
    }
}

/// Number of bits needed to write every value below `n` (0 for `n <= 1`).
pub fn bits_for(n: u64) -> usize {
    if n <= 1 {
        0
    } else {
        (64 - (n - 1).leading_zeros()) as usize
    }
}

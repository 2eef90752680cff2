//! Bijections on fixed-width bitstrings and the reference iteration engine.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::bits::{bits_for, Bitstring};

/// Largest width accepted by the exhaustive checks.
pub const MAX_EXHAUSTIVE_WIDTH: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("width mismatch: expected {expected} bits, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("width {width} exceeds the exhaustive limit of {max} bits")]
    TooWide { width: usize, max: usize },
    #[error("bijection {0:?} has no backward evaluator")]
    NoBackward(String),
    #[error("{0:?} is not a bijection")]
    NotBijective(String),
}

type WordFn = Arc<dyn Fn(u64) -> u64 + Send + Sync>;
type BitFn = Arc<dyn Fn(&Bitstring) -> Bitstring + Send + Sync>;

#[derive(Clone)]
enum Eval {
    Word(WordFn),
    Bits(BitFn),
}

impl Eval {
    fn bits(&self, width: usize, x: &Bitstring) -> Bitstring {
        match self {
            Eval::Word(f) => Bitstring::from_u64(f(x.to_u64()), width),
            Eval::Bits(f) => f(x),
        }
    }

    fn word(&self, width: usize, x: u64) -> u64 {
        match self {
            Eval::Word(f) => f(x),
            Eval::Bits(f) => f(&Bitstring::from_u64(x, width)).to_u64(),
        }
    }
}

/// A total map on `width`-bit strings, optionally paired with its inverse.
#[derive(Clone)]
pub struct Bijection {
    width: usize,
    label: String,
    forward: Eval,
    backward: Option<Eval>,
}

impl fmt::Debug for Bijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bijection")
            .field("label", &self.label)
            .field("width", &self.width)
            .field("backward", &self.backward.is_some())
            .finish()
    }
}

impl Bijection {
    /// Word-level bijection; `width` must be at most 64.
    pub fn from_words<F>(width: usize, label: impl Into<String>, forward: F) -> Self
    where
        F: Fn(u64) -> u64 + Send + Sync + 'static,
    {
        assert!(width <= 64, "word bijections are limited to 64 bits");
        Bijection {
            width,
            label: label.into(),
            forward: Eval::Word(Arc::new(forward)),
            backward: None,
        }
    }

    pub fn from_bits<F>(width: usize, label: impl Into<String>, forward: F) -> Self
    where
        F: Fn(&Bitstring) -> Bitstring + Send + Sync + 'static,
    {
        Bijection {
            width,
            label: label.into(),
            forward: Eval::Bits(Arc::new(forward)),
            backward: None,
        }
    }

    pub fn with_backward_words<F>(mut self, backward: F) -> Self
    where
        F: Fn(u64) -> u64 + Send + Sync + 'static,
    {
        assert!(self.width <= 64);
        self.backward = Some(Eval::Word(Arc::new(backward)));
        self
    }

    pub fn with_backward_bits<F>(mut self, backward: F) -> Self
    where
        F: Fn(&Bitstring) -> Bitstring + Send + Sync + 'static,
    {
        self.backward = Some(Eval::Bits(Arc::new(backward)));
        self
    }

    /// Drops the backward evaluator, leaving a forward-only bijection.
    pub fn forward_only(mut self) -> Self {
        self.backward = None;
        self
    }

    /// Swaps forward and backward. Fails if there is no backward evaluator.
    pub fn inverse(&self) -> Result<Bijection, KernelError> {
        let backward = self
            .backward
            .clone()
            .ok_or_else(|| KernelError::NoBackward(self.label.clone()))?;
        Ok(Bijection {
            width: self.width,
            label: format!("inverse of {}", self.label),
            forward: backward,
            backward: Some(self.forward.clone()),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_backward(&self) -> bool {
        self.backward.is_some()
    }

    fn check_width(&self, x: &Bitstring) -> Result<(), KernelError> {
        if x.width() != self.width {
            return Err(KernelError::WidthMismatch {
                expected: self.width,
                got: x.width(),
            });
        }
        Ok(())
    }

    pub fn forward(&self, x: &Bitstring) -> Result<Bitstring, KernelError> {
        self.check_width(x)?;
        Ok(self.forward.bits(self.width, x))
    }

    pub fn backward(&self, x: &Bitstring) -> Result<Bitstring, KernelError> {
        self.check_width(x)?;
        let b = self
            .backward
            .as_ref()
            .ok_or_else(|| KernelError::NoBackward(self.label.clone()))?;
        Ok(b.bits(self.width, x))
    }

    /// Forward map on integer encodings; requires `width <= 64`.
    pub fn forward_word(&self, x: u64) -> u64 {
        self.forward.word(self.width, x)
    }

    pub fn backward_word(&self, x: u64) -> Option<u64> {
        self.backward.as_ref().map(|b| b.word(self.width, x))
    }

    /// Replaces (or supplies) the backward evaluator with a lookup table
    /// built by exhaustive inversion of the forward map.
    pub fn with_tabulated_inverse(self) -> Result<Bijection, KernelError> {
        if self.width > MAX_EXHAUSTIVE_WIDTH {
            return Err(KernelError::TooWide {
                width: self.width,
                max: MAX_EXHAUSTIVE_WIDTH,
            });
        }
        let size = 1usize << self.width;
        let mut table = vec![u32::MAX; size];
        for x in 0..size as u64 {
            let y = self.forward_word(x) as usize;
            if y >= size || table[y] != u32::MAX {
                return Err(KernelError::NotBijective(self.label.clone()));
            }
            table[y] = x as u32;
        }
        let table = Arc::new(table);
        Ok(self.with_backward_words(move |y| table[y as usize] as u64))
    }
}

/// An instance of the iteration problem: compute `f^(n)(x)`.
#[derive(Clone, Debug)]
pub struct IterationProblem {
    pub f: Bijection,
    pub n: BigUint,
    pub x: Bitstring,
}

impl IterationProblem {
    pub fn new(f: Bijection, n: BigUint, x: Bitstring) -> Result<Self, KernelError> {
        f.check_width(&x)?;
        Ok(IterationProblem { f, n, x })
    }

    pub fn solve(&self) -> Result<Bitstring, KernelError> {
        iterate(&self.f, &self.n, &self.x)
    }
}

/// Applies `f` exactly `n` times, counting iterations one at a time.
pub fn iterate(f: &Bijection, n: &BigUint, x: &Bitstring) -> Result<Bitstring, KernelError> {
    f.check_width(x)?;
    if f.width <= 64 {
        let mut v = x.to_u64();
        let mut run = |count: u64| {
            for _ in 0..count {
                v = f.forward_word(v);
            }
        };
        match n.to_u64() {
            Some(count) => run(count),
            None => {
                let mut left = n.clone();
                let chunk = BigUint::from(u64::MAX);
                while left > chunk {
                    run(u64::MAX);
                    left -= &chunk;
                }
                run(left.to_u64().unwrap_or(0));
            }
        }
        return Ok(Bitstring::from_u64(v, f.width));
    }
    let mut v = x.clone();
    let mut left = n.clone();
    while !left.is_zero() {
        v = f.forward.bits(f.width, &v);
        left -= BigUint::one();
    }
    Ok(v)
}

pub fn iterate_u64(f: &Bijection, n: u64, x: &Bitstring) -> Result<Bitstring, KernelError> {
    iterate(f, &BigUint::from(n), x)
}

/// Outcome of an exhaustive bijectivity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BijectionCheck {
    Bijective,
    /// Two distinct inputs with the same image.
    Collision {
        first: Bitstring,
        second: Bitstring,
        image: Bitstring,
    },
    /// The supplied backward evaluator does not undo the forward map here.
    InverseMismatch {
        input: Bitstring,
        image: Bitstring,
        recovered: Bitstring,
    },
}

impl BijectionCheck {
    pub fn is_bijective(&self) -> bool {
        matches!(self, BijectionCheck::Bijective)
    }
}

pub fn check_bijection_exhaustive(f: &Bijection) -> Result<BijectionCheck, KernelError> {
    let k = f.width;
    if k > MAX_EXHAUSTIVE_WIDTH {
        return Err(KernelError::TooWide {
            width: k,
            max: MAX_EXHAUSTIVE_WIDTH,
        });
    }
    let size = 1u64 << k;
    let mut seen = vec![0u64; (size as usize).div_ceil(64)];
    for x in 0..size {
        let y = f.forward_word(x);
        let (word, bit) = ((y / 64) as usize, y % 64);
        if seen[word] >> bit & 1 == 1 {
            let first = (0..x)
                .find(|&p| f.forward_word(p) == y)
                .expect("an earlier preimage exists");
            return Ok(BijectionCheck::Collision {
                first: Bitstring::from_u64(first, k),
                second: Bitstring::from_u64(x, k),
                image: Bitstring::from_u64(y, k),
            });
        }
        seen[word] |= 1 << bit;
        if let Some(back) = f.backward_word(y) {
            if back != x {
                return Ok(BijectionCheck::InverseMismatch {
                    input: Bitstring::from_u64(x, k),
                    image: Bitstring::from_u64(y, k),
                    recovered: Bitstring::from_u64(back, k),
                });
            }
        }
    }
    Ok(BijectionCheck::Bijective)
}

fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

pub fn identity(width: usize) -> Bijection {
    if width <= 64 {
        Bijection::from_words(width, format!("identity({width})"), |x| x).with_backward_words(|x| x)
    } else {
        Bijection::from_bits(width, format!("identity({width})"), |x| x.clone())
            .with_backward_bits(|x| x.clone())
    }
}

/// `x -> x + 1 mod 2^width`.
pub fn increment(width: usize) -> Bijection {
    let m = mask(width);
    Bijection::from_words(width, format!("increment({width})"), move |x| x.wrapping_add(1) & m)
        .with_backward_words(move |x| x.wrapping_sub(1) & m)
}

/// `x -> x - 1 mod 2^width`.
pub fn decrement(width: usize) -> Bijection {
    increment(width)
        .inverse()
        .expect("increment carries a backward map")
}

/// Left rotation of the bits by one position.
pub fn rotate_left(width: usize) -> Bijection {
    assert!((1..=64).contains(&width));
    let m = mask(width);
    let top = width - 1;
    Bijection::from_words(width, format!("rotate_left({width})"), move |x| {
        ((x << 1) | (x >> top)) & m
    })
    .with_backward_words(move |x| ((x >> 1) | (x << top)) & m)
}

/// Arnold's cat map on the `n x n` integer grid.
///
/// A pair `(x, y)` is encoded with `x` in the low `ceil(log2 n)` bits and `y`
/// above it. Encodings with a coordinate `>= n` are fixed points.
pub fn cat_map(n: u64) -> Bijection {
    assert!(n >= 1, "cat map needs a positive grid size");
    let half = bits_for(n);
    let width = 2 * half;
    let split = move |v: u64| (v & mask(half), v >> half);
    let join = move |x: u64, y: u64| x | (y << half);
    let fwd = move |v: u64| {
        let (x, y) = split(v);
        if x >= n || y >= n {
            return v;
        }
        join((2 * x + y) % n, (x + y) % n)
    };
    let bwd = move |v: u64| {
        let (x, y) = split(v);
        if x >= n || y >= n {
            return v;
        }
        join((x + n - y) % n, (2 * y + n - x % n) % n)
    };
    Bijection::from_words(width, format!("cat_map({n})"), fwd).with_backward_words(bwd)
}

/// Small bijections from this module used by the invariant suites.
pub fn builtins() -> Vec<Bijection> {
    let mut out = Vec::new();
    for k in [0, 1, 4, 7] {
        out.push(identity(k));
    }
    for k in [1, 3, 8] {
        out.push(increment(k));
        out.push(decrement(k));
    }
    for k in [1, 5, 12] {
        out.push(rotate_left(k));
    }
    for n in [1, 2, 5, 8, 13, 50] {
        out.push(cat_map(n));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn identity_iterated_a_million_times() {
        let out = iterate(&identity(4), &BigUint::from(1_000_000u32), &bs("0110")).unwrap();
        assert_eq!(out, bs("0110"));
    }

    #[test]
    fn increment_three_times() {
        assert_eq!(iterate_u64(&increment(3), 3, &bs("110")).unwrap(), bs("001"));
    }

    #[test]
    fn zero_iterations_of_cat_map() {
        let f = cat_map(8);
        for x in 0..(1u64 << f.width()) {
            let b = Bitstring::from_u64(x, f.width());
            assert_eq!(iterate_u64(&f, 0, &b).unwrap(), b);
        }
    }

    #[test]
    fn width_mismatch_is_reported() {
        let err = iterate_u64(&increment(3), 1, &bs("10")).unwrap_err();
        assert_eq!(err, KernelError::WidthMismatch { expected: 3, got: 2 });
    }

    #[test]
    fn identity_is_bijective() {
        assert!(check_bijection_exhaustive(&identity(4)).unwrap().is_bijective());
    }

    #[test]
    fn constant_map_collides() {
        let zero = Bijection::from_words(2, "zero", |_| 0);
        match check_bijection_exhaustive(&zero).unwrap() {
            BijectionCheck::Collision { first, second, image } => {
                assert_ne!(first, second);
                assert_eq!(zero.forward(&first).unwrap(), image);
                assert_eq!(zero.forward(&second).unwrap(), image);
            }
            other => panic!("expected a collision, got {other:?}"),
        }
    }

    #[test]
    fn wrong_backward_is_caught() {
        let f = increment(3).with_backward_words(|x| x);
        assert!(matches!(
            check_bijection_exhaustive(&f).unwrap(),
            BijectionCheck::InverseMismatch { .. }
        ));
    }

    #[test]
    fn too_wide_for_exhaustive_check() {
        let err = check_bijection_exhaustive(&identity(30)).unwrap_err();
        assert!(matches!(err, KernelError::TooWide { width: 30, .. }));
    }

    fn cat(n: u64, x: u64, y: u64) -> (u64, u64) {
        let f = cat_map(n);
        let half = f.width() / 2;
        let v = f.forward_word(x | (y << half));
        (v & mask(half), v >> half)
    }

    #[test]
    fn cat_map_values() {
        assert_eq!(cat(5, 0, 0), (0, 0));
        assert_eq!(cat(5, 1, 0), (2, 1));
    }

    #[test]
    fn cat_map_period_on_two_by_two() {
        // Orbits of all four points on the 2x2 grid, by direct formula.
        let step = |(x, y): (u64, u64)| ((2 * x + y) % 2, (x + y) % 2);
        let mut p = (1, 1);
        for _ in 0..3 {
            p = step(p);
        }
        assert_eq!(p, (1, 1));
        let f = cat_map(2);
        let start = Bitstring::from_u64(1 | (1 << 1), 2);
        assert_eq!(iterate_u64(&f, 3, &start).unwrap(), start);
    }

    #[test]
    fn cat_map_fixes_out_of_range_pairs() {
        let f = cat_map(5);
        let v = 6 | (2 << 3);
        assert_eq!(f.forward_word(v), v);
    }

    #[test]
    fn tabulated_inverse_matches() {
        let f = cat_map(13).forward_only().with_tabulated_inverse().unwrap();
        assert!(check_bijection_exhaustive(&f).unwrap().is_bijective());
    }

    #[test]
    fn builtins_are_bijective_with_inverses() {
        for f in builtins().into_iter().filter(|f| f.width() <= 12) {
            assert!(
                check_bijection_exhaustive(&f).unwrap().is_bijective(),
                "{}",
                f.label()
            );
            for x in 0..(1u64 << f.width()) {
                let y = f.forward_word(x);
                assert_eq!(f.backward_word(y), Some(x), "{}", f.label());
                assert_eq!(f.forward_word(f.backward_word(x).unwrap()), x);
            }
        }
    }

    proptest! {
        #[test]
        fn iteration_is_additive(m in 0u64..100, n in 0u64..100, seed in any::<u64>()) {
            for f in builtins() {
                let x = Bitstring::from_u64(seed & mask(f.width()), f.width());
                let lhs = iterate_u64(&f, m + n, &x).unwrap();
                let rhs = iterate_u64(&f, m, &iterate_u64(&f, n, &x).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}

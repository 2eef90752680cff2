//! Piecewise linear bijections on integer ranges `[0, N)`.
//!
//! A map is a sorted list of half-open pieces `[lo, hi)`, each sending `x` to
//! `mult * x + off`. Validation certifies bijectivity without enumerating the
//! range: pieces must tile `[0, N)`, images must stay inside it, and no two
//! image progressions may share a point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::revcirc::ReversibleCircuit;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlbError {
    #[error("domain size must be positive")]
    EmptyDomain,
    #[error("piece {piece} is empty or reversed")]
    EmptyPiece { piece: usize },
    #[error("piece {piece} has multiplier zero")]
    ZeroMultiplier { piece: usize },
    #[error("pieces {first} and {second} overlap")]
    Overlap { first: usize, second: usize },
    #[error("no piece covers {at}")]
    Gap { at: BigInt },
    #[error("piece {piece} lies partly outside the domain")]
    OutsideDomain { piece: usize },
    #[error("image of piece {piece} leaves the domain")]
    ImageEscape { piece: usize },
    #[error("pieces {first} and {second} both reach {value}")]
    Collision {
        first: usize,
        second: usize,
        value: BigInt,
    },
    #[error("{x} lies outside [0, {size})")]
    OutOfDomain { x: BigInt, size: BigInt },
    #[error("stage {stage} has domain {got}, expected {expected}")]
    DomainMismatch {
        stage: usize,
        expected: BigInt,
        got: BigInt,
    },
    #[error("an empty list of stages has no lift")]
    NoStages,
    #[error("bit position {pos} outside {width} bits")]
    BitOutOfRange { pos: usize, width: usize },
    #[error("circuit width {width} exceeds the limit {max}")]
    TooWide { width: usize, max: usize },
}

/// `x in [lo, hi)` maps to `mult * x + off`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub lo: BigInt,
    pub hi: BigInt,
    pub mult: BigInt,
    pub off: BigInt,
}

impl Piece {
    pub fn new(lo: impl Into<BigInt>, hi: impl Into<BigInt>, mult: impl Into<BigInt>, off: impl Into<BigInt>) -> Self {
        Piece {
            lo: lo.into(),
            hi: hi.into(),
            mult: mult.into(),
            off: off.into(),
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        &self.mult * x + &self.off
    }

    /// Smallest and largest image values.
    pub fn image_bounds(&self) -> (BigInt, BigInt) {
        let a = self.eval(&self.lo);
        let b = self.eval(&(&self.hi - 1));
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Preimage of `y` under this piece, if there is one.
    pub fn preimage(&self, y: &BigInt) -> Option<BigInt> {
        let (q, r) = (y - &self.off).div_rem(&self.mult);
        (r.is_zero() && q >= self.lo && q < self.hi).then_some(q)
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "piece {} {} {} {}", self.lo, self.hi, self.mult, self.off)
    }
}

/// Intersection of `a mod m` and `b mod n` (`m, n >= 1`): `None` if empty,
/// otherwise `(r, mn/g)` with `0 <= r < mn/g`.
pub fn progression_intersect(a: &BigInt, m: &BigInt, b: &BigInt, n: &BigInt) -> Option<(BigInt, BigInt)> {
    assert!(m.is_positive() && n.is_positive(), "moduli must be positive");
    let (g, mm, nn) = extended_gcd(m, n);
    if !(a - b).is_multiple_of(&g) {
        return None;
    }
    let modulus = m / &g * n;
    // m*mm + n*nn = g, so a*n*nn + b*m*mm is a mod m and b mod n, times g.
    let r = (a * n * &nn + b * m * &mm) / &g;
    Some((r.mod_floor(&modulus), modulus))
}

/// `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        let t2 = &t0 - &q * &t1;
        (r0, r1) = (r1, r2);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct SmallPiece {
    lo: i128,
    hi: i128,
    mult: i128,
    off: i128,
}

/// A validated piecewise linear bijection. Construct with [`validate_plb`].
#[derive(Clone, PartialEq, Eq)]
pub struct Plb {
    size: BigInt,
    pieces: Vec<Piece>,
    small: Option<Vec<SmallPiece>>,
}

impl fmt::Debug for Plb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Plb(N = {}, {} pieces)", self.size, self.pieces.len())
    }
}

impl fmt::Display for Plb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "plb {}", self.size)?;
        for p in &self.pieces {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// An interval exchange is a [`Plb`] whose multipliers are all 1.
pub type IntervalExchange = Plb;

/// Checks that `pieces` describe a bijection of `[0, size)` and returns it
/// with the pieces sorted.
pub fn validate_plb(size: impl Into<BigInt>, mut pieces: Vec<Piece>) -> Result<Plb, PlbError> {
    let size = size.into();
    if !size.is_positive() {
        return Err(PlbError::EmptyDomain);
    }
    for (i, p) in pieces.iter().enumerate() {
        if p.lo >= p.hi {
            return Err(PlbError::EmptyPiece { piece: i });
        }
        if p.mult.is_zero() {
            return Err(PlbError::ZeroMultiplier { piece: i });
        }
    }
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&a, &b| pieces[a].lo.cmp(&pieces[b].lo));

    let mut at = BigInt::zero();
    for w in 0..order.len() {
        let p = &pieces[order[w]];
        match p.lo.cmp(&at) {
            Ordering::Greater => return Err(PlbError::Gap { at }),
            Ordering::Less if w == 0 => return Err(PlbError::OutsideDomain { piece: order[0] }),
            Ordering::Less => {
                return Err(PlbError::Overlap {
                    first: order[w - 1],
                    second: order[w],
                })
            }
            Ordering::Equal => at = p.hi.clone(),
        }
    }
    match at.cmp(&size) {
        Ordering::Less => return Err(PlbError::Gap { at }),
        Ordering::Greater => {
            let last = *order.last().expect("non-empty when past size");
            return Err(PlbError::OutsideDomain { piece: last });
        }
        Ordering::Equal => {}
    }

    let bounds: Vec<(BigInt, BigInt)> = pieces.iter().map(Piece::image_bounds).collect();
    for (i, (lo, hi)) in bounds.iter().enumerate() {
        if lo.is_negative() || hi >= &size {
            return Err(PlbError::ImageEscape { piece: i });
        }
    }
    if let Some((first, second, value)) = find_collision(&pieces, &bounds) {
        return Err(PlbError::Collision { first, second, value });
    }

    let sorted: Vec<Piece> = order.iter().map(|&i| pieces[i].clone()).collect();
    pieces = sorted;
    let small = small_form(&size, &pieces);
    Ok(Plb { size, pieces, small })
}

/// Sweep over image intervals; only pairs whose intervals overlap are tested
/// for a common progression point.
fn find_collision(pieces: &[Piece], bounds: &[(BigInt, BigInt)]) -> Option<(usize, usize, BigInt)> {
    let mut by_start: Vec<usize> = (0..pieces.len()).collect();
    by_start.sort_by(|&a, &b| bounds[a].0.cmp(&bounds[b].0));
    let mut active: Vec<usize> = Vec::new();
    for &i in &by_start {
        let (lo_i, hi_i) = &bounds[i];
        active.retain(|&j| &bounds[j].1 >= lo_i);
        for &j in &active {
            let lo = lo_i.max(&bounds[j].0);
            let hi = hi_i.min(&bounds[j].1);
            if let Some(v) = common_point(&pieces[i], &pieces[j], lo, hi) {
                return Some((j.min(i), j.max(i), v));
            }
        }
        active.push(i);
    }
    None
}

/// Smallest value in `[lo, hi]` reached by both pieces.
fn common_point(p: &Piece, q: &Piece, lo: &BigInt, hi: &BigInt) -> Option<BigInt> {
    let (m, n) = (p.mult.abs(), q.mult.abs());
    let (r, modulus) = progression_intersect(&p.off.mod_floor(&m), &m, &q.off.mod_floor(&n), &n)?;
    let v = lo + (&r - lo).mod_floor(&modulus);
    (&v <= hi).then_some(v)
}

fn small_form(size: &BigInt, pieces: &[Piece]) -> Option<Vec<SmallPiece>> {
    // keep every intermediate product well inside i128
    if size.bits() > 60 {
        return None;
    }
    pieces
        .iter()
        .map(|p| {
            let mult = p.mult.to_i128()?;
            let off = p.off.to_i128()?;
            (mult.unsigned_abs() < 1 << 62 && off.unsigned_abs() < 1 << 124).then_some(())?;
            Some(SmallPiece {
                lo: p.lo.to_i128()?,
                hi: p.hi.to_i128()?,
                mult,
                off,
            })
        })
        .collect()
}

impl Plb {
    pub fn size(&self) -> &BigInt {
        &self.size
    }

    /// Pieces ordered by `lo`.
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_interval_exchange(&self) -> bool {
        self.pieces.iter().all(|p| p.mult.is_one())
    }

    pub fn identity(size: impl Into<BigInt>) -> Plb {
        let size = size.into();
        validate_plb(size.clone(), vec![Piece::new(0, size, 1, 0)]).expect("identity is a bijection")
    }

    fn check(&self, x: &BigInt) -> Result<(), PlbError> {
        if x.is_negative() || x >= &self.size {
            return Err(PlbError::OutOfDomain {
                x: x.clone(),
                size: self.size.clone(),
            });
        }
        Ok(())
    }

    fn apply_small(&self, small: &[SmallPiece], x: i128) -> i128 {
        let i = small.partition_point(|p| p.hi <= x);
        let p = small[i];
        p.mult * x + p.off
    }

    pub fn apply(&self, x: &BigInt) -> Result<BigInt, PlbError> {
        self.check(x)?;
        if let (Some(small), Some(v)) = (&self.small, x.to_i128()) {
            return Ok(BigInt::from(self.apply_small(small, v)));
        }
        let i = self.pieces.partition_point(|p| &p.hi <= x);
        Ok(self.pieces[i].eval(x))
    }

    /// Finds the piece whose image contains `y` and solves for its preimage.
    pub fn apply_inverse(&self, y: &BigInt) -> Result<BigInt, PlbError> {
        self.check(y)?;
        self.pieces
            .iter()
            .find_map(|p| p.preimage(y))
            .ok_or_else(|| unreachable_for_valid(y))
    }

    /// `n` forward applications, one at a time.
    pub fn iterate(&self, n: &BigUint, x: &BigInt) -> Result<BigInt, PlbError> {
        self.check(x)?;
        let steps = n.to_u64().expect("iteration counts beyond u64 are out of reach one step at a time");
        if let (Some(small), Some(mut v)) = (&self.small, x.to_i128()) {
            for _ in 0..steps {
                v = self.apply_small(small, v);
            }
            return Ok(BigInt::from(v));
        }
        let mut cur = x.clone();
        for _ in 0..steps {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    pub fn iterate_u64(&self, n: u64, x: u64) -> u64 {
        self.iterate(&BigUint::from(n), &BigInt::from(x))
            .expect("x in domain")
            .to_u64()
            .expect("domain fits in u64")
    }

    /// Length of the cycle through `x`.
    pub fn orbit_length(&self, x: &BigInt) -> Result<BigUint, PlbError> {
        let mut cur = self.apply(x)?;
        let mut len = BigUint::one();
        while &cur != x {
            cur = self.apply(&cur)?;
            len += 1u32;
        }
        Ok(len)
    }

    /// Order of the permutation, as the lcm of all cycle lengths. Walks every
    /// element once, so only for small domains.
    pub fn order(&self) -> BigUint {
        let n = self.size.to_usize().expect("order needs a small domain");
        let mut seen = vec![false; n];
        let mut order = BigUint::one();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut cur = s;
            while !seen[cur] {
                seen[cur] = true;
                len += 1;
                cur = self.apply(&BigInt::from(cur)).expect("in domain").to_usize().expect("small");
            }
            order = order.lcm(&BigUint::from(len));
        }
        order
    }

    /// Image of every element; only for small domains.
    pub fn images(&self) -> Vec<u64> {
        let n = self.size.to_u64().expect("small domain");
        (0..n).map(|x| self.iterate_u64(1, x)).collect()
    }
}

fn unreachable_for_valid(y: &BigInt) -> PlbError {
    // validation guarantees every point of the domain has a preimage
    panic!("validated bijection has no preimage for {y}")
}

/// Perfect riffle shuffle of `n` cards: the first `ceil(n/2)` go to even
/// positions, the rest interleave between them.
pub fn riffle(n: impl Into<BigInt>) -> Plb {
    let n: BigInt = n.into();
    assert!(n.is_positive(), "riffle needs at least one card");
    let half: BigInt = (&n + 1) / 2;
    let mut pieces = vec![Piece::new(0, half.clone(), 2, 0)];
    if half < n {
        let off = if n.is_odd() { -&n } else { -&n + 1 };
        pieces.push(Piece::new(half, n.clone(), 2, off));
    }
    validate_plb(n, pieces).expect("riffle is a bijection")
}

/// Left rotation by one of all `k` bits of `[0, 2^k)`.
pub fn circular_shift(k: usize) -> Plb {
    rotate_low_bits(k, k)
}

/// Left rotation by one of the low `m` bits of `k`-bit values, the high
/// `k - m` bits held fixed. Two pieces per value of the high bits.
pub fn rotate_low_bits(k: usize, m: usize) -> Plb {
    assert!(m <= k);
    let size = BigInt::one() << k;
    if m <= 1 {
        return Plb::identity(size);
    }
    let block = BigInt::one() << m;
    let half = BigInt::one() << (m - 1);
    let mut pieces = Vec::new();
    let highs = 1usize << (k - m);
    for h in 0..highs {
        let base = &block * h;
        // y = base + l; l < half maps to base + 2l, else base + 2l - 2^m + 1
        pieces.push(Piece::new(base.clone(), &base + &half, 2, -&base));
        pieces.push(Piece::new(&base + &half, &base + &block, 2, -&base - &block + 1));
    }
    validate_plb(size, pieces).expect("rotation is a bijection")
}

/// Applies `stages` left to right.
pub fn compose(stages: &[Plb], x: &BigInt) -> Result<BigInt, PlbError> {
    stages.iter().try_fold(x.clone(), |v, s| s.apply(&v))
}

/// A sequence of maps on `[0, n)` together with the single map on `[0, kn)`
/// whose `k`-th iterate reproduces their composition.
#[derive(Debug, Clone)]
pub struct PlbProgram {
    stages: Vec<Plb>,
    lifted: Plb,
}

impl PlbProgram {
    pub fn stages(&self) -> &[Plb] {
        &self.stages
    }

    pub fn lifted(&self) -> &Plb {
        &self.lifted
    }

    /// Number of stages, which is also the iteration count of the lift.
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn inner_size(&self) -> &BigInt {
        self.stages[0].size()
    }

    /// The composition, through the lift.
    pub fn apply(&self, x: &BigInt) -> Result<BigInt, PlbError> {
        self.stages[0].check(x)?;
        self.lifted.iterate(&BigUint::from(self.stages.len()), x)
    }
}

/// Stage `i` (from 0) of a `k`-stage program runs on `[i*n, (i+1)*n)` and
/// lands in the next block; the last stage wraps back to `[0, n)`.
pub fn compose_lift(stages: Vec<Plb>) -> Result<PlbProgram, PlbError> {
    let first = stages.first().ok_or(PlbError::NoStages)?;
    let n = first.size().clone();
    for (i, s) in stages.iter().enumerate() {
        if s.size() != &n {
            return Err(PlbError::DomainMismatch {
                stage: i,
                expected: n,
                got: s.size().clone(),
            });
        }
    }
    let k = stages.len();
    let mut pieces = Vec::with_capacity(stages.iter().map(Plb::piece_count).sum());
    for (i, s) in stages.iter().enumerate() {
        let shift_in = &n * i;
        let shift_out = if i + 1 == k { BigInt::zero() } else { &n * (i + 1) };
        for p in s.pieces() {
            pieces.push(Piece {
                lo: &p.lo + &shift_in,
                hi: &p.hi + &shift_in,
                mult: p.mult.clone(),
                off: &p.off + &shift_out - &p.mult * &shift_in,
            });
        }
    }
    let lifted = validate_plb(&n * k, pieces)?;
    Ok(PlbProgram { stages, lifted })
}

/// Result of [`bit_permute`]. After `forward`, position `k - 1 - r` holds the
/// original bit `top[r]`; `inverse` undoes `forward` pointwise.
#[derive(Debug, Clone)]
pub struct BitPermutation {
    pub width: usize,
    pub forward: Vec<Plb>,
    pub inverse: Vec<Plb>,
    pub top: Vec<usize>,
}

impl BitPermutation {
    pub fn apply(&self, x: &BigInt) -> Result<BigInt, PlbError> {
        compose(&self.forward, x)
    }

    pub fn apply_inverse(&self, x: &BigInt) -> Result<BigInt, PlbError> {
        compose(&self.inverse, x)
    }

    pub fn piece_count(&self) -> usize {
        self.forward.iter().chain(&self.inverse).map(Plb::piece_count).sum()
    }

    /// The full bit arrangement: `arrangement()[q]` is the original position
    /// of the bit found at position `q` after `forward`.
    pub fn arrangement(&self) -> Vec<usize> {
        let mut arr: Vec<usize> = (0..self.width).collect();
        for s in &self.forward {
            apply_to_arrangement(s, &mut arr, self.width);
        }
        arr
    }
}

/// Recovers which bit moves where by probing a stage with single-bit inputs.
fn apply_to_arrangement(stage: &Plb, arr: &mut Vec<usize>, k: usize) {
    let mut next = vec![0; k];
    for (q, &orig) in arr.iter().enumerate() {
        let y = stage.apply(&(BigInt::one() << q)).expect("in range");
        next[y.bits() as usize - 1] = orig;
    }
    *arr = next;
}

/// Per-level stage bound: `k - 1` two-piece rotations and `k - 2` four-piece
/// low rotations, each way.
pub const BIT_PERMUTE_PIECES_PER_BIT_PER_WIDTH: usize = 6;

/// Builds a composition of rotations that moves the bits at positions `set`
/// to the top `|set|` positions, by induction on `|set|`: place all but the
/// largest element, rotate the whole word until that element is on top, then
/// rotate the low `k - 1` bits until the placed block sits just below it.
pub fn bit_permute(set: &[usize], k: usize) -> Result<BitPermutation, PlbError> {
    let mut c: Vec<usize> = set.to_vec();
    c.sort_unstable();
    c.dedup();
    if let Some(&pos) = c.iter().find(|&&p| p >= k) {
        return Err(PlbError::BitOutOfRange { pos, width: k });
    }
    let size = BigInt::one() << k;
    if c.is_empty() {
        return Ok(BitPermutation {
            width: k,
            forward: vec![Plb::identity(size.clone())],
            inverse: vec![Plb::identity(size)],
            top: Vec::new(),
        });
    }
    let full = circular_shift(k);
    let low = rotate_low_bits(k, k.saturating_sub(1));
    // arr[q] = original bit currently at position q
    let mut arr: Vec<usize> = (0..k).collect();
    let rotate_all = |arr: &mut Vec<usize>| arr.rotate_right(1);
    let rotate_low = |arr: &mut Vec<usize>| {
        if k >= 2 {
            arr[..k - 1].rotate_right(1)
        }
    };
    let mut forward: Vec<Plb> = Vec::new();
    // inverse levels are emitted innermost last, so collect and reverse
    let mut inverse_levels: Vec<Vec<Plb>> = Vec::new();
    for (level, &bit) in c.iter().enumerate() {
        let i = arr.iter().position(|&b| b == bit).expect("bit present");
        let mut fwd = Vec::new();
        let mut inv = Vec::new();
        let turns = k - 1 - i;
        for _ in 0..turns {
            fwd.push(full.clone());
            rotate_all(&mut arr);
        }
        if level > 0 {
            // placed block now ends at position k - 2 - i
            let block_top = arr
                .iter()
                .rposition(|b| c[..level].contains(b))
                .expect("block present");
            let j = (k - 2) - block_top;
            for _ in 0..j {
                fwd.push(low.clone());
                rotate_low(&mut arr);
            }
            inv.extend(std::iter::repeat_n(low.clone(), (k - 1 - j) % (k - 1)));
        }
        if turns > 0 {
            inv.extend(std::iter::repeat_n(full.clone(), k - turns));
        }
        forward.extend(fwd);
        inverse_levels.push(inv);
    }
    let mut inverse: Vec<Plb> = inverse_levels.into_iter().rev().flatten().collect();
    if forward.is_empty() {
        forward.push(Plb::identity(size.clone()));
    }
    if inverse.is_empty() {
        inverse.push(Plb::identity(size));
    }
    let top = (0..c.len()).map(|r| arr[k - 1 - r]).collect();
    Ok(BitPermutation {
        width: k,
        forward,
        inverse,
        top,
    })
}

pub const MAX_CIRCUIT_WIDTH: usize = 16;

/// Piece budget per gate and wire for [`circuit_to_plb`].
pub const CIRCUIT_PIECES_PER_GATE_PER_WIRE: usize = 40;

/// The stage list simulating `c` on `[0, 2^k)`, gate by gate: move the gate's
/// wires to the top, permute the aligned blocks by its truth table, move them
/// back.
pub fn circuit_stages(c: &ReversibleCircuit) -> Result<Vec<Plb>, PlbError> {
    let k = c.width();
    if k > MAX_CIRCUIT_WIDTH {
        return Err(PlbError::TooWide {
            width: k,
            max: MAX_CIRCUIT_WIDTH,
        });
    }
    let size = BigInt::one() << k;
    let mut stages = Vec::new();
    for gate in c.gates() {
        let wires = gate.wires();
        let perm = bit_permute(&wires, k)?;
        let m = wires.len();
        let table = gate.local_truth_table();
        let block = BigInt::one() << (k - m);
        // top-block value h has original bit perm.top[r] at its bit m - 1 - r
        let local_of = |h: usize| -> u64 {
            wires.iter().enumerate().fold(0u64, |acc, (b, w)| {
                let r = perm.top.iter().position(|t| t == w).expect("gate wire placed");
                acc | (((h >> (m - 1 - r)) & 1) as u64) << b
            })
        };
        let top_of = |local: u64| -> usize {
            wires.iter().enumerate().fold(0usize, |acc, (b, w)| {
                let r = perm.top.iter().position(|t| t == w).expect("gate wire placed");
                acc | (((local >> b) & 1) as usize) << (m - 1 - r)
            })
        };
        let pieces = (0..1usize << m)
            .map(|h| {
                let h2 = top_of(table[local_of(h) as usize]);
                let lo = &block * h;
                Piece::new(lo.clone(), &lo + &block, 1, &block * (h2 as i64 - h as i64))
            })
            .collect();
        stages.extend(perm.forward);
        stages.push(validate_plb(size.clone(), pieces)?);
        stages.extend(perm.inverse);
    }
    if stages.is_empty() {
        stages.push(Plb::identity(size));
    }
    Ok(stages)
}

/// A single map `T` and step count `s` with `T^(s)(x) = c(x)` on `[0, 2^k)`.
pub fn circuit_to_plb(c: &ReversibleCircuit) -> Result<(Plb, usize), PlbError> {
    let program = compose_lift(circuit_stages(c)?)?;
    let s = program.len();
    Ok((program.lifted, s))
}

/// Signed `x` as an unsigned value; panics on negatives.
pub fn to_biguint(x: &BigInt) -> BigUint {
    match x.sign() {
        Sign::Minus => panic!("negative value {x}"),
        _ => x.magnitude().clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_circuit, rng};
    use crate::revcirc::Gate;
    use rand::Rng;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn brute_bijective(n: i64, pieces: &[Piece]) -> bool {
        let mut hit = vec![0u32; n as usize];
        let mut covered = vec![0u32; n as usize];
        for p in pieces {
            let (lo, hi) = (p.lo.to_i64().unwrap(), p.hi.to_i64().unwrap());
            for x in lo..hi {
                if x < 0 || x >= n {
                    return false;
                }
                covered[x as usize] += 1;
                let y = p.eval(&bi(x)).to_i64().unwrap();
                if y < 0 || y >= n {
                    return false;
                }
                hit[y as usize] += 1;
            }
        }
        covered.iter().all(|&c| c == 1) && hit.iter().all(|&c| c == 1)
    }

    #[test]
    fn progression_examples() {
        let brute = |a: i64, m: i64, b: i64, n: i64| -> Vec<i64> {
            (0..50).filter(|x| x % m == a % m && x % n == b % n).collect()
        };
        let (r, md) = progression_intersect(&bi(0), &bi(4), &bi(2), &bi(6)).unwrap();
        assert_eq!((r.clone(), md.clone()), (bi(8), bi(12)));
        let ours: Vec<i64> = (0..50).filter(|x| bi(*x).mod_floor(&md) == r).collect();
        assert_eq!(ours, brute(0, 4, 2, 6));
        assert!(progression_intersect(&bi(0), &bi(2), &bi(1), &bi(2)).is_none());
        assert_eq!(progression_intersect(&bi(5), &bi(1), &bi(3), &bi(7)), Some((bi(3), bi(7))));
    }

    #[test]
    fn progression_matches_brute_force() {
        for m in 1..12i64 {
            for n in 1..12i64 {
                for a in 0..m {
                    for b in 0..n {
                        let members: Vec<i64> = (0..300).filter(|x| x % m == a && x % n == b).collect();
                        match progression_intersect(&bi(a), &bi(m), &bi(b), &bi(n)) {
                            None => assert!(members.is_empty()),
                            Some((r, md)) => {
                                let ours: Vec<i64> = (0..300).filter(|x| bi(*x).mod_floor(&md) == r).collect();
                                assert_eq!(ours, members);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn validation_examples() {
        assert!(validate_plb(5, vec![Piece::new(0, 5, 1, 0)]).is_ok());
        let dup = vec![Piece::new(0, 4, 1, 0), Piece::new(4, 8, 1, -4)];
        assert!(matches!(validate_plb(8, dup), Err(PlbError::Collision { .. })));
        assert!(matches!(
            validate_plb(8, vec![Piece::new(0, 4, 1, 0)]),
            Err(PlbError::Gap { .. })
        ));
        assert!(matches!(
            validate_plb(8, vec![Piece::new(0, 5, 1, 0), Piece::new(4, 8, 1, 0)]),
            Err(PlbError::Overlap { .. })
        ));
        assert!(matches!(
            validate_plb(4, vec![Piece::new(0, 4, 1, 1)]),
            Err(PlbError::ImageEscape { .. })
        ));
        assert!(matches!(
            validate_plb(4, vec![Piece::new(0, 4, 0, 1)]),
            Err(PlbError::ZeroMultiplier { .. })
        ));
        // a decreasing piece
        assert!(validate_plb(6, vec![Piece::new(0, 6, -1, 5)]).is_ok());
    }

    #[test]
    fn validation_agrees_with_brute_force() {
        let mut r = rng(21);
        let mut accepted = 0;
        for _ in 0..3000 {
            let n = r.gen_range(1..=24i64);
            let cuts = r.gen_range(0..4usize);
            let mut pts: Vec<i64> = (0..cuts).map(|_| r.gen_range(1..n.max(2))).collect();
            pts.push(0);
            pts.push(n);
            pts.sort_unstable();
            pts.dedup();
            let pieces: Vec<Piece> = pts
                .windows(2)
                .map(|w| {
                    let mult = *[1, 1, 2, -1, 3].get(r.gen_range(0..5)).unwrap();
                    Piece::new(w[0], w[1], mult, r.gen_range(-n..n))
                })
                .collect();
            let ours = validate_plb(n, pieces.clone()).is_ok();
            assert_eq!(ours, brute_bijective(n, &pieces), "{pieces:?}");
            accepted += ours as usize;
        }
        assert!(accepted > 10);
    }

    #[test]
    fn riffle_examples() {
        let r = riffle(13);
        assert_eq!(r.apply(&bi(3)).unwrap(), bi(6));
        assert_eq!(r.apply(&bi(7)).unwrap(), bi(1));
        assert_eq!(r.apply_inverse(&bi(6)).unwrap(), bi(3));
        for n in 1..=64 {
            let imgs = riffle(n).images();
            let mut sorted = imgs.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..n as u64).collect::<Vec<_>>());
        }
        assert_eq!(riffle(52).order(), BigUint::from(8u32));
    }

    #[test]
    fn riffle_order_matches_brute_force() {
        for n in 1..=64u64 {
            let imgs = riffle(n).images();
            let mut x: Vec<u64> = (0..n).collect();
            let mut steps = 0u64;
            loop {
                x = x.iter().map(|&v| imgs[v as usize]).collect();
                steps += 1;
                if x.iter().enumerate().all(|(i, &v)| v == i as u64) {
                    break;
                }
            }
            assert_eq!(riffle(n).order(), BigUint::from(steps), "n = {n}");
        }
    }

    #[test]
    fn rotations() {
        let s = circular_shift(3);
        assert_eq!(s.iterate_u64(1, 5), 3);
        assert_eq!(s.iterate_u64(1, 1), 2);
        for x in 0..8 {
            assert_eq!(s.iterate_u64(3, x), x);
        }
        assert_eq!(s, riffle(8));
        let low = rotate_low_bits(4, 3);
        assert_eq!(low.piece_count(), 4);
        for x in 0..16u64 {
            let l = x & 7;
            let expect = (x & 8) | ((l << 1) & 7) | (l >> 2);
            assert_eq!(low.iterate_u64(1, x), expect);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut r = rng(5);
        let c = random_circuit(&mut r, 4, 6, 3);
        let (t, _) = circuit_to_plb(&c).unwrap();
        for x in 0..t.size().to_u64().unwrap() {
            let y = t.apply(&bi(x as i64)).unwrap();
            assert_eq!(t.apply_inverse(&y).unwrap(), bi(x as i64));
        }
    }

    #[test]
    fn lift_examples() {
        let single = compose_lift(vec![riffle(13)]).unwrap();
        assert_eq!(single.lifted(), &riffle(13));
        let rot = |by: i64| {
            validate_plb(8, vec![Piece::new(0, 8 - by, 1, by), Piece::new(8 - by, 8, 1, by - 8)]).unwrap()
        };
        let p = compose_lift(vec![rot(1), rot(1)]).unwrap();
        for x in 0..8 {
            assert_eq!(p.apply(&bi(x)).unwrap(), bi((x + 2) % 8));
        }
        let p = compose_lift(vec![riffle(13), riffle(13)]).unwrap();
        assert_eq!(p.lifted().piece_count(), 4);
        for x in 0..13 {
            assert_eq!(p.apply(&bi(x)).unwrap(), riffle(13).iterate(&BigUint::from(2u32), &bi(x)).unwrap());
        }
        assert!(matches!(
            compose_lift(vec![riffle(13), riffle(12)]),
            Err(PlbError::DomainMismatch { stage: 1, .. })
        ));
    }

    #[test]
    fn lift_matches_composition_exhaustively() {
        let mut r = rng(8);
        for k in [2usize, 5, 10] {
            let stages: Vec<Plb> = (0..4)
                .map(|_| if r.gen_bool(0.5) { circular_shift(k) } else { riffle(1i64 << k) })
                .chain([rotate_low_bits(k, k - 1)])
                .collect();
            let p = compose_lift(stages.clone()).unwrap();
            for x in 0..1i64 << k {
                assert_eq!(p.apply(&bi(x)).unwrap(), compose(&stages, &bi(x)).unwrap());
            }
        }
    }

    fn permute_oracle(arr: &[usize], x: u64) -> u64 {
        arr.iter()
            .enumerate()
            .fold(0, |acc, (q, &orig)| acc | ((x >> orig) & 1) << q)
    }

    #[test]
    fn bit_permute_examples() {
        let id = bit_permute(&[], 3).unwrap();
        let top = bit_permute(&[2], 3).unwrap();
        for x in 0..8 {
            assert_eq!(id.apply(&bi(x)).unwrap(), bi(x));
            assert_eq!(top.apply(&bi(x)).unwrap(), bi(x));
        }
        let low = bit_permute(&[0], 3).unwrap();
        assert_eq!(low.top, vec![0]);
        let arr = low.arrangement();
        assert_eq!(arr[2], 0);
        for x in 0..8u64 {
            assert_eq!(low.apply(&bi(x as i64)).unwrap(), BigInt::from(permute_oracle(&arr, x)));
        }
        assert!(bit_permute(&[3], 3).is_err());
    }

    #[test]
    fn bit_permute_all_subsets() {
        for k in 1..=7usize {
            for mask in 0u32..1 << k {
                let set: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).collect();
                let p = bit_permute(&set, k).unwrap();
                let mut top = p.top.clone();
                top.sort_unstable();
                assert_eq!(top, set);
                let arr = p.arrangement();
                for (r, &b) in p.top.iter().enumerate() {
                    assert_eq!(arr[k - 1 - r], b);
                }
                assert!(p.forward.iter().chain(&p.inverse).all(|s| s.piece_count() <= 4));
                assert!(p.piece_count() <= 2 * (BIT_PERMUTE_PIECES_PER_BIT_PER_WIDTH * set.len() * k + 1));
                for x in 0..1u64 << k {
                    let y = p.apply(&BigInt::from(x)).unwrap();
                    assert_eq!(y, BigInt::from(permute_oracle(&arr, x)));
                    assert_eq!(p.apply_inverse(&y).unwrap(), BigInt::from(x));
                }
            }
        }
    }

    #[test]
    fn circuit_examples() {
        let empty = ReversibleCircuit::empty(3);
        let (t, s) = circuit_to_plb(&empty).unwrap();
        assert_eq!(s, 1);
        for x in 0..8 {
            assert_eq!(t.iterate_u64(s as u64, x), x);
        }
        let not = ReversibleCircuit::new(2, vec![Gate::Not(0)]).unwrap();
        let (t, s) = circuit_to_plb(&not).unwrap();
        for x in 0..4 {
            assert_eq!(t.iterate_u64(s as u64, x), x ^ 1);
        }
    }

    #[test]
    fn circuits_agree_exhaustively() {
        let mut r = rng(12);
        for k in 1..=6usize {
            let c = random_circuit(&mut r, k, 6, 3);
            let (t, s) = circuit_to_plb(&c).unwrap();
            assert!(t.piece_count() <= CIRCUIT_PIECES_PER_GATE_PER_WIRE * c.len() * k + 1);
            for x in 0..1u64 << k {
                assert_eq!(t.iterate_u64(s as u64, x), c.eval_word(x), "k = {k}");
                let mut v = x;
                for _ in 0..7 {
                    v = c.eval_word(v);
                }
                assert_eq!(t.iterate_u64(7 * s as u64, x), v);
            }
        }
    }

    #[test]
    fn out_of_domain() {
        assert!(matches!(riffle(5).apply(&bi(5)), Err(PlbError::OutOfDomain { .. })));
        assert!(riffle(5).apply_inverse(&bi(-1)).is_err());
    }
}

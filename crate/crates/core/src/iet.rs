//! Iterated integer interval exchanges solved on a triangulated surface.
//!
//! The exchange's range is drawn as a rectangle cut into horizontal stripes:
//! the top boundary is split at the input intervals, the bottom at the output
//! intervals, and the central line is a single edge. Gluing top to bottom by
//! the exchange (and left to right) turns the integer vertical lines into a
//! normal curve. Walking that curve upwards from central crossing `i` for `d`
//! crossings lands on central crossing `T(i)`, so `T^n(i)` is a position
//! `n*d mod l` along the arc through `i`, where `l` is the arc's length.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::plb::{validate_plb, Piece, Plb, PlbError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IetError {
    #[error(transparent)]
    Plb(#[from] PlbError),
    #[error("piece {piece} has multiplier other than 1")]
    NotExchange { piece: usize },
    #[error("range size {size} exceeds the tracing limit {max}")]
    TooLarge { size: BigInt, max: u64 },
    #[error("crossing {coord} is not on edge {edge} (which has {count} crossings)")]
    BadCrossing { edge: usize, coord: u64, count: u64 },
    #[error("triangle {triangle}: {what}")]
    BadCoords { triangle: usize, what: String },
    #[error("surface is malformed: {0}")]
    Malformed(String),
    #[error("start {i} outside [0, {size})")]
    OutOfRange { i: u64, size: u64 },
}

/// Largest range traced crossing by crossing.
pub const MAX_IET_SIZE: u64 = 1 << 24;

/// Builds an exchange from `(lo, hi, off)` translations of `[0, size)`.
pub fn interval_exchange(size: u64, pieces: &[(u64, u64, i64)]) -> Result<Plb, IetError> {
    let p = pieces.iter().map(|&(lo, hi, off)| Piece::new(lo, hi, 1, off)).collect();
    Ok(validate_plb(size, p)?)
}

/// A four-interval exchange on `[0, 15)`: `[0,3] -> [11,14]`,
/// `[4,5] -> [0,1]`, `6 -> 10`, `[7,14] -> [2,9]`.
pub fn four_interval_example() -> Plb {
    interval_exchange(15, &[(0, 4, 11), (4, 6, -4), (6, 7, 4), (7, 15, -5)]).expect("valid exchange")
}

/// `x -> (x + c) mod n`.
pub fn rotation(n: u64, c: u64) -> Plb {
    let c = c % n;
    if c == 0 {
        return Plb::identity(n);
    }
    interval_exchange(n, &[(0, n - c, c as i64), (n - c, n, c as i64 - n as i64)]).expect("valid rotation")
}

/// A vertex of the rectangle: breakpoint `b` (at `x = b - 1/2`) on line `level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub b: u64,
    pub level: i32,
}

/// Triangle corners in clockwise order; side `k` runs from corner `k` to
/// corner `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    pub corners: [Point; 3],
    pub edges: [usize; 3],
    /// Whether side `k` runs along its edge's orientation.
    pub forward: [bool; 3],
}

/// A glued pair of triangle sides, oriented left to right (bottom to top for
/// vertical edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub sides: [(usize, usize); 2],
    /// Index into `sides` of the side whose triangle lies above the edge.
    pub up: usize,
}

#[derive(Debug, Clone)]
pub struct TriangulatedSurface {
    pub triangles: Vec<Triangle>,
    pub edges: Vec<Edge>,
}

impl TriangulatedSurface {
    /// Every side is glued exactly once, and glued sides run in opposite
    /// directions along their edge.
    pub fn check_gluing(&self) -> Result<(), IetError> {
        let mut uses = vec![0u8; self.triangles.len() * 3];
        for (e, edge) in self.edges.iter().enumerate() {
            for &(t, k) in &edge.sides {
                if self.triangles[t].edges[k] != e {
                    return Err(IetError::Malformed(format!("side ({t}, {k}) disagrees with edge {e}")));
                }
                uses[3 * t + k] += 1;
            }
            let [(t0, k0), (t1, k1)] = edge.sides;
            if self.triangles[t0].forward[k0] == self.triangles[t1].forward[k1] {
                return Err(IetError::Malformed(format!("edge {e} glued against orientation")));
            }
        }
        if uses.iter().any(|&u| u != 1) {
            return Err(IetError::Malformed("a side is glued other than once".into()));
        }
        Ok(())
    }

    fn partner(&self, t: usize, k: usize) -> (usize, usize) {
        let e = &self.edges[self.triangles[t].edges[k]];
        if e.sides[0] == (t, k) {
            e.sides[1]
        } else {
            e.sides[0]
        }
    }
}

/// Crossing counts per edge.
pub type NormalCoordinates = Vec<u64>;

/// Checks the triangle inequality and even sum in every triangle; returns the
/// corner counts, `corners[t][k]` being the segments cutting off corner `k`.
pub fn validate_normal_coords(su: &TriangulatedSurface, coords: &[u64]) -> Result<Vec<[u64; 3]>, IetError> {
    if coords.len() != su.edges.len() {
        return Err(IetError::Malformed(format!(
            "{} coordinates for {} edges",
            coords.len(),
            su.edges.len()
        )));
    }
    su.triangles
        .iter()
        .enumerate()
        .map(|(t, tri)| corner_counts(tri.edges.map(|e| coords[e])).map_err(|what| IetError::BadCoords { triangle: t, what }))
        .collect()
}

/// Corner counts from side counts `n[k]`; corner `k` lies between sides
/// `k - 1` and `k`.
pub fn corner_counts(n: [u64; 3]) -> Result<[u64; 3], String> {
    let total: u64 = n.iter().sum();
    for k in 0..3 {
        if 2 * n[k] > total {
            return Err(format!("coordinates {n:?} break the triangle inequality"));
        }
    }
    if total % 2 == 1 {
        return Err(format!("coordinates {n:?} have an odd sum"));
    }
    Ok([0, 1, 2].map(|k| (n[(k + 2) % 3] + n[k] - n[(k + 1) % 3]) / 2))
}

/// A point where the curve meets an edge, by its position along the edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub edge: usize,
    pub coord: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

/// The surface built from an exchange, with the vertical-line curve on it.
#[derive(Debug, Clone)]
pub struct IetSurface {
    pub surface: TriangulatedSurface,
    pub coords: NormalCoordinates,
    corners: Vec<[u64; 3]>,
    pub central: usize,
    pub stripes: u32,
    pub step: u64,
    size: u64,
}

fn stripe_count(k: usize) -> u32 {
    let mut s = 0;
    while (1usize << s) < k {
        s += 1;
    }
    s.max(1)
}

/// Keeps every other interior breakpoint, so each coarse segment holds at
/// most two fine ones.
fn coarsen(points: &[u64]) -> Vec<u64> {
    let last = points.len() - 1;
    points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i % 2 == 0 || i == last)
        .map(|(_, &p)| p)
        .collect()
}

/// Lines from `level 0` (just `{0, n}`) out to `finest`, coarsest first.
fn ladder(finest: Vec<u64>, s: u32) -> Vec<Vec<u64>> {
    let mut lines = vec![finest];
    for _ in 0..s {
        let next = coarsen(lines.last().expect("non-empty"));
        lines.push(next);
    }
    lines.reverse();
    debug_assert_eq!(lines[0].len(), 2);
    lines
}

struct Builder {
    triangles: Vec<[Point; 3]>,
}

impl Builder {
    /// Triangulates the stripe between `low` (at `level`) and `high` (at
    /// `level + 1`); one line refines the other by at most one point per
    /// coarse segment. Each integer vertical crosses one diagonal.
    fn stripe(&mut self, level: i32, low: &[u64], high: &[u64]) {
        let up_fine = high.len() >= low.len();
        let (coarse, fine) = if up_fine { (low, high) } else { (high, low) };
        let lo = |b| Point { b, level };
        let hi = |b| Point { b, level: level + 1 };
        for w in coarse.windows(2) {
            let (a, b) = (w[0], w[1]);
            let inner: Vec<u64> = fine.iter().copied().filter(|&m| a < m && m < b).collect();
            assert!(inner.len() <= 1, "refinement splits a segment more than once");
            match (inner.first(), up_fine) {
                (None, _) => {
                    self.triangles.push([lo(a), hi(a), hi(b)]);
                    self.triangles.push([lo(a), hi(b), lo(b)]);
                }
                (Some(&m), true) => {
                    self.triangles.push([lo(a), hi(a), hi(m)]);
                    self.triangles.push([lo(a), hi(m), lo(b)]);
                    self.triangles.push([lo(b), hi(m), hi(b)]);
                }
                (Some(&m), false) => {
                    self.triangles.push([lo(a), hi(a), lo(m)]);
                    self.triangles.push([lo(m), hi(a), hi(b)]);
                    self.triangles.push([lo(m), hi(b), lo(b)]);
                }
            }
        }
    }
}

fn segment_key(p: Point, q: Point) -> (Point, Point) {
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

fn runs_forward(p: Point, q: Point) -> bool {
    if p.b != q.b {
        p.b < q.b
    } else {
        p.level < q.level
    }
}

/// Builds the surface and curve for an exchange, checks gluing and normal
/// coordinates, and confirms that `d` crossings upward from every central
/// crossing `i` reach central crossing `T(i)`.
pub fn build_surface(t: &Plb) -> Result<IetSurface, IetError> {
    if let Some(piece) = t.pieces().iter().position(|p| p.mult != BigInt::from(1)) {
        return Err(IetError::NotExchange { piece });
    }
    let n = t
        .size()
        .to_u64()
        .filter(|&n| n <= MAX_IET_SIZE)
        .ok_or_else(|| IetError::TooLarge {
            size: t.size().clone(),
            max: MAX_IET_SIZE,
        })?;
    let pieces: Vec<(u64, u64, u64)> = t
        .pieces()
        .iter()
        .map(|p| {
            let lo = p.lo.to_u64().expect("fits");
            let hi = p.hi.to_u64().expect("fits");
            let img = (&p.lo + &p.off).to_u64().expect("image in range");
            (lo, hi, img)
        })
        .collect();
    let s = stripe_count(pieces.len());
    let top: Vec<u64> = pieces.iter().map(|p| p.0).chain([n]).collect();
    let mut bottom: Vec<u64> = pieces.iter().map(|p| p.2).chain([n]).collect();
    bottom.sort_unstable();

    let up_lines = ladder(top, s);
    let down_lines = ladder(bottom, s);
    let si = s as i32;
    let mut builder = Builder { triangles: Vec::new() };
    for j in 0..s as usize {
        builder.stripe(j as i32, &up_lines[j], &up_lines[j + 1]);
        builder.stripe(-(j as i32) - 1, &down_lines[j + 1], &down_lines[j]);
    }

    // group triangle sides by geometric segment, then glue boundary copies
    let mut segments: BTreeMap<(Point, Point), Vec<(usize, usize)>> = BTreeMap::new();
    for (ti, tri) in builder.triangles.iter().enumerate() {
        for k in 0..3 {
            segments
                .entry(segment_key(tri[k], tri[(k + 1) % 3]))
                .or_default()
                .push((ti, k));
        }
    }
    let mut glue: Vec<((Point, Point), (Point, Point))> = Vec::new();
    for &(lo, hi, img) in &pieces {
        let top = segment_key(Point { b: lo, level: si }, Point { b: hi, level: si });
        let len = hi - lo;
        let bot = segment_key(Point { b: img, level: -si }, Point { b: img + len, level: -si });
        glue.push((top, bot));
    }
    for level in -si..si {
        let left = segment_key(Point { b: 0, level }, Point { b: 0, level: level + 1 });
        let right = segment_key(Point { b: n, level }, Point { b: n, level: level + 1 });
        glue.push((left, right));
    }
    let mut groups: Vec<Vec<(Point, Point)>> = Vec::new();
    let mut glued: BTreeSet<(Point, Point)> = BTreeSet::new();
    for (a, b) in glue {
        for key in [a, b] {
            if !segments.contains_key(&key) || !glued.insert(key) {
                return Err(IetError::Malformed(format!("boundary segment {key:?} missing or glued twice")));
            }
        }
        groups.push(vec![a, b]);
    }
    for key in segments.keys() {
        if !glued.contains(key) {
            groups.push(vec![*key]);
        }
    }

    let mut triangles: Vec<Triangle> = builder
        .triangles
        .iter()
        .map(|&corners| Triangle {
            corners,
            edges: [usize::MAX; 3],
            forward: [0, 1, 2].map(|k| runs_forward(corners[k], corners[(k + 1) % 3])),
        })
        .collect();
    let mut edges = Vec::with_capacity(groups.len());
    let mut coords = Vec::with_capacity(groups.len());
    let mut central = usize::MAX;
    for (e, group) in groups.iter().enumerate() {
        let sides: Vec<(usize, usize)> = group.iter().flat_map(|k| segments[k].iter().copied()).collect();
        if sides.len() != 2 {
            return Err(IetError::Malformed(format!("edge {group:?} has {} sides", sides.len())));
        }
        let lengths: Vec<u64> = group.iter().map(|(p, q)| p.b.abs_diff(q.b)).collect();
        if lengths.iter().any(|&l| l != lengths[0]) {
            return Err(IetError::Malformed(format!("glued segments {group:?} differ in length")));
        }
        for &(t, k) in &sides {
            triangles[t].edges[k] = e;
        }
        let above = |(t, k): (usize, usize)| {
            let c = builder.triangles[t];
            let third = c[(k + 2) % 3].level;
            2 * third > c[k].level + c[(k + 1) % 3].level
        };
        let up = if above(sides[0]) { 0 } else { 1 };
        edges.push(Edge {
            sides: [sides[0], sides[1]],
            up,
        });
        coords.push(lengths[0]);
        if group.len() == 1 && group[0] == (Point { b: 0, level: 0 }, Point { b: n, level: 0 }) {
            central = e;
        }
    }
    let surface = TriangulatedSurface { triangles, edges };
    surface.check_gluing()?;
    let corners = validate_normal_coords(&surface, &coords)?;
    let su = IetSurface {
        surface,
        coords,
        corners,
        central,
        stripes: s,
        step: 4 * s as u64,
        size: n,
    };
    su.check_step(t)?;
    Ok(su)
}

impl IetSurface {
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn triangle_count(&self) -> usize {
        self.surface.triangles.len()
    }

    pub fn corner_counts(&self) -> &[[u64; 3]] {
        &self.corners
    }

    pub fn central_crossing(&self, i: u64) -> Crossing {
        Crossing {
            edge: self.central,
            coord: i,
        }
    }

    fn local_to_coord(&self, t: usize, k: usize, j: u64) -> Crossing {
        let tri = &self.surface.triangles[t];
        let e = tri.edges[k];
        let coord = if tri.forward[k] { j } else { self.coords[e] - 1 - j };
        Crossing { edge: e, coord }
    }

    fn coord_to_local(&self, t: usize, k: usize, c: Crossing) -> u64 {
        let tri = &self.surface.triangles[t];
        if tri.forward[k] {
            c.coord
        } else {
            self.coords[c.edge] - 1 - c.coord
        }
    }

    /// Crosses one triangle: enter at `c` through the side chosen by `dir`,
    /// pair crossings nearest each corner, and leave through the other side.
    pub fn trace_step(&self, c: Crossing, dir: Direction) -> Result<(Crossing, Direction), IetError> {
        let count = *self.coords.get(c.edge).ok_or(IetError::BadCrossing {
            edge: c.edge,
            coord: c.coord,
            count: 0,
        })?;
        if c.coord >= count {
            return Err(IetError::BadCrossing {
                edge: c.edge,
                coord: c.coord,
                count,
            });
        }
        let edge = &self.surface.edges[c.edge];
        let side = match dir {
            Direction::Up => edge.up,
            Direction::Down => 1 - edge.up,
        };
        let (t, k) = edge.sides[side];
        let tri = &self.surface.triangles[t];
        let n = tri.edges.map(|e| self.coords[e]);
        let j = self.coord_to_local(t, k, c);
        let (exit, local) = if j < self.corners[t][k] {
            let ca = (k + 2) % 3;
            (ca, n[ca] - 1 - j)
        } else {
            ((k + 1) % 3, n[k] - 1 - j)
        };
        let next = self.local_to_coord(t, exit, local);
        let (t2, k2) = self.surface.partner(t, exit);
        let e2 = &self.surface.edges[next.edge];
        let dir2 = if e2.sides[e2.up] == (t2, k2) {
            Direction::Up
        } else {
            Direction::Down
        };
        Ok((next, dir2))
    }

    fn check_step(&self, t: &Plb) -> Result<(), IetError> {
        for i in 0..self.size {
            let mut c = self.central_crossing(i);
            let mut dir = Direction::Up;
            for step in 1..=self.step {
                (c, dir) = self.trace_step(c, dir)?;
                if (c.edge == self.central) != (step == self.step) || dir != Direction::Up {
                    return Err(IetError::Malformed(format!(
                        "curve from central crossing {i} misses the central edge after {step} steps"
                    )));
                }
            }
            let expect = t.iterate_u64(1, i);
            if c.coord != expect {
                return Err(IetError::Malformed(format!(
                    "curve sends {i} to {}, exchange sends it to {expect}",
                    c.coord
                )));
            }
        }
        Ok(())
    }

    /// Follows the curve upward from `start` until it closes.
    pub fn arc_of(&self, start: Crossing) -> Result<NormalArc, IetError> {
        let mut crossings = vec![start];
        let (mut c, mut dir) = self.trace_step(start, Direction::Up)?;
        while c != start {
            crossings.push(c);
            (c, dir) = self.trace_step(c, dir)?;
        }
        let index = crossings.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Ok(NormalArc { crossings, index })
    }

    /// Diagnostic listing of triangles, gluings and coordinates.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let pt = |p: Point| format!("({}, {})", p.b, p.level);
        out.push_str(&format!(
            "surface N={} stripes={} step={} triangles={} edges={} central={}\n",
            self.size,
            self.stripes,
            self.step,
            self.surface.triangles.len(),
            self.surface.edges.len(),
            self.central
        ));
        for (i, t) in self.surface.triangles.iter().enumerate() {
            out.push_str(&format!(
                "triangle {i} {} {} {} edges {:?} corners {:?}\n",
                pt(t.corners[0]),
                pt(t.corners[1]),
                pt(t.corners[2]),
                t.edges,
                self.corners[i]
            ));
        }
        for (e, edge) in self.surface.edges.iter().enumerate() {
            out.push_str(&format!(
                "edge {e} sides {:?} {:?} coord {}\n",
                edge.sides[0], edge.sides[1], self.coords[e]
            ));
        }
        out
    }
}

/// One closed component of the curve, starting at the crossing it was
/// traced from.
#[derive(Debug, Clone)]
pub struct NormalArc {
    crossings: Vec<Crossing>,
    index: HashMap<Crossing, usize>,
}

impl NormalArc {
    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Arc coordinate to crossing.
    pub fn at(&self, pos: usize) -> Crossing {
        self.crossings[pos % self.crossings.len()]
    }

    /// Crossing to arc coordinate, if it lies on this arc.
    pub fn position(&self, c: Crossing) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }
}

/// `T^n(i)` by advancing `n*d` crossings (mod the arc length) along the arc
/// through central crossing `i`.
pub fn iet_orbit_solve(t: &Plb, i: u64, n: &BigUint) -> Result<u64, IetError> {
    let su = build_surface(t)?;
    su.solve(i, n)
}

impl IetSurface {
    pub fn solve(&self, i: u64, n: &BigUint) -> Result<u64, IetError> {
        if i >= self.size {
            return Err(IetError::OutOfRange { i, size: self.size });
        }
        let arc = self.arc_of(self.central_crossing(i))?;
        let pos = (n * self.step) % BigUint::from(arc.len());
        let c = arc.at(pos.to_usize().expect("below arc length"));
        debug_assert_eq!(c.edge, self.central);
        Ok(c.coord)
    }
}

/// Reference answer: find the orbit period by stepping, then step `n mod period`.
pub fn cycle_oracle(t: &Plb, i: u64, n: &BigUint) -> u64 {
    let mut period = 1u64;
    let mut x = t.iterate_u64(1, i);
    while x != i {
        x = t.iterate_u64(1, x);
        period += 1;
    }
    let r = (n % period).to_u64().expect("below period");
    t.iterate_u64(r, i)
}

/// Distinct cyclic gaps between the sorted first `n` iterates of
/// `x -> (x + c) mod big_n` from 0.
pub fn three_gap_check(big_n: u64, c: u64, n: u64) -> BTreeSet<u64> {
    let mut pts: Vec<u64> = (0..n.min(big_n)).map(|j| (j as u128 * c as u128 % big_n as u128) as u64).collect();
    pts.sort_unstable();
    pts.dedup();
    let mut gaps = BTreeSet::new();
    if pts.is_empty() {
        return gaps;
    }
    for w in pts.windows(2) {
        gaps.insert(w[1] - w[0]);
    }
    gaps.insert(big_n - pts[pts.len() - 1] + pts[0]);
    gaps
}

/// Largest number of distinct gaps seen over every prefix length `1..=big_n`,
/// maintained incrementally.
pub fn max_distinct_gaps(big_n: u64, c: u64) -> usize {
    let mut pts: BTreeSet<u64> = BTreeSet::new();
    let mut gaps: BTreeMap<u64, usize> = BTreeMap::new();
    let mut worst = 0;
    let add = |gaps: &mut BTreeMap<u64, usize>, g: u64| *gaps.entry(g).or_insert(0) += 1;
    let remove = |gaps: &mut BTreeMap<u64, usize>, g: u64| {
        let e = gaps.get_mut(&g).expect("gap present");
        *e -= 1;
        if *e == 0 {
            gaps.remove(&g);
        }
    };
    for j in 0..big_n {
        let x = (j as u128 * c as u128 % big_n as u128) as u64;
        if pts.is_empty() {
            pts.insert(x);
            add(&mut gaps, big_n);
        } else if pts.insert(x) {
            let prev = pts.range(..x).next_back().or_else(|| pts.iter().next_back()).copied().expect("other points");
            let next = pts.range(x + 1..).next().or_else(|| pts.iter().next()).copied().expect("other points");
            let dist = |a: u64, b: u64| if b > a { b - a } else { b + big_n - a };
            let old = if prev == next { big_n } else { dist(prev, next) };
            remove(&mut gaps, old);
            add(&mut gaps, dist(prev, x));
            add(&mut gaps, dist(x, next));
        }
        worst = worst.max(gaps.len());
    }
    worst
}

impl fmt::Display for Crossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "edge {} #{}", self.edge, self.coord)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng;
    use rand::seq::SliceRandom;
    use rand::Rng;

    /// Random exchange: cut `[0, n)` into `k` intervals and permute them.
    fn random_iet<R: Rng>(r: &mut R, n: u64, k: usize) -> Plb {
        let mut cuts: Vec<u64> = (0..k.saturating_sub(1)).map(|_| r.gen_range(1..n)).collect();
        cuts.push(0);
        cuts.push(n);
        cuts.sort_unstable();
        cuts.dedup();
        let ivs: Vec<(u64, u64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
        let mut order: Vec<usize> = (0..ivs.len()).collect();
        order.shuffle(r);
        let mut at = 0u64;
        let mut dest = vec![0u64; ivs.len()];
        for &o in &order {
            dest[o] = at;
            at += ivs[o].1 - ivs[o].0;
        }
        let pieces: Vec<(u64, u64, i64)> = ivs
            .iter()
            .zip(&dest)
            .map(|(&(lo, hi), &d)| (lo, hi, d as i64 - lo as i64))
            .collect();
        interval_exchange(n, &pieces).unwrap()
    }

    #[test]
    fn four_interval_pointwise() {
        let t = four_interval_example();
        for (x, y) in [(0, 11), (4, 0), (6, 10), (7, 2), (14, 9), (3, 14)] {
            assert_eq!(t.iterate_u64(1, x), y);
        }
        let su = build_surface(&t).unwrap();
        assert_eq!(su.stripes, 2);
        assert_eq!(su.solve(6, &BigUint::from(1u32)).unwrap(), 10);
        assert_eq!(su.solve(0, &BigUint::from(1u32)).unwrap(), 11);
    }

    #[test]
    fn identity_surface() {
        let t = Plb::identity(4);
        let su = build_surface(&t).unwrap();
        assert_eq!(su.coords[su.central], 4);
        for i in 0..4 {
            let arc = su.arc_of(su.central_crossing(i)).unwrap();
            assert_eq!(arc.len() as u64, su.step);
            assert_eq!(su.solve(i, &BigUint::from(9u32)).unwrap(), i);
        }
        let one = build_surface(&Plb::identity(1)).unwrap();
        assert!(one.coords.iter().all(|&c| c <= 1));
    }

    #[test]
    fn rotation_arcs() {
        let su = build_surface(&rotation(16, 5)).unwrap();
        let arc = su.arc_of(su.central_crossing(0)).unwrap();
        assert_eq!(arc.len() as u64, 16 * su.step);
        let su = build_surface(&rotation(16, 4)).unwrap();
        let arc = su.arc_of(su.central_crossing(1)).unwrap();
        assert_eq!(arc.len() as u64, 4 * su.step);
        let central = arc.crossings().iter().filter(|c| c.edge == su.central).count();
        assert_eq!(central, 4);
    }

    #[test]
    fn normal_coordinate_checks() {
        assert_eq!(corner_counts([0, 0, 0]), Ok([0, 0, 0]));
        assert!(corner_counts([1, 1, 3]).unwrap_err().contains("triangle inequality"));
        assert!(corner_counts([1, 1, 1]).unwrap_err().contains("odd"));
        assert_eq!(corner_counts([2, 3, 5]), Ok([2, 0, 3]));
    }

    #[test]
    fn reverse_direction_undoes_forward() {
        let mut r = rng(3);
        let t = random_iet(&mut r, 300, 7);
        let su = build_surface(&t).unwrap();
        let start = su.central_crossing(123);
        let mut c = start;
        let mut dir = Direction::Up;
        for _ in 0..1000 {
            (c, dir) = su.trace_step(c, dir).unwrap();
        }
        assert_eq!(dir, Direction::Up);
        let mut back = Direction::Down;
        for _ in 0..1000 {
            (c, back) = su.trace_step(c, back).unwrap();
        }
        assert_eq!(c, start);
        assert!(su.trace_step(Crossing { edge: su.central, coord: 300 }, Direction::Up).is_err());
    }

    #[test]
    fn random_exchanges_match_iteration() {
        let mut r = rng(17);
        for _ in 0..30 {
            let n = r.gen_range(1..200);
            let k = r.gen_range(1..=10);
            let t = random_iet(&mut r, n, k);
            let su = build_surface(&t).unwrap();
            assert!(su.triangle_count() <= 6 * 2 * k.max(2));
            let steps = r.gen_range(0..500u64);
            for i in 0..n {
                assert_eq!(su.solve(i, &BigUint::from(steps)).unwrap(), t.iterate_u64(steps, i));
            }
        }
    }

    #[test]
    fn huge_iteration_counts() {
        let mut r = rng(18);
        let t = random_iet(&mut r, 200, 5);
        let su = build_surface(&t).unwrap();
        let n = BigUint::from(10u32).pow(18);
        for i in [0, 17, 199] {
            assert_eq!(su.solve(i, &n).unwrap(), cycle_oracle(&t, i, &n));
        }
    }

    #[test]
    fn rejects_non_exchange() {
        assert!(matches!(
            build_surface(&crate::plb::riffle(8)),
            Err(IetError::NotExchange { .. })
        ));
    }

    #[test]
    fn three_gap_examples() {
        assert!(three_gap_check(16, 5, 6).len() <= 3);
        assert_eq!(three_gap_check(16, 5, 16), BTreeSet::from([1]));
        assert_eq!(three_gap_check(12, 4, 3), BTreeSet::from([4]));
        for big_n in 1..=40 {
            for c in 0..big_n {
                let inc = max_distinct_gaps(big_n, c);
                let direct = (1..=big_n).map(|n| three_gap_check(big_n, c, n).len()).max().unwrap();
                assert_eq!(inc, direct);
                assert!(inc <= 3);
            }
        }
    }
}

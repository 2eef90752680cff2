//! Connected-leaf problems on implicit graphs of maximum degree two, the
//! leaf-to-bijection compiler, and the lollipop state space of a cubic graph.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::bijection::Bijection;
use crate::bits::bits_for;
use crate::graphs::{cycle_has_edge, CubicGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeafError {
    #[error("neighbour function failed at vertex {vertex:#x}: {reason}")]
    Failure { vertex: u64, reason: String },
    #[error("vertex {vertex:#x} has {degree} neighbours, not exactly one")]
    NotALeaf { vertex: u64, degree: usize },
    #[error("neighbour function is not symmetric or not bivalent near vertex {0:#x}")]
    Malformed(u64),
    #[error("walk exceeded {0} steps without reaching a leaf")]
    NoLeaf(u64),
    #[error("{0}")]
    Precondition(String),
}

/// A graph of maximum degree two given by its neighbour function on `width`-bit ids.
pub trait ImplicitFamily: Send + Sync {
    fn width(&self) -> usize;
    fn neighbors(&self, v: u64) -> Result<Vec<u64>, LeafError>;
}

/// An explicit adjacency table; vertices not listed are isolated.
#[derive(Debug, Clone, Default)]
pub struct AdjacencyFamily {
    width: usize,
    adj: HashMap<u64, Vec<u64>>,
}

impl AdjacencyFamily {
    pub fn new(width: usize) -> Self {
        AdjacencyFamily {
            width,
            adj: HashMap::new(),
        }
    }

    /// A path visiting `order` in sequence.
    pub fn path(width: usize, order: &[u64]) -> Self {
        let mut fam = AdjacencyFamily::new(width);
        for w in order.windows(2) {
            fam.add_edge(w[0], w[1]);
        }
        fam
    }

    pub fn add_edge(&mut self, u: u64, v: u64) {
        assert!(u != v);
        self.adj.entry(u).or_default().push(v);
        self.adj.entry(v).or_default().push(u);
    }
}

impl ImplicitFamily for AdjacencyFamily {
    fn width(&self) -> usize {
        self.width
    }

    fn neighbors(&self, v: u64) -> Result<Vec<u64>, LeafError> {
        let out = self.adj.get(&v).cloned().unwrap_or_default();
        if out.len() > 2 {
            return Err(LeafError::Malformed(v));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeafWalk {
    pub leaf: u64,
    pub steps: u64,
}

/// Walks from leaf `v` along its component until the other leaf.
pub fn solve_leaf_walk(family: &dyn ImplicitFamily, v: u64) -> Result<LeafWalk, LeafError> {
    let start = family.neighbors(v)?;
    if start.len() != 1 {
        return Err(LeafError::NotALeaf {
            vertex: v,
            degree: start.len(),
        });
    }
    let limit = if family.width() >= 64 {
        u64::MAX
    } else {
        1u64 << family.width()
    };
    let (mut prev, mut cur, mut steps) = (v, start[0], 1u64);
    loop {
        let nb = family.neighbors(cur)?;
        if !nb.contains(&prev) {
            return Err(LeafError::Malformed(cur));
        }
        match nb.len() {
            1 => return Ok(LeafWalk { leaf: cur, steps }),
            2 => {
                let next = if nb[0] == prev { nb[1] } else { nb[0] };
                (prev, cur) = (cur, next);
                steps += 1;
                if steps >= limit {
                    return Err(LeafError::NoLeaf(steps));
                }
            }
            _ => return Err(LeafError::Malformed(cur)),
        }
    }
}

/// Compiles a connected-leaf instance into a bijection on triples
/// `(n, v, w)` of `k`-bit fields, packed from the low bits up.
///
/// Invalid or non-adjacent `(v, w)` are fixed. With `n = 0` the pair steps
/// along the path to `(w, u)`, `u` being `w`'s other neighbour, or, when `w`
/// is a leaf, turns into `(1, w, v)`. With `n > 0` and `v` a leaf the counter
/// advances modulo `2^k`; otherwise the state is fixed. Starting from
/// `(0, v, w)` with `v` a leaf, the `v` field after `2^k` steps is the other
/// leaf of the component: the walk takes `L < 2^k` steps and the counter
/// then waits out the rest.
pub fn leaf_to_bijection(family: Arc<dyn ImplicitFamily>, k: usize) -> Bijection {
    assert!(k >= 1 && 3 * k <= 64, "triples must fit in 64 bits");
    assert_eq!(family.width(), k);
    let m = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let top = m;
    let unpack = move |s: u64| (s & m, s >> k & m, s >> (2 * k) & m);
    let pack = move |n: u64, v: u64, w: u64| n | v << k | w << (2 * k);

    // Neighbour lists of v and w, provided v ~ w in a well-formed way.
    let fam = family.clone();
    let valid = move |v: u64, w: u64| -> Option<(Vec<u64>, Vec<u64>)> {
        let nv = fam.neighbors(v).ok()?;
        let nw = fam.neighbors(w).ok()?;
        (nv.contains(&w) && nw.contains(&v)).then_some((nv, nw))
    };
    let valid_b = valid.clone();

    let fwd = move |s: u64| {
        let (n, v, w) = unpack(s);
        let Some((nv, nw)) = valid(v, w) else {
            return s;
        };
        if n > 0 {
            return if nv.len() == 1 { pack((n + 1) & m, v, w) } else { s };
        }
        match nw.len() {
            1 => pack(1, w, v),
            2 => pack(0, w, if nw[0] == v { nw[1] } else { nw[0] }),
            _ => s,
        }
    };
    let bwd = move |s: u64| {
        let (n, v, w) = unpack(s);
        let Some((nv, _)) = valid_b(v, w) else {
            return s;
        };
        let leaf = nv.len() == 1;
        match n {
            0 if leaf => pack(top, v, w),
            0 if nv.len() == 2 => pack(0, if nv[0] == w { nv[1] } else { nv[0] }, v),
            1 if leaf => pack(0, w, v),
            n if n > 1 && leaf => pack(n - 1, v, w),
            _ => s,
        }
    };
    Bijection::from_words(3 * k, format!("leaf({k})"), fwd).with_backward_words(bwd)
}

/// Start triple `(0, v, w)` for [`leaf_to_bijection`].
pub fn leaf_start(k: usize, v: u64, w: u64) -> u64 {
    v << k | w << (2 * k)
}

/// The `v` field of a packed triple.
pub fn leaf_v(k: usize, state: u64) -> u64 {
    let m = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    state >> k & m
}

/// Hamiltonian paths that start with a fixed oriented edge `(u0, u1)`,
/// encoded as vertex indices of `bits_for(n)` bits each, first vertex lowest.
#[derive(Debug, Clone)]
pub struct LollipopFamily {
    graph: CubicGraph,
    fixed: (usize, usize),
    b: usize,
}

impl LollipopFamily {
    pub fn new(graph: CubicGraph, fixed: (usize, usize)) -> Result<Self, LeafError> {
        if !graph.has_edge(fixed.0, fixed.1) {
            return Err(LeafError::Precondition(format!(
                "({}, {}) is not an edge",
                fixed.0, fixed.1
            )));
        }
        let n = graph.vertex_count();
        let b = bits_for(n as u64).max(1);
        if n * b > 64 {
            return Err(LeafError::Precondition(format!(
                "{n}-vertex paths need {} bits, more than 64",
                n * b
            )));
        }
        Ok(LollipopFamily { graph, fixed, b })
    }

    pub fn graph(&self) -> &CubicGraph {
        &self.graph
    }

    pub fn fixed(&self) -> (usize, usize) {
        self.fixed
    }

    pub fn encode(&self, path: &[usize]) -> u64 {
        path.iter()
            .enumerate()
            .fold(0, |acc, (i, &v)| acc | (v as u64) << (i * self.b))
    }

    /// The path encoded by `s`, if it is a valid state.
    pub fn decode(&self, s: u64) -> Option<Vec<usize>> {
        let n = self.graph.vertex_count();
        let mask = (1u64 << self.b) - 1;
        let path: Vec<usize> = (0..n).map(|i| (s >> (i * self.b) & mask) as usize).collect();
        self.is_state(&path).then_some(path)
    }

    pub fn is_state(&self, path: &[usize]) -> bool {
        let n = self.graph.vertex_count();
        if path.len() != n || path[0] != self.fixed.0 || path[1] != self.fixed.1 {
            return false;
        }
        let mut seen = vec![false; n];
        for &v in path {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        path.windows(2).all(|w| self.graph.has_edge(w[0], w[1]))
    }

    /// Neighbouring states of a valid path, ordered by the far-end neighbour used.
    pub fn path_neighbors(&self, path: &[usize]) -> Vec<Vec<usize>> {
        let n = path.len();
        let end = path[n - 1];
        let mut pos = vec![0usize; n];
        for (i, &v) in path.iter().enumerate() {
            pos[v] = i;
        }
        let mut out = Vec::with_capacity(2);
        for x in self.graph.neighbors(end) {
            if x == path[n - 2] || x == path[0] {
                continue;
            }
            let j = pos[x];
            let mut next = path[..=j].to_vec();
            next.extend(path[j + 1..].iter().rev());
            out.push(next);
        }
        out
    }

    /// Whether the path closes into a Hamiltonian cycle.
    pub fn closes(&self, path: &[usize]) -> bool {
        self.graph.has_edge(path[path.len() - 1], path[0])
    }
}

impl ImplicitFamily for LollipopFamily {
    fn width(&self) -> usize {
        self.graph.vertex_count() * self.b
    }

    fn neighbors(&self, s: u64) -> Result<Vec<u64>, LeafError> {
        Ok(match self.decode(s) {
            Some(path) => self
                .path_neighbors(&path)
                .iter()
                .map(|p| self.encode(p))
                .collect(),
            None => Vec::new(),
        })
    }
}

/// Neighbouring lollipop states of `path` in `g` with the fixed edge given by
/// the path's first two vertices.
pub fn lollipop_neighbors(g: &CubicGraph, path: &[usize]) -> Result<Vec<Vec<usize>>, LeafError> {
    if path.len() < 2 {
        return Err(LeafError::Precondition("path is too short".into()));
    }
    let fam = LollipopFamily::new(g.clone(), (path[0], path[1]))?;
    if !fam.is_state(path) {
        return Err(LeafError::Precondition("not a Hamiltonian path".into()));
    }
    Ok(fam.path_neighbors(path))
}

/// The Hamiltonian path obtained by deleting the cycle edge at `u0` other than `(u0, u1)`.
fn cycle_to_path(cycle: &[usize], u0: usize, u1: usize) -> Vec<usize> {
    let n = cycle.len();
    let i = cycle.iter().position(|&v| v == u0).expect("u0 on cycle");
    let forward = cycle[(i + 1) % n] == u1;
    (0..n)
        .map(|t| {
            if forward {
                cycle[(i + t) % n]
            } else {
                cycle[(i + n - t) % n]
            }
        })
        .collect()
}

/// Thomason's walk: from a Hamiltonian cycle through `fixed_edge`, traversed
/// starting at `fixed_edge.0` when `forward` (else at `fixed_edge.1`), finds a
/// different Hamiltonian cycle through the same edge.
pub fn second_hamiltonian(
    g: &CubicGraph,
    cycle: &[usize],
    fixed_edge: (usize, usize),
    forward: bool,
) -> Result<Vec<usize>, LeafError> {
    if !g.is_hamiltonian_cycle(cycle) {
        return Err(LeafError::Precondition("input is not a Hamiltonian cycle".into()));
    }
    if !cycle_has_edge(cycle, fixed_edge.0, fixed_edge.1) {
        return Err(LeafError::Precondition("fixed edge is not on the cycle".into()));
    }
    let (u0, u1) = if forward {
        fixed_edge
    } else {
        (fixed_edge.1, fixed_edge.0)
    };
    let fam = LollipopFamily::new(g.clone(), (u0, u1))?;
    let start = fam.encode(&cycle_to_path(cycle, u0, u1));
    let walk = solve_leaf_walk(&fam, start)?;
    Ok(fam.decode(walk.leaf).expect("walk stays on valid states"))
}

/// Maximum vertex count for [`count_ham_cycles_through_edge`].
pub const MAX_COUNT_VERTICES: usize = 14;

/// Number of Hamiltonian cycles using edge `e`, by exhaustive search.
pub fn count_ham_cycles_through_edge(g: &CubicGraph, e: (usize, usize)) -> Result<u64, LeafError> {
    let n = g.vertex_count();
    if n > MAX_COUNT_VERTICES {
        return Err(LeafError::Precondition(format!(
            "{n} vertices exceeds the limit of {MAX_COUNT_VERTICES}"
        )));
    }
    if !g.has_edge(e.0, e.1) {
        return Err(LeafError::Precondition(format!("({}, {}) is not an edge", e.0, e.1)));
    }
    Ok(hamiltonian_paths(g, e, &mut |_| {}))
}

/// Every Hamiltonian cycle through `e`, each listed once, starting `e.0, e.1`.
pub fn ham_cycles_through_edge(g: &CubicGraph, e: (usize, usize)) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    hamiltonian_paths(g, e, &mut |p| out.push(p.to_vec()));
    out
}

fn hamiltonian_paths(g: &CubicGraph, e: (usize, usize), visit: &mut dyn FnMut(&[usize])) -> u64 {
    fn go(
        g: &CubicGraph,
        path: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]),
    ) -> u64 {
        let end = *path.last().expect("non-empty");
        if path.len() == used.len() {
            if g.has_edge(end, path[0]) {
                visit(path);
                return 1;
            }
            return 0;
        }
        let mut total = 0;
        for x in g.neighbors(end) {
            if !used[x] {
                used[x] = true;
                path.push(x);
                total += go(g, path, used, visit);
                path.pop();
                used[x] = false;
            }
        }
        total
    }
    let mut used = vec![false; g.vertex_count()];
    used[e.0] = true;
    used[e.1] = true;
    go(g, &mut vec![e.0, e.1], &mut used, visit)
}

//! Explicit cubic graphs and a small named catalogue.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint outside the vertex set")]
    BadVertex(usize, usize),
    #[error("edge ({0}, {1}) is a loop or repeats an earlier edge")]
    NotSimple(usize, usize),
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotCubic { vertex: usize, degree: usize },
    #[error("graph is disconnected")]
    Disconnected,
}

/// A simple, connected, 3-regular graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct CubicGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<[usize; 3]>,
}

impl fmt::Debug for CubicGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubicGraph({} vertices, edges {:?})", self.n, self.edges)
    }
}

impl CubicGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(GraphError::BadVertex(u, v));
            }
            if u == v || !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::NotSimple(u, v));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        let mut adj = Vec::with_capacity(n);
        for (vertex, mut l) in lists.into_iter().enumerate() {
            if l.len() != 3 {
                return Err(GraphError::NotCubic {
                    vertex,
                    degree: l.len(),
                });
            }
            l.sort_unstable();
            adj.push([l[0], l[1], l[2]]);
        }
        let g = CubicGraph { n, edges, adj };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !std::mem::replace(&mut seen[v], true) {
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The three neighbours of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> [usize; 3] {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    /// True if `cycle` lists every vertex once and consecutive entries
    /// (cyclically) are adjacent.
    pub fn is_hamiltonian_cycle(&self, cycle: &[usize]) -> bool {
        if cycle.len() != self.n || self.n < 3 {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &v in cycle {
            if v >= self.n || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        (0..self.n).all(|i| self.has_edge(cycle[i], cycle[(i + 1) % self.n]))
    }
}

/// Whether the cyclic vertex list uses edge `{u, v}`.
pub fn cycle_has_edge(cycle: &[usize], u: usize, v: usize) -> bool {
    let n = cycle.len();
    (0..n).any(|i| {
        let (a, b) = (cycle[i], cycle[(i + 1) % n]);
        (a, b) == (u, v) || (a, b) == (v, u)
    })
}

/// Graph from LCF notation: a Hamiltonian cycle `0..n` plus chords `i ~ i + jumps[i mod len]`.
pub fn lcf(n: usize, jumps: &[i64]) -> CubicGraph {
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..n {
        let j = (i + 1) % n;
        edges.insert((i.min(j), i.max(j)));
        let t = (i as i64 + jumps[i % jumps.len()]).rem_euclid(n as i64) as usize;
        edges.insert((i.min(t), i.max(t)));
    }
    CubicGraph::new(n, edges.into_iter().collect()).expect("valid LCF code")
}

/// Generalized Petersen graph `GP(n, k)`.
pub fn generalized_petersen(n: usize, k: usize) -> CubicGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((i, n + i));
        edges.push((n + i, n + (i + k) % n));
    }
    let uniq: BTreeSet<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    CubicGraph::new(2 * n, uniq.into_iter().collect()).expect("valid generalized Petersen parameters")
}

pub fn k4() -> CubicGraph {
    CubicGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

pub fn k33() -> CubicGraph {
    let edges = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    CubicGraph::new(6, edges).unwrap()
}

/// `C_n x K_2`.
pub fn prism(n: usize) -> CubicGraph {
    generalized_petersen(n, 1)
}

/// Cycle on `2n` vertices with the `n` long diagonals.
pub fn mobius_ladder(n: usize) -> CubicGraph {
    let m = 2 * n;
    let mut edges: Vec<(usize, usize)> = (0..m).map(|i| (i, (i + 1) % m)).collect();
    edges.extend((0..n).map(|i| (i, i + n)));
    CubicGraph::new(m, edges).unwrap()
}

pub fn petersen() -> CubicGraph {
    generalized_petersen(5, 2)
}

/// Petersen graph with one vertex blown up into a triangle.
pub fn tietze() -> CubicGraph {
    let mut edges: Vec<(usize, usize)> = petersen()
        .edges()
        .iter()
        .copied()
        .filter(|&(a, b)| a != 0 && b != 0)
        .collect();
    edges.extend([(0, 1), (10, 4), (11, 5), (0, 10), (10, 11), (0, 11)]);
    CubicGraph::new(12, edges).unwrap()
}

pub fn franklin() -> CubicGraph {
    lcf(12, &[5, -5])
}

pub fn frucht() -> CubicGraph {
    lcf(12, &[-5, -2, -4, 2, 5, -2, 2, 5, -2, -5, 4, 2])
}

pub fn truncated_tetrahedron() -> CubicGraph {
    lcf(12, &[2, 6, -2])
}

pub fn durer() -> CubicGraph {
    generalized_petersen(6, 2)
}

/// Uniform-pairing random cubic graph on `n` (even, at least 4) vertices,
/// retried until simple and connected.
pub fn random_cubic<R: Rng>(rng: &mut R, n: usize) -> CubicGraph {
    assert!(n >= 4 && n.is_multiple_of(2));
    loop {
        let mut points: Vec<usize> = (0..3 * n).map(|p| p / 3).collect();
        points.shuffle(rng);
        let edges: Vec<(usize, usize)> = points.chunks(2).map(|c| (c[0], c[1])).collect();
        if let Ok(g) = CubicGraph::new(n, edges) {
            return g;
        }
    }
}

/// Named graphs used by the test corpus, all with at most 12 vertices.
pub fn catalogue() -> Vec<(&'static str, CubicGraph)> {
    vec![
        ("k4", k4()),
        ("k33", k33()),
        ("prism3", prism(3)),
        ("cube", prism(4)),
        ("prism5", prism(5)),
        ("prism6", prism(6)),
        ("mobius8", mobius_ladder(4)),
        ("mobius10", mobius_ladder(5)),
        ("mobius12", mobius_ladder(6)),
        ("petersen", petersen()),
        ("franklin", franklin()),
        ("tietze", tietze()),
        ("frucht", frucht()),
        ("truncated-tetrahedron", truncated_tetrahedron()),
        ("durer", durer()),
    ]
}

/// Catalogue plus `extra` seeded random cubic graphs on 4 to 12 vertices.
pub fn corpus(seed: u64, extra: usize) -> Vec<(String, CubicGraph)> {
    let mut rng = crate::random::rng(seed);
    let mut out: Vec<(String, CubicGraph)> = catalogue()
        .into_iter()
        .map(|(n, g)| (n.to_string(), g))
        .collect();
    for i in 0..extra {
        let n = 2 * rng.gen_range(2..=6);
        out.push((format!("random{i}-{n}"), random_cubic(&mut rng, n)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_sizes() {
        let sizes: Vec<(usize, usize)> = catalogue()
            .iter()
            .map(|(_, g)| (g.vertex_count(), g.edges().len()))
            .collect();
        for (n, m) in sizes {
            assert_eq!(2 * m, 3 * n);
            assert!(n <= 12);
        }
        assert_eq!(petersen().vertex_count(), 10);
        assert_eq!(durer().vertex_count(), 12);
    }

    #[test]
    fn rejects_non_cubic() {
        assert!(matches!(
            CubicGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]),
            Err(GraphError::NotCubic { .. })
        ));
        assert!(matches!(
            CubicGraph::new(4, vec![(0, 0)]),
            Err(GraphError::NotSimple(0, 0))
        ));
        let two_k4: Vec<(usize, usize)> = k4()
            .edges()
            .iter()
            .flat_map(|&(a, b)| [(a, b), (a + 4, b + 4)])
            .collect();
        assert_eq!(CubicGraph::new(8, two_k4), Err(GraphError::Disconnected));
    }

    #[test]
    fn random_graphs_are_cubic() {
        let mut r = crate::random::rng(11);
        for n in [4, 6, 8, 10, 12] {
            assert_eq!(random_cubic(&mut r, n).vertex_count(), n);
        }
    }

    #[test]
    fn hamiltonian_checker() {
        let g = k4();
        assert!(g.is_hamiltonian_cycle(&[0, 1, 2, 3]));
        assert!(!g.is_hamiltonian_cycle(&[0, 1, 2]));
        assert!(!g.is_hamiltonian_cycle(&[0, 1, 1, 3]));
        assert!(cycle_has_edge(&[0, 1, 2, 3], 3, 0));
        assert!(!cycle_has_edge(&[0, 1, 2, 3], 0, 2));
    }
}

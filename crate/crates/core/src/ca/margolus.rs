use std::fmt;

use super::CaError;

/// A reversible rule on 2x2 blocks of `s`-state cells.
///
/// A block is indexed `tl + s*tr + s^2*bl + s^3*br`; for two-state cells
/// that makes top-left bit 0 and bottom-right bit 3.
#[derive(Clone, PartialEq, Eq)]
pub struct MargolusRule {
    states: u8,
    forward: Vec<u32>,
    backward: Vec<u32>,
}

impl fmt::Debug for MargolusRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MargolusRule({} states, {:?})", self.states, self.forward)
    }
}

/// Exhaustive permutation test of a block table.
pub fn rule_is_bijective(states: u8, table: &[u32]) -> bool {
    let size = (states as usize).pow(4);
    if table.len() != size {
        return false;
    }
    let mut seen = vec![false; size];
    table
        .iter()
        .all(|&v| (v as usize) < size && !std::mem::replace(&mut seen[v as usize], true))
}

impl MargolusRule {
    pub fn from_table(states: u8, table: Vec<u32>) -> Result<Self, CaError> {
        if states < 2 || (states as u32).pow(4) > 1 << 24 {
            return Err(CaError::Rule(format!("unsupported state count {states}")));
        }
        if !rule_is_bijective(states, &table) {
            return Err(CaError::Rule("block map is not a permutation".into()));
        }
        let mut backward = vec![0u32; table.len()];
        for (i, &v) in table.iter().enumerate() {
            backward[v as usize] = i as u32;
        }
        Ok(MargolusRule {
            states,
            forward: table,
            backward,
        })
    }

    pub fn identity(states: u8) -> Self {
        let size = (states as u32).pow(4);
        Self::from_table(states, (0..size).collect()).expect("identity is bijective")
    }

    pub fn states(&self) -> u8 {
        self.states
    }

    pub fn table(&self) -> &[u32] {
        &self.forward
    }

    pub fn inverse(&self) -> MargolusRule {
        MargolusRule {
            states: self.states,
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    pub fn encode(&self, block: [u8; 4]) -> usize {
        let s = self.states as usize;
        block.iter().rev().fold(0, |acc, &v| acc * s + v as usize)
    }

    pub fn decode(&self, mut index: usize) -> [u8; 4] {
        let s = self.states as usize;
        let mut out = [0u8; 4];
        for v in &mut out {
            *v = (index % s) as u8;
            index /= s;
        }
        out
    }

    /// Image of a block given as `[tl, tr, bl, br]`.
    pub fn apply(&self, block: [u8; 4]) -> [u8; 4] {
        self.decode(self.forward[self.encode(block)] as usize)
    }

    pub fn apply_inverse(&self, block: [u8; 4]) -> [u8; 4] {
        self.decode(self.backward[self.encode(block)] as usize)
    }
}

/// Billiard-ball model: a lone live cell moves to the opposite corner, a
/// diagonal pair flips to the other diagonal, every other block is fixed.
pub fn bbm_rule() -> MargolusRule {
    let mut table: Vec<u32> = (0..16).collect();
    let (tl, tr, bl, br) = (1u32, 2u32, 4u32, 8u32);
    for (a, b) in [(tl, br), (tr, bl), (tl | br, tr | bl)] {
        table[a as usize] = b;
        table[b as usize] = a;
    }
    MargolusRule::from_table(2, table).expect("BBM is a permutation")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Even,
    Odd,
}

impl Phase {
    pub fn flip(self) -> Phase {
        match self {
            Phase::Even => Phase::Odd,
            Phase::Odd => Phase::Even,
        }
    }

    fn offset(self) -> usize {
        match self {
            Phase::Even => 0,
            Phase::Odd => 1,
        }
    }
}

/// How the right edge wraps: back to the same row, or two rows further
/// down (a helix whose turns hold one pair of rows each).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    Helical,
}

/// A `width x height` grid of cells stored row-major, plus the phase of the
/// next block partition: even phase anchors blocks at (even row, even column).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MargolusGrid {
    width: usize,
    height: usize,
    cells: Vec<u8>,
    phase: Phase,
    boundary: Boundary,
}

impl MargolusGrid {
    pub fn new(width: usize, height: usize, boundary: Boundary) -> Result<Self, CaError> {
        if width < 2 || height < 2 || width % 2 == 1 || height % 2 == 1 {
            return Err(CaError::Geometry(format!(
                "grid must have even sides of at least 2, got {width}x{height}"
            )));
        }
        Ok(MargolusGrid {
            width,
            height,
            cells: vec![0; width * height],
            phase: Phase::Even,
            boundary,
        })
    }

    pub fn from_cells(
        width: usize,
        height: usize,
        cells: Vec<u8>,
        phase: Phase,
        boundary: Boundary,
    ) -> Result<Self, CaError> {
        let mut g = Self::new(width, height, boundary)?;
        if cells.len() != width * height {
            return Err(CaError::Geometry(format!(
                "expected {} cells, got {}",
                width * height,
                cells.len()
            )));
        }
        g.cells = cells;
        g.phase = phase;
        Ok(g)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: u8) {
        self.cells[row * self.width + col] = v;
    }

    pub fn live_count(&self) -> usize {
        self.cells.iter().filter(|&&v| v != 0).count()
    }

    fn right(&self, r: usize, c: usize) -> (usize, usize) {
        if c + 1 < self.width {
            (r, c + 1)
        } else {
            match self.boundary {
                Boundary::Periodic => (r, 0),
                Boundary::Helical => ((r + 2) % self.height, 0),
            }
        }
    }

    fn down(&self, r: usize, c: usize) -> (usize, usize) {
        ((r + 1) % self.height, c)
    }

    /// Cell indices of the block anchored at `(r, c)`, as `[tl, tr, bl, br]`.
    fn block(&self, r: usize, c: usize) -> [usize; 4] {
        let tr = self.right(r, c);
        let bl = self.down(r, c);
        let br = self.right(bl.0, bl.1);
        let at = |(r, c): (usize, usize)| r * self.width + c;
        [at((r, c)), at(tr), at(bl), at(br)]
    }

    fn blocks_in_row(&self, br: usize) -> Vec<[usize; 4]> {
        let o = self.phase.offset();
        (0..self.width / 2)
            .map(|bc| self.block(2 * br + o, 2 * bc + o))
            .collect()
    }

    fn update(&self, rule: &MargolusRule, inverse: bool) -> Vec<([usize; 4], [u8; 4])> {
        let one_row = |br: usize| -> Vec<([usize; 4], [u8; 4])> {
            self.blocks_in_row(br)
                .into_iter()
                .map(|idx| {
                    let vals = idx.map(|i| self.cells[i]);
                    let out = if inverse {
                        rule.apply_inverse(vals)
                    } else {
                        rule.apply(vals)
                    };
                    (idx, out)
                })
                .collect()
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..self.height / 2).into_par_iter().flat_map_iter(one_row).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..self.height / 2).flat_map(one_row).collect()
        }
    }

    fn check_rule(&self, rule: &MargolusRule) -> Result<(), CaError> {
        if let Some(&v) = self.cells.iter().find(|&&v| v >= rule.states()) {
            return Err(CaError::Rule(format!(
                "cell value {v} outside a {}-state rule",
                rule.states()
            )));
        }
        Ok(())
    }

    /// One Margolus step: apply `rule` to every block of the current
    /// partition, then switch partitions.
    pub fn step(&self, rule: &MargolusRule) -> Result<MargolusGrid, CaError> {
        self.check_rule(rule)?;
        let mut next = self.clone();
        for (idx, vals) in self.update(rule, false) {
            for k in 0..4 {
                next.cells[idx[k]] = vals[k];
            }
        }
        next.phase = self.phase.flip();
        Ok(next)
    }

    /// Undoes [`MargolusGrid::step`].
    pub fn step_back(&self, rule: &MargolusRule) -> Result<MargolusGrid, CaError> {
        self.check_rule(rule)?;
        let mut prev = self.clone();
        prev.phase = self.phase.flip();
        for (idx, vals) in prev.update(rule, true) {
            for k in 0..4 {
                prev.cells[idx[k]] = vals[k];
            }
        }
        Ok(prev)
    }
}

/// `n` Margolus steps.
pub fn simulate(g: &MargolusGrid, rule: &MargolusRule, n: u64) -> Result<MargolusGrid, CaError> {
    let mut cur = g.clone();
    for _ in 0..n {
        cur = cur.step(rule)?;
    }
    Ok(cur)
}

/// `n` steps backwards in time.
pub fn simulate_back(g: &MargolusGrid, rule: &MargolusRule, n: u64) -> Result<MargolusGrid, CaError> {
    let mut cur = g.clone();
    for _ in 0..n {
        cur = cur.step_back(rule)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_permutation, rng};
    use rand::Rng;

    fn block(s: &str) -> [u8; 4] {
        let b: Vec<u8> = s.bytes().map(|c| c - b'0').collect();
        [b[0], b[1], b[2], b[3]]
    }

    #[test]
    fn bbm_cases() {
        let r = bbm_rule();
        assert_eq!(r.apply(block("1000")), block("0001"));
        assert_eq!(r.apply(block("0100")), block("0010"));
        assert_eq!(r.apply(block("1001")), block("0110"));
        assert_eq!(r.apply(block("1111")), block("1111"));
        assert_eq!(r.apply(block("1100")), block("1100"));
        for i in 0..16 {
            let b = r.decode(i);
            let live = |b: [u8; 4]| b.iter().filter(|&&v| v == 1).count();
            assert_eq!(live(r.apply(b)), live(b));
        }
    }

    #[test]
    fn bijectivity_checks() {
        assert!(rule_is_bijective(2, bbm_rule().table()));
        assert!(rule_is_bijective(2, MargolusRule::identity(2).table()));
        assert!(!rule_is_bijective(2, &[0; 16]));
        assert!(MargolusRule::from_table(2, vec![0; 16]).is_err());
    }

    #[test]
    fn empty_grid_stays_empty() {
        let g = MargolusGrid::new(8, 8, Boundary::Periodic).unwrap();
        let h = simulate(&g, &bbm_rule(), 5).unwrap();
        assert_eq!(h.live_count(), 0);
        assert_eq!(h.phase(), Phase::Odd);
    }

    #[test]
    fn single_ball_moves_diagonally() {
        let mut g = MargolusGrid::new(16, 16, Boundary::Periodic).unwrap();
        g.set(4, 4, 1);
        let rule = bbm_rule();
        for step in 1..=8 {
            g = g.step(&rule).unwrap();
            assert_eq!(g.live_count(), 1);
            assert_eq!(g.get(4 + step, 4 + step), 1, "step {step}");
        }
    }

    #[test]
    fn random_grid_conserves_and_reverses() {
        let mut r = rng(9);
        let cells: Vec<u8> = (0..64).map(|_| r.gen_range(0..2)).collect();
        let g = MargolusGrid::from_cells(8, 8, cells, Phase::Even, Boundary::Periodic).unwrap();
        let rule = bbm_rule();
        let h = simulate(&g, &rule, 37).unwrap();
        assert_eq!(h.live_count(), g.live_count());
        assert_eq!(simulate_back(&h, &rule, 37).unwrap(), g);
    }

    #[test]
    fn helical_reversibility_with_random_rule() {
        let mut r = rng(10);
        let p = random_permutation(&mut r, 81);
        let rule = MargolusRule::from_table(3, p.images().iter().map(|&v| v as u32).collect()).unwrap();
        let cells: Vec<u8> = (0..48).map(|_| r.gen_range(0..3)).collect();
        let g = MargolusGrid::from_cells(6, 8, cells, Phase::Odd, Boundary::Helical).unwrap();
        let h = simulate(&g, &rule, 25).unwrap();
        assert_eq!(simulate_back(&h, &rule, 25).unwrap(), g);
    }

    #[test]
    fn collision_conserves_balls() {
        // two balls heading towards each other along a row
        let mut g = MargolusGrid::new(16, 16, Boundary::Periodic).unwrap();
        g.set(4, 4, 1);
        g.set(4, 11, 1);
        let rule = bbm_rule();
        let mut cur = g.clone();
        for _ in 0..12 {
            cur = cur.step(&rule).unwrap();
            assert_eq!(cur.live_count(), 2);
        }
        assert_eq!(simulate_back(&cur, &rule, 12).unwrap(), g);
    }

    #[test]
    fn rejects_odd_sizes() {
        assert!(MargolusGrid::new(5, 4, Boundary::Periodic).is_err());
    }
}

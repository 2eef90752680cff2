use super::strobe::STROBE_TRACKS;
use super::{Boundary, CaError, MargolusGrid, MargolusRule, Phase, StrobeAutomaton, TrackedConfig1D};

const TRACKS: [&str; 9] = [
    "top", "bottom", "parity", "s_tl", "s_tc", "s_tr", "s_bl", "s_bc", "s_br",
];

/// A 1D reversible automaton simulating a Margolus rule on a `c`-wide helical
/// grid of `2p/c` rows, one 2D step per `t = c/2 + 1` ring steps.
///
/// Ring cell `x` stands for grid column `x mod c` in the row pair
/// `floor(x/c)`. On a lit step, cells paired by the parity track update as a
/// Margolus block and then swap top and bottom; on the other `t - 1` steps
/// the top track slides right and the bottom track slides left.
#[derive(Debug, Clone)]
pub struct DimReduxAutomaton {
    rule: MargolusRule,
    c: usize,
    p: usize,
    t: u64,
    strobe: StrobeAutomaton,
}

pub fn dim_redux_compile(rule: &MargolusRule, c: usize, p: usize) -> Result<DimReduxAutomaton, CaError> {
    if c < 2 || c % 2 == 1 {
        return Err(CaError::Geometry(format!("circumference {c} must be even and positive")));
    }
    if p <= c || !p.is_multiple_of(c) || p % 2 == 1 {
        return Err(CaError::Geometry(format!(
            "period {p} must be even, larger than {c} and a multiple of it"
        )));
    }
    let t = c / 2 + 1;
    Ok(DimReduxAutomaton {
        rule: rule.clone(),
        c,
        p,
        t: t as u64,
        strobe: StrobeAutomaton::counter(t as u32)?,
    })
}

impl DimReduxAutomaton {
    pub fn circumference(&self) -> usize {
        self.c
    }

    pub fn period(&self) -> usize {
        self.p
    }

    /// Ring steps per simulated 2D step.
    pub fn strobe_period(&self) -> u64 {
        self.t
    }

    pub fn rule(&self) -> &MargolusRule {
        &self.rule
    }

    /// An empty grid of the shape this automaton simulates.
    pub fn blank_grid(&self) -> MargolusGrid {
        MargolusGrid::new(self.c, 2 * self.p / self.c, Boundary::Helical).expect("validated shape")
    }

    fn grid_index(&self, x: usize, lower: bool) -> usize {
        let x = x % self.p;
        let row = 2 * (x / self.c) + lower as usize;
        row * self.c + x % self.c
    }

    fn check_grid(&self, g: &MargolusGrid) -> Result<(), CaError> {
        if g.width() != self.c || g.height() * self.c != 2 * self.p || g.boundary() != Boundary::Helical {
            return Err(CaError::Geometry(format!(
                "expected a helical {}x{} grid",
                self.c,
                2 * self.p / self.c
            )));
        }
        Ok(())
    }

    /// `(top, bottom, pair-right)` source cells for ring cell `y` at a phase.
    fn layout(&self, y: usize, phase: Phase) -> (usize, usize, bool) {
        let h = self.c / 2;
        match phase {
            Phase::Even => (self.grid_index(y, false), self.grid_index(y, true), y.is_multiple_of(2)),
            Phase::Odd => {
                let x = (y + self.p - h) % self.p;
                (self.grid_index(x, true), self.grid_index(y + h, false), x % 2 == 1)
            }
        }
    }

    /// The ring configuration standing for `g` after `n` 2D steps. The grid's
    /// phase decides the layout; `n` only sets the step counter.
    pub fn embed(&self, g: &MargolusGrid, n: u64) -> Result<TrackedConfig1D, CaError> {
        self.check_grid(g)?;
        let mut cfg = TrackedConfig1D::new(&TRACKS, self.p);
        let pattern = StrobeAutomaton::counter_pattern(self.t as u32, self.p);
        for name in STROBE_TRACKS {
            *cfg.track_mut(name) = pattern.track(name).to_vec();
        }
        let cells = g.cells();
        let mut top = vec![0; self.p];
        let mut bottom = vec![0; self.p];
        let mut parity = vec![0; self.p];
        for y in 0..self.p {
            let (a, b, right) = self.layout(y, g.phase());
            top[y] = cells[a] as u32;
            bottom[y] = cells[b] as u32;
            parity[y] = right as u32;
        }
        *cfg.track_mut("top") = top;
        *cfg.track_mut("bottom") = bottom;
        *cfg.track_mut("parity") = parity;
        cfg.step = n * self.t;
        Ok(cfg)
    }

    /// Inverse of [`DimReduxAutomaton::embed`] for configurations reached
    /// after a multiple of `t` steps.
    pub fn project(&self, cfg: &TrackedConfig1D) -> Result<MargolusGrid, CaError> {
        self.check_config(cfg)?;
        if !cfg.step.is_multiple_of(self.t) {
            return Err(CaError::Config(format!("step {} is not a multiple of {}", cfg.step, self.t)));
        }
        let phase = if (cfg.step / self.t).is_multiple_of(2) { Phase::Even } else { Phase::Odd };
        let mut cells = vec![0u8; 2 * self.p];
        for y in 0..self.p {
            let (a, b, _) = self.layout(y, phase);
            cells[a] = cfg.track("top")[y] as u8;
            cells[b] = cfg.track("bottom")[y] as u8;
        }
        MargolusGrid::from_cells(self.c, 2 * self.p / self.c, cells, phase, Boundary::Helical)
    }

    fn check_config(&self, cfg: &TrackedConfig1D) -> Result<(), CaError> {
        if cfg.names() != TRACKS || cfg.len() != self.p {
            return Err(CaError::Config("track schema or ring length mismatch".into()));
        }
        let s = self.rule.states() as u32;
        if cfg.track("top").iter().chain(cfg.track("bottom")).any(|&v| v >= s)
            || cfg.track("parity").iter().any(|&v| v > 1)
        {
            return Err(CaError::Config("track value out of range".into()));
        }
        Ok(())
    }

    /// Ring cells `y` that start a block: paired right, with `y + 1` paired left.
    fn block_starts(&self, parity: &[u32]) -> Vec<usize> {
        let n = parity.len();
        (0..n)
            .filter(|&y| parity[y] == 1 && parity[(y + 1) % n] == 0)
            .collect()
    }

    fn apply_blocks(&self, cfg: &mut TrackedConfig1D, inverse: bool) {
        let starts = self.block_starts(cfg.track("parity"));
        let mut top = cfg.track("top").to_vec();
        let mut bottom = cfg.track("bottom").to_vec();
        let n = top.len();
        for y in starts {
            let z = (y + 1) % n;
            let block = [top[y], top[z], bottom[y], bottom[z]].map(|v| v as u8);
            let out = if inverse {
                self.rule.apply_inverse(block)
            } else {
                self.rule.apply(block)
            };
            top[y] = out[0] as u32;
            top[z] = out[1] as u32;
            bottom[y] = out[2] as u32;
            bottom[z] = out[3] as u32;
        }
        *cfg.track_mut("top") = top;
        *cfg.track_mut("bottom") = bottom;
    }

    fn swap_bands(cfg: &mut TrackedConfig1D) {
        let top = cfg.track("top").to_vec();
        let bottom = std::mem::replace(cfg.track_mut("bottom"), top);
        *cfg.track_mut("top") = bottom;
    }

    fn flip_parity(cfg: &mut TrackedConfig1D) {
        cfg.track_mut("parity").iter_mut().for_each(|v| *v ^= 1);
    }

    fn advance(&self, cfg: &mut TrackedConfig1D) {
        if self.strobe.is_lit(cfg) {
            self.apply_blocks(cfg, false);
            Self::swap_bands(cfg);
        } else {
            cfg.track_mut("top").rotate_right(1);
            cfg.track_mut("bottom").rotate_left(1);
        }
        Self::flip_parity(cfg);
        self.strobe.advance(cfg);
        cfg.step += 1;
    }

    fn retreat(&self, cfg: &mut TrackedConfig1D) {
        self.strobe.retreat(cfg);
        Self::flip_parity(cfg);
        if self.strobe.is_lit(cfg) {
            Self::swap_bands(cfg);
            self.apply_blocks(cfg, true);
        } else {
            cfg.track_mut("top").rotate_left(1);
            cfg.track_mut("bottom").rotate_right(1);
        }
        cfg.step = cfg.step.saturating_sub(1);
    }

    pub fn step(&self, cfg: &TrackedConfig1D) -> Result<TrackedConfig1D, CaError> {
        self.simulate_1d(cfg, 1)
    }

    pub fn step_back(&self, cfg: &TrackedConfig1D) -> Result<TrackedConfig1D, CaError> {
        self.simulate_1d_back(cfg, 1)
    }

    /// `n` ring steps.
    pub fn simulate_1d(&self, cfg: &TrackedConfig1D, n: u64) -> Result<TrackedConfig1D, CaError> {
        self.check_config(cfg)?;
        let mut cur = cfg.clone();
        for _ in 0..n {
            self.advance(&mut cur);
        }
        Ok(cur)
    }

    /// `n` ring steps backwards.
    pub fn simulate_1d_back(&self, cfg: &TrackedConfig1D, n: u64) -> Result<TrackedConfig1D, CaError> {
        self.check_config(cfg)?;
        let mut cur = cfg.clone();
        for _ in 0..n {
            self.retreat(&mut cur);
        }
        Ok(cur)
    }

    /// Runs both sides for `n` 2D steps and compares after each one. Returns
    /// the first step at which they disagree.
    pub fn verify(&self, g: &MargolusGrid, n: u64) -> Result<Option<u64>, CaError> {
        self.check_grid(g)?;
        if g.phase() != Phase::Even {
            return Err(CaError::Config("verification starts from an even-phase grid".into()));
        }
        let mut grid = g.clone();
        let mut ring = self.embed(g, 0)?;
        for k in 1..=n {
            grid = grid.step(&self.rule)?;
            ring = self.simulate_1d(&ring, self.t)?;
            if ring != self.embed(&grid, k)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

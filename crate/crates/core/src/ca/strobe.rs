use super::{CaError, TrackedConfig1D};

/// A reversible partitioning rule on `(left, center, right)` triples, with a
/// set of firing center states. Side tracks are exchanged with neighbours
/// between applications; the center track stays put.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionRule {
    side: u32,
    center: u32,
    forward: Vec<u32>,
    backward: Vec<u32>,
    firing: Vec<bool>,
}

impl PartitionRule {
    /// `table[l + side*(c + center*r)]` is the image triple in the same encoding.
    pub fn from_table(side: u32, center: u32, table: Vec<u32>, firing: Vec<bool>) -> Result<Self, CaError> {
        let size = (side * side * center) as usize;
        if side == 0 || center == 0 || table.len() != size || firing.len() != center as usize {
            return Err(CaError::Rule("table or firing set has the wrong size".into()));
        }
        let mut backward = vec![u32::MAX; size];
        for (i, &v) in table.iter().enumerate() {
            if v as usize >= size || backward[v as usize] != u32::MAX {
                return Err(CaError::Rule("partition rule is not a permutation".into()));
            }
            backward[v as usize] = i as u32;
        }
        Ok(PartitionRule {
            side,
            center,
            forward: table,
            backward,
            firing,
        })
    }

    /// Stand-in strobe: the center is a phase counter mod `t`, firing at 0;
    /// side alphabets are trivial.
    pub fn counter(t: u32) -> Result<Self, CaError> {
        if t == 0 {
            return Err(CaError::Rule("counter period must be positive".into()));
        }
        let table = (0..t).map(|c| (c + 1) % t).collect();
        let firing = (0..t).map(|c| c == 0).collect();
        Self::from_table(1, t, table, firing)
    }

    pub fn triple_count(&self) -> u32 {
        self.side * self.side * self.center
    }

    fn center_of(&self, triple: u32) -> u32 {
        (triple / self.side) % self.center
    }

    fn split(&self, triple: u32) -> [u32; 3] {
        [triple % self.side, self.center_of(triple), triple / (self.side * self.center)]
    }

    fn join(&self, [l, c, r]: [u32; 3]) -> u32 {
        l + self.side * (c + self.center * r)
    }

    pub fn is_firing(&self, center: u32) -> bool {
        self.firing[center as usize]
    }
}

pub(super) const STROBE_TRACKS: [&str; 6] = ["s_tl", "s_tc", "s_tr", "s_bl", "s_bc", "s_br"];

/// Six-track wrapper around a [`PartitionRule`]: top triples run the rule
/// forwards, bottom triples run it backwards, and a cell whose top is firing
/// while its bottom is not swaps the two.
#[derive(Debug, Clone)]
pub struct StrobeAutomaton {
    rule: PartitionRule,
    transform: Vec<u32>,
    inverse: Vec<u32>,
}

impl StrobeAutomaton {
    pub fn new(rule: PartitionRule) -> Self {
        let a = rule.triple_count();
        let size = (a * a) as usize;
        let fire = |t: u32| rule.is_firing(rule.center_of(t));
        let top_lit = |s: u32| fire(s % a) && !fire(s / a);
        let bottom_lit = |s: u32| fire(s / a) && !fire(s % a);
        let mut transform = vec![u32::MAX; size];
        let mut hit = vec![false; size];
        let mut undefined = Vec::new();
        for s in 0..size as u32 {
            let (top, bottom) = (s % a, s / a);
            let image = if top_lit(s) {
                bottom + a * top
            } else {
                let cand = rule.forward[top as usize] + a * rule.backward[bottom as usize];
                if bottom_lit(cand) {
                    undefined.push(s);
                    continue;
                }
                cand
            };
            transform[s as usize] = image;
            hit[image as usize] = true;
        }
        let unused = (0..size as u32).filter(|&v| !hit[v as usize]);
        for (s, v) in undefined.into_iter().zip(unused) {
            transform[s as usize] = v;
        }
        let mut inverse = vec![0u32; size];
        for (s, &v) in transform.iter().enumerate() {
            inverse[v as usize] = s as u32;
        }
        StrobeAutomaton {
            rule,
            transform,
            inverse,
        }
    }

    pub fn counter(t: u32) -> Result<Self, CaError> {
        Ok(Self::new(PartitionRule::counter(t)?))
    }

    pub fn rule(&self) -> &PartitionRule {
        &self.rule
    }

    /// Uniform counter pattern on `len` cells: the top is firing and the
    /// bottom holds the state `t - 1` steps before firing.
    pub fn counter_pattern(t: u32, len: usize) -> TrackedConfig1D {
        let mut cfg = TrackedConfig1D::new(&STROBE_TRACKS, len);
        let bottom = (t - ((t - 1) % t)) % t;
        cfg.track_mut("s_bc").iter_mut().for_each(|v| *v = bottom);
        cfg
    }

    /// True when every cell's top center is firing.
    pub fn is_lit(&self, cfg: &TrackedConfig1D) -> bool {
        cfg.track("s_tc").iter().all(|&c| self.rule.is_firing(c))
    }

    fn exchange(cfg: &mut TrackedConfig1D, left: &str, right: &str) {
        let l = cfg.track(left).to_vec();
        let r = cfg.track(right).to_vec();
        let mut new_l = r.clone();
        new_l.rotate_right(1);
        let mut new_r = l;
        new_r.rotate_left(1);
        *cfg.track_mut(left) = new_l;
        *cfg.track_mut(right) = new_r;
    }

    fn per_cell(&self, cfg: &mut TrackedConfig1D, table: &[u32]) {
        let a = self.rule.triple_count();
        let n = cfg.len();
        let cols: Vec<Vec<u32>> = STROBE_TRACKS.iter().map(|t| cfg.track(t).to_vec()).collect();
        let mut out = cols.clone();
        for x in 0..n {
            let top = self.rule.join([cols[0][x], cols[1][x], cols[2][x]]);
            let bottom = self.rule.join([cols[3][x], cols[4][x], cols[5][x]]);
            let image = table[(top + a * bottom) as usize];
            let t = self.rule.split(image % a);
            let b = self.rule.split(image / a);
            for k in 0..3 {
                out[k][x] = t[k];
                out[k + 3][x] = b[k];
            }
        }
        for (name, col) in STROBE_TRACKS.iter().zip(out) {
            *cfg.track_mut(name) = col;
        }
    }

    fn check(&self, cfg: &TrackedConfig1D) -> Result<(), CaError> {
        for (k, name) in STROBE_TRACKS.iter().enumerate() {
            if !cfg.has_track(name) {
                return Err(CaError::Config(format!("missing strobe track {name}")));
            }
            let bound = if k % 3 == 1 { self.rule.center } else { self.rule.side };
            if cfg.track(name).iter().any(|&v| v >= bound) {
                return Err(CaError::Config(format!("track {name} out of range")));
            }
        }
        Ok(())
    }

    /// Advances only the strobe tracks of `cfg`; other tracks and the step
    /// counter are left alone.
    pub(super) fn advance(&self, cfg: &mut TrackedConfig1D) {
        Self::exchange(cfg, "s_tl", "s_tr");
        self.per_cell(cfg, &self.transform);
        Self::exchange(cfg, "s_bl", "s_br");
    }

    pub(super) fn retreat(&self, cfg: &mut TrackedConfig1D) {
        Self::exchange(cfg, "s_bl", "s_br");
        self.per_cell(cfg, &self.inverse);
        Self::exchange(cfg, "s_tl", "s_tr");
    }

    pub fn step(&self, cfg: &TrackedConfig1D) -> Result<TrackedConfig1D, CaError> {
        self.check(cfg)?;
        let mut out = cfg.clone();
        self.advance(&mut out);
        out.step += 1;
        Ok(out)
    }

    pub fn step_back(&self, cfg: &TrackedConfig1D) -> Result<TrackedConfig1D, CaError> {
        self.check(cfg)?;
        let mut out = cfg.clone();
        self.retreat(&mut out);
        out.step = out.step.saturating_sub(1);
        Ok(out)
    }

    /// Indices `i < steps` at which the configuration reached after `i`
    /// steps is lit.
    pub fn lit_steps(&self, cfg: &TrackedConfig1D, steps: u64) -> Result<Vec<u64>, CaError> {
        self.check(cfg)?;
        let mut cur = cfg.clone();
        let mut out = Vec::new();
        for i in 0..steps {
            if self.is_lit(&cur) {
                out.push(i);
            }
            self.advance(&mut cur);
        }
        Ok(out)
    }
}

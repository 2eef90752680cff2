use super::CaError;

/// A ring of cells whose states are tuples of named tracks, plus the number
/// of steps taken so far.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrackedConfig1D {
    names: Vec<&'static str>,
    tracks: Vec<Vec<u32>>,
    pub step: u64,
}

impl TrackedConfig1D {
    pub fn new(names: &[&'static str], len: usize) -> Self {
        TrackedConfig1D {
            names: names.to_vec(),
            tracks: vec![vec![0; len]; names.len()],
            step: 0,
        }
    }

    pub fn from_tracks(names: &[&'static str], tracks: Vec<Vec<u32>>) -> Result<Self, CaError> {
        if names.len() != tracks.len() {
            return Err(CaError::Config(format!(
                "{} names for {} tracks",
                names.len(),
                tracks.len()
            )));
        }
        let len = tracks.first().map_or(0, Vec::len);
        if tracks.iter().any(|t| t.len() != len) {
            return Err(CaError::Config("tracks differ in length".into()));
        }
        Ok(TrackedConfig1D {
            names: names.to_vec(),
            tracks,
            step: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.tracks.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names(&self) -> &[&'static str] {
        &self.names
    }

    fn index(&self, name: &str) -> usize {
        self.names
            .iter()
            .position(|n| *n == name)
            .unwrap_or_else(|| panic!("no track named {name}"))
    }

    pub fn has_track(&self, name: &str) -> bool {
        self.names.contains(&name)
    }

    /// Panics if there is no such track.
    pub fn track(&self, name: &str) -> &[u32] {
        &self.tracks[self.index(name)]
    }

    pub fn track_mut(&mut self, name: &str) -> &mut Vec<u32> {
        let i = self.index(name);
        &mut self.tracks[i]
    }
}

fn shift_tracks(cfg: &TrackedConfig1D, dir: isize) -> Result<TrackedConfig1D, CaError> {
    if !cfg.has_track("top") || !cfg.has_track("bottom") {
        return Err(CaError::Config("band shift needs top and bottom tracks".into()));
    }
    let mut out = cfg.clone();
    let n = cfg.len();
    if n > 0 {
        let k = dir.rem_euclid(n as isize) as usize;
        out.track_mut("top").rotate_right(k);
        out.track_mut("bottom").rotate_left(k);
    }
    out.step += 1;
    Ok(out)
}

/// Every cell copies the top value of its left neighbour and the bottom
/// value of its right neighbour.
pub fn band_shift_step(cfg: &TrackedConfig1D) -> Result<TrackedConfig1D, CaError> {
    shift_tracks(cfg, 1)
}

/// Undoes [`band_shift_step`], including the step counter.
pub fn band_shift_back(cfg: &TrackedConfig1D) -> Result<TrackedConfig1D, CaError> {
    let mut out = shift_tracks(cfg, -1)?;
    out.step = cfg.step.saturating_sub(1);
    Ok(out)
}

//! Browser bindings: a billiard-ball stepper, the interval-exchange orbit
//! solver and the riffle shuffle's order.

use num_bigint::BigUint;
use wasm_bindgen::prelude::*;

use ibx_core::ca::{bbm_rule, Boundary, MargolusGrid, MargolusRule, Phase};
use ibx_core::formats::{parse_iet, write_iet};
use ibx_core::iet::{build_surface, four_interval_example};
use ibx_core::plb::riffle;

fn fail(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// A periodic billiard-ball grid that can be stepped either way.
#[wasm_bindgen]
pub struct BbmStepper {
    grid: MargolusGrid,
    rule: MargolusRule,
    steps: i64,
}

#[wasm_bindgen]
impl BbmStepper {
    /// Random grid with roughly `density` of the cells live, from `seed`.
    #[wasm_bindgen(constructor)]
    pub fn new(width: usize, height: usize, density: f64, seed: u32) -> Result<BbmStepper, JsError> {
        // splitmix-style hash so the page needs no RNG of its own
        let mut state = seed as u64 ^ 0x9e37_79b9_7f4a_7c15;
        let mut next = move || {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            (z ^ (z >> 31)) as f64 / u64::MAX as f64
        };
        let cells = (0..width * height).map(|_| (next() < density) as u8).collect();
        let grid = MargolusGrid::from_cells(width, height, cells, Phase::Even, Boundary::Periodic).map_err(fail)?;
        Ok(BbmStepper {
            grid,
            rule: bbm_rule(),
            steps: 0,
        })
    }

    pub fn width(&self) -> usize {
        self.grid.width()
    }

    pub fn height(&self) -> usize {
        self.grid.height()
    }

    pub fn steps(&self) -> i64 {
        self.steps
    }

    pub fn live(&self) -> usize {
        self.grid.live_count()
    }

    /// Row-major cells, 1 for a ball.
    pub fn cells(&self) -> Vec<u8> {
        self.grid.cells().to_vec()
    }

    pub fn toggle(&mut self, row: usize, col: usize) {
        let v = self.grid.get(row, col);
        self.grid.set(row, col, 1 - v);
    }

    pub fn step(&mut self, n: u32) -> Result<(), JsError> {
        for _ in 0..n {
            self.grid = self.grid.step(&self.rule).map_err(fail)?;
            self.steps += 1;
        }
        Ok(())
    }

    pub fn step_back(&mut self, n: u32) -> Result<(), JsError> {
        for _ in 0..n {
            self.grid = self.grid.step_back(&self.rule).map_err(fail)?;
            self.steps -= 1;
        }
        Ok(())
    }
}

/// The exchange used as the page's default input.
#[wasm_bindgen]
pub fn example_iet() -> String {
    write_iet(&four_interval_example())
}

/// `T^n(i)` for an exchange in the `.iet` text format; `n` is decimal.
#[wasm_bindgen]
pub fn iet_solve(text: &str, i: u64, n: &str) -> Result<u64, JsError> {
    let t = parse_iet(text).map_err(fail)?;
    let n: BigUint = n.trim().parse().map_err(|_| JsError::new("n must be a non-negative integer"))?;
    build_surface(&t).and_then(|su| su.solve(i, &n)).map_err(fail)
}

/// Number of perfect riffles of `n` cards that restore the deck.
#[wasm_bindgen]
pub fn riffle_order(n: u32) -> Result<String, JsError> {
    if n == 0 || n > 1 << 22 {
        return Err(JsError::new("n must be between 1 and 4194304"));
    }
    Ok(riffle(n).order().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stepper_round_trip() {
        let mut s = BbmStepper::new(16, 12, 0.3, 7).unwrap_or_else(|_| panic!("grid"));
        let start = s.cells();
        let live = s.live();
        s.step(25).unwrap_or_else(|_| panic!("step"));
        assert_eq!(s.live(), live);
        s.step_back(25).unwrap_or_else(|_| panic!("step back"));
        assert_eq!(s.cells(), start);
        assert_eq!(s.steps(), 0);
    }

    #[test]
    fn solver_and_riffle() {
        assert_eq!(iet_solve(&example_iet(), 6, "1").unwrap_or_else(|_| panic!("solve")), 10);
        assert_eq!(riffle_order(8).unwrap_or_else(|_| panic!("order")), "3");
    }
}

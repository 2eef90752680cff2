//! Reductions between iteration problems, as compilers that emit a new
//! bijection together with an iteration count, a start state and a decoder.
//!
//! States are packed into a single word, with tuple fields laid out from the
//! low bits up in the order they are listed. Every compiled map is total:
//! states whose counters fall outside their moduli are fixed points.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::bijection::{self, Bijection, KernelError};
use crate::bits::{bits_for, Bitstring};
use crate::revcirc::{ClassicalGate, ClassicalOp};

/// Largest `k` accepted by [`inversion_by_iteration`] (the schedule runs `2^k` steps).
pub const MAX_SUMMATION_WIDTH: usize = 20;
/// Largest `k` accepted by [`compile_iteration_to_invertible`].
pub const MAX_CLOCK_WIDTH: usize = 8;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("width {width} exceeds the limit of {max} for this compiler")]
    TooWide { width: usize, max: usize },
    #[error("oracle gate {gate} has {got}-bit arguments but the oracle has width {expected}")]
    OracleWidth { gate: usize, expected: usize, got: usize },
    #[error("oracle circuit: {0}")]
    Circuit(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    pub name: String,
    pub offset: usize,
    pub width: usize,
}

/// Named bit fields of a packed state word.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Layout {
    fields: Vec<Field>,
}

impl Layout {
    fn push(&mut self, name: impl Into<String>, width: usize) -> usize {
        let offset = self.width();
        self.fields.push(Field {
            name: name.into(),
            offset,
            width,
        });
        offset
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn width(&self) -> usize {
        self.fields.last().map_or(0, |f| f.offset + f.width)
    }

    pub fn field(&self, name: &str) -> Option<&Field> {
        self.fields.iter().find(|f| f.name == name)
    }

    /// Value of the named field in `state`. Panics on an unknown name.
    pub fn get(&self, state: u64, name: &str) -> u64 {
        let f = self.field(name).unwrap_or_else(|| panic!("no field {name}"));
        get_bits(state, f.offset, f.width)
    }

    pub fn describe(&self, state: u64) -> String {
        self.fields
            .iter()
            .map(|f| format!("{}={}", f.name, get_bits(state, f.offset, f.width)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

fn get_bits(x: u64, offset: usize, width: usize) -> u64 {
    if width == 0 {
        0
    } else {
        x >> offset & mask(width)
    }
}

fn set_bits(x: u64, offset: usize, width: usize, v: u64) -> u64 {
    if width == 0 {
        return x;
    }
    let m = mask(width) << offset;
    (x & !m) | (v << offset & m)
}

type Extract = Arc<dyn Fn(&Bitstring) -> Bitstring + Send + Sync>;

/// A compiled reduction: iterate `g` exactly `total_iterations` times from
/// `start` and decode the result with [`Schedule::extract`].
#[derive(Clone)]
pub struct Schedule {
    pub g: Bijection,
    pub total_iterations: BigUint,
    pub start: Bitstring,
    pub layout: Layout,
    extract: Extract,
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Schedule")
            .field("g", &self.g)
            .field("total_iterations", &self.total_iterations)
            .field("start", &self.start)
            .field("layout", &self.layout)
            .finish()
    }
}

impl Schedule {
    pub fn extract(&self, state: &Bitstring) -> Bitstring {
        (self.extract)(state)
    }

    /// Runs the schedule through the reference iteration engine.
    pub fn run(&self) -> Result<Bitstring, KernelError> {
        let end = bijection::iterate(&self.g, &self.total_iterations, &self.start)?;
        Ok(self.extract(&end))
    }

    /// Every state visited by the schedule, start and end included.
    pub fn trace(&self) -> impl Iterator<Item = u64> + '_ {
        let steps: u64 = u64::try_from(&self.total_iterations)
            .expect("trace is for desk-scale schedules");
        let mut v = self.start.to_u64();
        let mut first = true;
        (0..=steps).map(move |_| {
            if !std::mem::take(&mut first) {
                v = self.g.forward_word(v);
            }
            v
        })
    }
}

fn field_extract(offset: usize, width: usize) -> Extract {
    Arc::new(move |s: &Bitstring| Bitstring::from_u64(get_bits(s.to_u64(), offset, width), width))
}

/// Computes `f(x)` by iterating the summation map
/// `(a, b) -> (a + 1, b + f~(a)) mod 2^k` for `2^k` steps from `(0, 0)`, where
/// `f~` agrees with `f` at `x` and is zero elsewhere. Only `f`'s forward
/// direction is used; the backward map is `(a, b) -> (a - 1, b - f~(a - 1))`.
pub fn inversion_by_iteration(f: &Bijection, x: &Bitstring) -> Result<Schedule, ReductionError> {
    let k = f.width();
    if k > MAX_SUMMATION_WIDTH {
        return Err(ReductionError::TooWide {
            width: k,
            max: MAX_SUMMATION_WIDTH,
        });
    }
    if x.width() != k {
        return Err(KernelError::WidthMismatch {
            expected: k,
            got: x.width(),
        }
        .into());
    }
    let mut layout = Layout::default();
    let a_off = layout.push("a", k);
    let b_off = layout.push("b", k);
    let m = mask(k);
    let target = x.to_u64();
    let fx = f.forward_word(target);
    let ft = move |a: u64| if a == target { fx } else { 0 };

    let fwd = move |s: u64| {
        let a = get_bits(s, a_off, k);
        let b = get_bits(s, b_off, k);
        let s = set_bits(s, a_off, k, a.wrapping_add(1) & m);
        set_bits(s, b_off, k, b.wrapping_add(ft(a)) & m)
    };
    let bwd = move |s: u64| {
        let a = get_bits(s, a_off, k).wrapping_sub(1) & m;
        let b = get_bits(s, b_off, k);
        let s = set_bits(s, a_off, k, a);
        set_bits(s, b_off, k, b.wrapping_sub(ft(a)) & m)
    };
    let g = Bijection::from_words(2 * k, format!("summation[{}]", f.label()), fwd)
        .with_backward_words(bwd);
    Ok(Schedule {
        g,
        total_iterations: BigUint::from(1u64) << k,
        start: Bitstring::zeros(2 * k),
        layout,
        extract: field_extract(b_off, k),
    })
}

/// Clock parameters of [`compile_iteration_to_invertible`] for width `k`:
/// the little hand runs modulo `2^k + 3`.
pub fn clock_period(k: usize) -> u64 {
    (1u64 << k) + 3
}

/// Turns `n`-fold iteration of a forward-only bijection into iteration of an
/// invertible map on tuples `(c1, c2, a, b, c)`.
///
/// Each round of `M = 2^k + 3` steps replaces `a` by `f(a)`: with the little
/// hand `c2` at 0 it sets `b ^= f(a)`, at 1 `a ^= b`, on the next `2^k`
/// steps it scans `c` over all values and sets `a ^= c` where `f(c) = b`, and
/// at `2^k + 2` it clears `b ^= a`. The case is chosen by the current `c2`,
/// then the clock advances; the big hand `c1` (modulo `n + 1`) ticks when `c2`
/// wraps. Running `n * M` steps from `(0, 0, x, 0, 0)` leaves `f^(n)(x)` in `a`.
pub fn compile_iteration_to_invertible(f: &Bijection, n: u64) -> Result<Schedule, ReductionError> {
    let k = f.width();
    if k > MAX_CLOCK_WIDTH {
        return Err(ReductionError::TooWide {
            width: k,
            max: MAX_CLOCK_WIDTH,
        });
    }
    let big = n.checked_add(1).ok_or(ReductionError::TooWide { width: 65, max: 64 })?;
    let small = clock_period(k);
    let mut layout = Layout::default();
    let c1_w = bits_for(big);
    let c2_w = bits_for(small);
    let c1_off = layout.push("c1", c1_w);
    let c2_off = layout.push("c2", c2_w);
    let a_off = layout.push("a", k);
    let b_off = layout.push("b", k);
    let c_off = layout.push("c", k);
    let width = layout.width();
    if width > 64 {
        return Err(ReductionError::TooWide { width, max: 64 });
    }
    let m = mask(k);
    let scan_end = (1u64 << k) + 2;

    let fa = f.clone();
    let case = move |s: u64, c2: u64, forward: bool| -> u64 {
        let a = get_bits(s, a_off, k);
        let b = get_bits(s, b_off, k);
        match c2 {
            0 => set_bits(s, b_off, k, b ^ fa.forward_word(a)),
            1 => set_bits(s, a_off, k, a ^ b),
            c2 if c2 < scan_end => {
                if forward {
                    let c = get_bits(s, c_off, k);
                    let a = if fa.forward_word(c) == b { a ^ c } else { a };
                    let s = set_bits(s, a_off, k, a);
                    set_bits(s, c_off, k, (c + 1) & m)
                } else {
                    let c = get_bits(s, c_off, k).wrapping_sub(1) & m;
                    let a = if fa.forward_word(c) == b { a ^ c } else { a };
                    let s = set_bits(s, a_off, k, a);
                    set_bits(s, c_off, k, c)
                }
            }
            _ => set_bits(s, b_off, k, b ^ a),
        }
    };
    let case_b = case.clone();

    let fwd = move |s: u64| {
        let c1 = get_bits(s, c1_off, c1_w);
        let c2 = get_bits(s, c2_off, c2_w);
        if c1 >= big || c2 >= small {
            return s;
        }
        let s = case(s, c2, true);
        let (c1, c2) = tick(c1, c2, big, small);
        set_bits(set_bits(s, c1_off, c1_w, c1), c2_off, c2_w, c2)
    };
    let bwd = move |s: u64| {
        let c1 = get_bits(s, c1_off, c1_w);
        let c2 = get_bits(s, c2_off, c2_w);
        if c1 >= big || c2 >= small {
            return s;
        }
        let (c1, c2) = untick(c1, c2, big, small);
        let s = case_b(s, c2, false);
        set_bits(set_bits(s, c1_off, c1_w, c1), c2_off, c2_w, c2)
    };

    let g = Bijection::from_words(width, format!("clock[{}]", f.label()), fwd)
        .with_backward_words(bwd);
    Ok(Schedule {
        g,
        total_iterations: BigUint::from(n) * BigUint::from(small),
        start: Bitstring::zeros(width),
        layout,
        extract: field_extract(a_off, k),
    })
}

/// Start state `(0, 0, x, 0, 0)` for a clock schedule.
pub fn clock_start(sched: &Schedule, x: &Bitstring) -> Bitstring {
    let a = sched.layout.field("a").expect("clock layout");
    assert_eq!(a.width, x.width());
    let s = set_bits(0, a.offset, a.width, x.to_u64());
    Bitstring::from_u64(s, sched.layout.width())
}

/// Convenience: compiles and positions the clock schedule for input `x`.
pub fn clock_schedule(f: &Bijection, n: u64, x: &Bitstring) -> Result<Schedule, ReductionError> {
    if x.width() != f.width() {
        return Err(KernelError::WidthMismatch {
            expected: f.width(),
            got: x.width(),
        }
        .into());
    }
    let mut s = compile_iteration_to_invertible(f, n)?;
    s.start = clock_start(&s, x);
    Ok(s)
}

fn tick(c1: u64, c2: u64, big: u64, small: u64) -> (u64, u64) {
    if c2 + 1 == small {
        ((c1 + 1) % big, 0)
    } else {
        (c1, c2 + 1)
    }
}

fn untick(c1: u64, c2: u64, big: u64, small: u64) -> (u64, u64) {
    if c2 == 0 {
        ((c1 + big - 1) % big, small - 1)
    } else {
        (c1, c2 - 1)
    }
}

/// A step of an [`OracleCircuit`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleStep {
    Gate(ClassicalGate),
    /// Writes `g^(n)(s)` onto the fresh wires `t`, reading the count `n`
    /// in binary from wires `n` (least significant first).
    Oracle { n: Vec<usize>, s: Vec<usize>, t: Vec<usize> },
}

/// A classical circuit that may also call an oracle bijection `g` as
/// `t = g^(n)(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCircuit {
    inputs: usize,
    steps: Vec<OracleStep>,
    outputs: Vec<usize>,
    wires: usize,
    n_max: u64,
}

impl OracleCircuit {
    pub fn new(
        inputs: usize,
        steps: Vec<OracleStep>,
        outputs: Vec<usize>,
    ) -> Result<Self, ReductionError> {
        let mut wires = inputs;
        for st in &steps {
            match st {
                OracleStep::Gate(g) => wires = wires.max(g.out + 1),
                OracleStep::Oracle { t, .. } => {
                    wires = wires.max(t.iter().map(|&w| w + 1).max().unwrap_or(0))
                }
            }
        }
        let mut defined = vec![false; wires];
        defined[..inputs].fill(true);
        let mut n_max = 0u64;
        let err = |msg: String| Err(ReductionError::Circuit(msg));
        for (index, st) in steps.iter().enumerate() {
            let (reads, writes): (Vec<usize>, Vec<usize>) = match st {
                OracleStep::Gate(g) => {
                    if g.ins.len() != g.op.arity() {
                        return err(format!("gate {index} has the wrong number of inputs"));
                    }
                    (g.ins.clone(), vec![g.out])
                }
                OracleStep::Oracle { n, s, t } => {
                    if s.len() != t.len() || s.is_empty() {
                        return err(format!("oracle gate {index} needs equal, non-empty s and t"));
                    }
                    if n.len() >= 64 {
                        return err(format!("oracle gate {index} has a count wider than 63 bits"));
                    }
                    n_max = n_max.max(mask(n.len()));
                    (n.iter().chain(s).copied().collect(), t.clone())
                }
            };
            for &r in &reads {
                if r >= wires || !defined[r] {
                    return err(format!("step {index} reads wire {r} before it is written"));
                }
            }
            for &w in &writes {
                if defined[w] {
                    return err(format!("step {index} writes wire {w} which already has a value"));
                }
                defined[w] = true;
            }
        }
        if let Some(&o) = outputs.iter().find(|&&o| o >= wires || !defined[o]) {
            return err(format!("output wire {o} is never written"));
        }
        Ok(OracleCircuit {
            inputs,
            steps,
            outputs,
            wires,
            n_max,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn steps(&self) -> &[OracleStep] {
        &self.steps
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn wire_count(&self) -> usize {
        self.wires
    }

    /// Largest iteration count any oracle gate can be asked for.
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    fn check_oracle(&self, g: &Bijection) -> Result<(), ReductionError> {
        for (gate, st) in self.steps.iter().enumerate() {
            if let OracleStep::Oracle { s, .. } = st {
                if s.len() != g.width() {
                    return Err(ReductionError::OracleWidth {
                        gate,
                        expected: g.width(),
                        got: s.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Direct evaluation, calling the oracle through the reference engine.
    pub fn eval(&self, g: &Bijection, input: &Bitstring) -> Result<Bitstring, ReductionError> {
        self.check_oracle(g)?;
        if input.width() != self.inputs {
            return Err(KernelError::WidthMismatch {
                expected: self.inputs,
                got: input.width(),
            }
            .into());
        }
        let mut vals = vec![false; self.wires];
        for (i, v) in vals.iter_mut().enumerate().take(self.inputs) {
            *v = input.get(i);
        }
        for st in &self.steps {
            match st {
                OracleStep::Gate(gate) => {
                    let a = vals[gate.ins[0]];
                    let b = gate.ins.get(1).map(|&i| vals[i]).unwrap_or(false);
                    vals[gate.out] = op_value(gate.op, a, b);
                }
                OracleStep::Oracle { n, s, t } => {
                    let count = read_wires(&vals, n);
                    let arg: Vec<bool> = s.iter().map(|&w| vals[w]).collect();
                    let out = bijection::iterate_u64(g, count, &Bitstring::from_bools(&arg))?;
                    for (i, &w) in t.iter().enumerate() {
                        vals[w] = out.get(i);
                    }
                }
            }
        }
        let out: Vec<bool> = self.outputs.iter().map(|&o| vals[o]).collect();
        Ok(Bitstring::from_bools(&out))
    }
}

fn op_value(op: ClassicalOp, a: bool, b: bool) -> bool {
    match op {
        ClassicalOp::And => a & b,
        ClassicalOp::Or => a | b,
        ClassicalOp::Xor => a ^ b,
        ClassicalOp::Not => !a,
        ClassicalOp::Copy => a,
    }
}

fn read_wires(vals: &[bool], wires: &[usize]) -> u64 {
    wires
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &w)| acc | (vals[w] as u64) << i)
}

/// Compiles an oracle circuit into one bijection `h` on `(c1, c2, wires)`.
///
/// The little hand `c2` runs modulo `N = n_max + 1` and the big hand `c1`
/// modulo `M = steps + 1`, so step `c1` of the circuit owns one full sweep of
/// `c2`. A standard gate XORs its value into its output wire when `c2 = 0`.
/// An oracle gate XORs `s` into `t` when `c2 = 0` and replaces `t` by `g(t)`
/// while `0 < c2 <= n`. After `M * N` steps from the input assignment the
/// output wires hold the circuit's answer.
pub fn compile_oracle_circuit(
    oc: &OracleCircuit,
    g_oracle: &Bijection,
) -> Result<Schedule, ReductionError> {
    oc.check_oracle(g_oracle)?;
    let g_back = if g_oracle.has_backward() {
        g_oracle.clone()
    } else {
        g_oracle.clone().with_tabulated_inverse()?
    };
    let big = oc.steps.len() as u64 + 1;
    let small = oc.n_max + 1;
    let mut layout = Layout::default();
    let c1_w = bits_for(big);
    let c2_w = bits_for(small);
    let c1_off = layout.push("c1", c1_w);
    let c2_off = layout.push("c2", c2_w);
    let w_off = layout.push("wires", oc.wires);
    let width = layout.width();
    if width > 64 {
        return Err(ReductionError::TooWide { width, max: 64 });
    }

    let steps = Arc::new(oc.steps.clone());
    let wire = move |s: u64, w: usize| s >> (w_off + w) & 1 == 1;
    let read = move |s: u64, ws: &[usize]| {
        ws.iter()
            .enumerate()
            .fold(0u64, |acc, (i, &w)| acc | (wire(s, w) as u64) << i)
    };
    let write = move |s: u64, ws: &[usize], v: u64| {
        ws.iter().enumerate().fold(s, |acc, (i, &w)| {
            let bit = 1u64 << (w_off + w);
            if v >> i & 1 == 1 {
                acc | bit
            } else {
                acc & !bit
            }
        })
    };
    let apply = move |s: u64, c1: u64, c2: u64, oracle: &Bijection, forward: bool| -> u64 {
        let Some(step) = steps.get(c1 as usize) else {
            return s;
        };
        match step {
            OracleStep::Gate(gate) if c2 == 0 => {
                let a = wire(s, gate.ins[0]);
                let b = gate.ins.get(1).is_some_and(|&i| wire(s, i));
                if op_value(gate.op, a, b) {
                    s ^ 1u64 << (w_off + gate.out)
                } else {
                    s
                }
            }
            OracleStep::Oracle { s: src, t, .. } if c2 == 0 => write(s, t, read(s, t) ^ read(s, src)),
            OracleStep::Oracle { n, t, .. } if c2 <= read(s, n) => {
                let v = read(s, t);
                let v = if forward {
                    oracle.forward_word(v)
                } else {
                    oracle.backward_word(v).expect("backward supplied")
                };
                write(s, t, v)
            }
            _ => s,
        }
    };
    let apply_b = apply.clone();
    let g_fwd = g_oracle.clone();

    let fwd = move |s: u64| {
        let c1 = get_bits(s, c1_off, c1_w);
        let c2 = get_bits(s, c2_off, c2_w);
        if c1 >= big || c2 >= small {
            return s;
        }
        let s = apply(s, c1, c2, &g_fwd, true);
        let (c1, c2) = tick(c1, c2, big, small);
        set_bits(set_bits(s, c1_off, c1_w, c1), c2_off, c2_w, c2)
    };
    let bwd = move |s: u64| {
        let c1 = get_bits(s, c1_off, c1_w);
        let c2 = get_bits(s, c2_off, c2_w);
        if c1 >= big || c2 >= small {
            return s;
        }
        let (c1, c2) = untick(c1, c2, big, small);
        let s = apply_b(s, c1, c2, &g_back, false);
        set_bits(set_bits(s, c1_off, c1_w, c1), c2_off, c2_w, c2)
    };

    let outputs = oc.outputs.clone();
    let extract: Extract = Arc::new(move |st: &Bitstring| {
        let v = st.to_u64();
        let bits: Vec<bool> = outputs.iter().map(|&w| wire(v, w)).collect();
        Bitstring::from_bools(&bits)
    });
    let g = Bijection::from_words(width, format!("oracle-circuit[{}]", g_oracle.label()), fwd)
        .with_backward_words(bwd);
    Ok(Schedule {
        g,
        total_iterations: BigUint::from(big) * BigUint::from(small),
        start: Bitstring::zeros(width),
        layout,
        extract,
    })
}

/// Compiles `oc` and places `input` on its input wires.
pub fn oracle_schedule(
    oc: &OracleCircuit,
    g_oracle: &Bijection,
    input: &Bitstring,
) -> Result<Schedule, ReductionError> {
    if input.width() != oc.inputs {
        return Err(KernelError::WidthMismatch {
            expected: oc.inputs,
            got: input.width(),
        }
        .into());
    }
    let mut s = compile_oracle_circuit(oc, g_oracle)?;
    let w = s.layout.field("wires").expect("oracle layout").offset;
    let v = if oc.inputs == 0 { 0 } else { input.to_u64() << w };
    s.start = Bitstring::from_u64(v, s.layout.width());
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bijection::{check_bijection_exhaustive, identity, increment};
    use crate::random::{random_bijection, rng};
    use rand::Rng;

    fn bits(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    fn assert_bijective_both_ways(g: &Bijection) {
        assert!(check_bijection_exhaustive(g).unwrap().is_bijective(), "{}", g.label());
        for x in 0..1u64 << g.width() {
            assert_eq!(g.forward_word(g.backward_word(x).unwrap()), x);
        }
    }

    #[test]
    fn summation_identity_and_increment() {
        let id = identity(3).forward_only();
        for x in 0..8 {
            let xb = Bitstring::from_u64(x, 3);
            assert_eq!(inversion_by_iteration(&id, &xb).unwrap().run().unwrap(), xb);
        }
        let inc = increment(2).forward_only();
        let s = inversion_by_iteration(&inc, &bits("10")).unwrap();
        assert_eq!(s.total_iterations, BigUint::from(4u32));
        assert_eq!(s.run().unwrap(), bits("11"));
    }

    #[test]
    fn summation_is_bijective_at_k3() {
        let f = random_bijection(&mut rng(1), 3).forward_only();
        for x in 0..8 {
            let s = inversion_by_iteration(&f, &Bitstring::from_u64(x, 3)).unwrap();
            assert_bijective_both_ways(&s.g);
        }
    }

    #[test]
    fn summation_width_cap() {
        let f = identity(21);
        assert!(matches!(
            inversion_by_iteration(&f, &Bitstring::zeros(21)),
            Err(ReductionError::TooWide { .. })
        ));
    }

    #[test]
    fn clock_identity_and_increment() {
        let id = identity(3).forward_only();
        for n in [0, 1, 4] {
            let s = clock_schedule(&id, n, &bits("101")).unwrap();
            assert_eq!(s.run().unwrap(), bits("101"));
        }
        let inc = increment(3).forward_only();
        let s = clock_schedule(&inc, 5, &bits("000")).unwrap();
        assert_eq!(s.total_iterations, BigUint::from(5u32 * 11));
        assert_eq!(s.run().unwrap(), bits("101"));
    }

    #[test]
    fn clock_is_bijective_at_k2() {
        let f = random_bijection(&mut rng(2), 2).forward_only();
        for n in [1, 3, 6] {
            let s = compile_iteration_to_invertible(&f, n).unwrap();
            assert_bijective_both_ways(&s.g);
        }
    }

    #[test]
    fn clock_matches_direct_iteration() {
        let mut r = rng(3);
        for _ in 0..20 {
            let k = r.gen_range(1..=4);
            let f = random_bijection(&mut r, k);
            let n = r.gen_range(0..=20);
            let x = Bitstring::from_u64(r.gen_range(0..1 << k), k);
            let s = clock_schedule(&f.clone().forward_only(), n, &x).unwrap();
            assert_eq!(s.run().unwrap(), bijection::iterate_u64(&f, n, &x).unwrap());
        }
    }

    #[test]
    fn clock_discipline() {
        let f = random_bijection(&mut rng(4), 2).forward_only();
        let s = clock_schedule(&f, 3, &bits("10")).unwrap();
        let (big, small) = (4, clock_period(2));
        let mut prev: Option<(u64, u64)> = None;
        for st in s.trace() {
            let c1 = s.layout.get(st, "c1");
            let c2 = s.layout.get(st, "c2");
            assert!(c1 < big && c2 < small);
            if let Some((p1, p2)) = prev {
                if c2 == 0 {
                    assert_eq!((p2, c1), (small - 1, (p1 + 1) % big));
                } else {
                    assert_eq!((p1, p2 + 1), (c1, c2));
                }
            }
            prev = Some((c1, c2));
        }
    }

    #[test]
    fn malformed_clock_states_are_fixed() {
        let s = compile_iteration_to_invertible(&identity(2), 1).unwrap();
        let c2 = s.layout.field("c2").unwrap();
        let bad = set_bits(0, c2.offset, c2.width, clock_period(2));
        assert_eq!(s.g.forward_word(bad), bad);
    }

    fn xor_gate(out: usize, a: usize, b: usize) -> OracleStep {
        OracleStep::Gate(ClassicalGate {
            op: ClassicalOp::Xor,
            out,
            ins: vec![a, b],
        })
    }

    #[test]
    fn oracle_empty_circuit() {
        let oc = OracleCircuit::new(3, vec![], vec![0, 1, 2]).unwrap();
        let g = increment(2);
        let s = oracle_schedule(&oc, &g, &bits("110")).unwrap();
        assert_eq!(s.run().unwrap(), bits("110"));
    }

    #[test]
    fn oracle_single_gate_g_cubed() {
        // inputs: s = wires 0..2, n = wires 2..4 (set to 3); output t = wires 4..6
        let oc = OracleCircuit::new(
            4,
            vec![OracleStep::Oracle {
                n: vec![2, 3],
                s: vec![0, 1],
                t: vec![4, 5],
            }],
            vec![4, 5],
        )
        .unwrap();
        let g = increment(2);
        for x in 0..4u64 {
            let input = Bitstring::from_u64(x | 3 << 2, 4);
            let s = oracle_schedule(&oc, &g, &input).unwrap();
            let expect = Bitstring::from_u64((x + 3) % 4, 2);
            assert_eq!(s.run().unwrap(), expect);
            assert_eq!(oc.eval(&g, &input).unwrap(), expect);
        }
    }

    #[test]
    fn oracle_xor_feeding_oracle() {
        // w4 = w0 ^ w1; t = g^(w3 w2)(w4 w0)
        let oc = OracleCircuit::new(
            4,
            vec![
                xor_gate(4, 0, 1),
                OracleStep::Oracle {
                    n: vec![2, 3],
                    s: vec![4, 0],
                    t: vec![5, 6],
                },
            ],
            vec![5, 6, 4],
        )
        .unwrap();
        let g = random_bijection(&mut rng(5), 2).forward_only();
        for x in 0..16u64 {
            let input = Bitstring::from_u64(x, 4);
            let w4 = (x ^ x >> 1) & 1;
            let arg = Bitstring::from_u64(w4 | (x & 1) << 1, 2);
            let t = bijection::iterate_u64(&g, x >> 2, &arg).unwrap().to_u64();
            let expect = Bitstring::from_u64(t | w4 << 2, 3);
            assert_eq!(oracle_schedule(&oc, &g, &input).unwrap().run().unwrap(), expect);
        }
    }

    #[test]
    fn oracle_map_is_bijective() {
        let oc = OracleCircuit::new(
            3,
            vec![
                xor_gate(3, 0, 1),
                OracleStep::Oracle {
                    n: vec![2],
                    s: vec![3, 0],
                    t: vec![4, 5],
                },
            ],
            vec![4, 5],
        )
        .unwrap();
        let g = random_bijection(&mut rng(6), 2).forward_only();
        let s = compile_oracle_circuit(&oc, &g).unwrap();
        assert_bijective_both_ways(&s.g);
    }

    #[test]
    fn oracle_rejects_mismatched_width() {
        let oc = OracleCircuit::new(
            3,
            vec![OracleStep::Oracle {
                n: vec![2],
                s: vec![0, 1],
                t: vec![3, 4],
            }],
            vec![3],
        )
        .unwrap();
        assert!(matches!(
            compile_oracle_circuit(&oc, &increment(3)),
            Err(ReductionError::OracleWidth { .. })
        ));
        assert!(OracleCircuit::new(1, vec![xor_gate(1, 0, 2)], vec![1]).is_err());
    }
}

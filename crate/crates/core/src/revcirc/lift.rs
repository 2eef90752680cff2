use std::collections::BTreeSet;

use super::{ClassicalCircuit, ClassicalOp, Gate, ReversibleCircuit, RevError};
use crate::bits::Bitstring;

/// Upper bound on reversible gates emitted per classical gate by the Bennett
/// encoding (OR takes two CNOTs and a Toffoli).
pub const BENNETT_GATES_PER_GATE: usize = 3;

/// Widest bijection whose mutual-inverse precondition [`jms_lift`] checks exhaustively.
pub const MAX_JMS_CHECK_WIDTH: usize = 12;

/// A reversible circuit simulating an irreversible one, together with its
/// wire layout. Inputs sit on the low wires; the `pad_len` wires above them
/// start at zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftResult {
    pub circuit: ReversibleCircuit,
    pub pad_len: usize,
    pub input_wires: Vec<usize>,
    pub output_wires: Vec<usize>,
    pub garbage_wires: Vec<usize>,
}

impl LiftResult {
    pub fn payload_width(&self) -> usize {
        self.input_wires.len()
    }

    /// `x` on the input wires, zero everywhere else.
    pub fn embed(&self, x: &Bitstring) -> Bitstring {
        assert_eq!(x.width(), self.input_wires.len());
        let mut s = Bitstring::zeros(self.circuit.width());
        for (i, &w) in self.input_wires.iter().enumerate() {
            s.set(w, x.get(i));
        }
        s
    }

    pub fn extract(&self, state: &Bitstring) -> Bitstring {
        let out: Vec<bool> = self.output_wires.iter().map(|&w| state.get(w)).collect();
        Bitstring::from_bools(&out)
    }

    pub fn run(&self, x: &Bitstring) -> Bitstring {
        let state = self.circuit.eval(&self.embed(x)).expect("embed has circuit width");
        self.extract(&state)
    }

    /// True when every wire outside the payload outputs and garbage is zero.
    pub fn padding_is_clear(&self, state: &Bitstring) -> bool {
        let keep: BTreeSet<usize> = self
            .output_wires
            .iter()
            .chain(&self.garbage_wires)
            .chain(&self.input_wires)
            .copied()
            .collect();
        (0..state.width()).all(|w| keep.contains(&w) || !state.get(w))
    }
}

/// Reversible gates computing `c` when its inputs live on `input_map` and
/// gate `j` writes fresh ancilla `ancilla_base + j`. Returns the gates and
/// the reversible wire holding each classical wire.
fn bennett_gates(
    c: &ClassicalCircuit,
    input_map: &[usize],
    ancilla_base: usize,
) -> (Vec<Gate>, Vec<usize>) {
    let mut at = vec![usize::MAX; c.wire_count()];
    at[..c.inputs()].copy_from_slice(input_map);
    let mut gates = Vec::with_capacity(c.gates().len() * BENNETT_GATES_PER_GATE);
    for (j, g) in c.gates().iter().enumerate() {
        let t = ancilla_base + j;
        let a = at[g.ins[0]];
        let b = g.ins.get(1).map(|&i| at[i]);
        match (g.op, b) {
            (ClassicalOp::And, Some(b)) if a != b => gates.push(Gate::Toffoli { c1: a, c2: b, target: t }),
            (ClassicalOp::Or, Some(b)) if a != b => gates.extend([
                Gate::Cnot { control: a, target: t },
                Gate::Cnot { control: b, target: t },
                Gate::Toffoli { c1: a, c2: b, target: t },
            ]),
            (ClassicalOp::And | ClassicalOp::Or | ClassicalOp::Copy, _) => {
                gates.push(Gate::Cnot { control: a, target: t })
            }
            (ClassicalOp::Xor, Some(b)) => gates.extend([
                Gate::Cnot { control: a, target: t },
                Gate::Cnot { control: b, target: t },
            ]),
            (ClassicalOp::Not, _) => {
                gates.extend([Gate::Cnot { control: a, target: t }, Gate::Not(t)])
            }
            (ClassicalOp::Xor, None) => unreachable!("arity checked at construction"),
        }
        at[g.out] = t;
    }
    (gates, at)
}

/// Bennett-style embedding: one fresh zero ancilla per classical gate.
/// Inputs are left in place; ancillas that are not designated outputs are garbage.
pub fn bennett_lift(c: &ClassicalCircuit) -> LiftResult {
    let k = c.inputs();
    let g = c.gates().len();
    let input_map: Vec<usize> = (0..k).collect();
    let (gates, at) = bennett_gates(c, &input_map, k);
    let output_wires: Vec<usize> = c.outputs().iter().map(|&o| at[o]).collect();
    let outs: BTreeSet<usize> = output_wires.iter().copied().collect();
    let garbage_wires = (k..k + g).filter(|w| !outs.contains(w)).collect();
    LiftResult {
        circuit: ReversibleCircuit::new(k + g, gates).expect("ancillas are in range"),
        pad_len: g,
        input_wires: input_map,
        output_wires,
        garbage_wires,
    }
}

/// Garbage-free lift of a bijection given by circuits for `f` and `f^{-1}`.
///
/// Registers: payload `X` on wires `0..k`, copy register `A` on `k..2k`, and
/// shared Bennett workspace `W` above. The nine steps are
/// `A ^= X`, compute `f(A)`, `X ^= f(A)`, uncompute, `A ^= X`,
/// compute `f^{-1}(A)`, `X ^= f^{-1}(A)`, uncompute, `A ^= X`,
/// which leaves `f(x)` in `X` and every other wire zero.
pub fn jms_lift(cf: &ClassicalCircuit, cfi: &ClassicalCircuit) -> Result<LiftResult, RevError> {
    let k = cf.inputs();
    for (name, c) in [("forward", cf), ("inverse", cfi)] {
        if c.inputs() != k || c.outputs().len() != k {
            return Err(RevError::Classical(format!(
                "{name} circuit must map {k} bits to {k} bits, has {} inputs and {} outputs",
                c.inputs(),
                c.outputs().len()
            )));
        }
    }
    if k <= MAX_JMS_CHECK_WIDTH {
        for x in 0..1u64 << k {
            if cfi.eval_word(cf.eval_word(x)) != x {
                return Err(RevError::NotInverse {
                    input: Bitstring::from_u64(x, k).to_string(),
                });
            }
        }
    }

    let a_reg: Vec<usize> = (k..2 * k).collect();
    let w_base = 2 * k;
    let w_len = cf.gates().len().max(cfi.gates().len());
    let copy_x_into_a: Vec<Gate> = (0..k)
        .map(|i| Gate::Cnot { control: i, target: k + i })
        .collect();

    let mut gates = Vec::new();
    gates.extend_from_slice(&copy_x_into_a);
    for c in [cf, cfi] {
        let (compute, at) = bennett_gates(c, &a_reg, w_base);
        gates.extend_from_slice(&compute);
        gates.extend(
            c.outputs()
                .iter()
                .enumerate()
                .map(|(i, &o)| Gate::Cnot { control: at[o], target: i }),
        );
        gates.extend(compute.iter().rev().copied());
        gates.extend_from_slice(&copy_x_into_a);
    }

    let payload: Vec<usize> = (0..k).collect();
    Ok(LiftResult {
        circuit: ReversibleCircuit::new(w_base + w_len, gates)?,
        pad_len: k + w_len,
        input_wires: payload.clone(),
        output_wires: payload,
        garbage_wires: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::revcirc::ClassicalGate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gate(op: ClassicalOp, out: usize, ins: &[usize]) -> ClassicalGate {
        ClassicalGate {
            op,
            out,
            ins: ins.to_vec(),
        }
    }

    fn assert_bennett_matches(c: &ClassicalCircuit) {
        let lift = bennett_lift(c);
        assert!(lift.circuit.len() <= BENNETT_GATES_PER_GATE * c.gates().len());
        for x in 0..1u64 << c.inputs() {
            let xb = Bitstring::from_u64(x, c.inputs());
            assert_eq!(lift.run(&xb), c.eval(&xb).unwrap(), "input {xb}");
        }
    }

    #[test]
    fn bennett_single_and() {
        let c = ClassicalCircuit::new(2, vec![gate(ClassicalOp::And, 2, &[0, 1])], vec![2]).unwrap();
        assert_bennett_matches(&c);
    }

    #[test]
    fn bennett_not_has_no_garbage() {
        let c = ClassicalCircuit::new(1, vec![gate(ClassicalOp::Not, 1, &[0])], vec![1]).unwrap();
        assert!(bennett_lift(&c).garbage_wires.is_empty());
        assert_bennett_matches(&c);
    }

    #[test]
    fn bennett_xor_chain_and_adder() {
        let chain = ClassicalCircuit::new(
            3,
            vec![
                gate(ClassicalOp::Xor, 3, &[0, 1]),
                gate(ClassicalOp::Xor, 4, &[3, 2]),
                gate(ClassicalOp::Xor, 5, &[4, 0]),
            ],
            vec![5],
        )
        .unwrap();
        assert_bennett_matches(&chain);
        assert_eq!(bennett_lift(&chain).garbage_wires, vec![3, 4]);

        let adder = ClassicalCircuit::new(
            3,
            vec![
                gate(ClassicalOp::Xor, 3, &[0, 1]),
                gate(ClassicalOp::Xor, 4, &[3, 2]),
                gate(ClassicalOp::And, 5, &[0, 1]),
                gate(ClassicalOp::And, 6, &[3, 2]),
                gate(ClassicalOp::Or, 7, &[5, 6]),
                gate(ClassicalOp::Or, 8, &[7, 7]),
                gate(ClassicalOp::Copy, 9, &[2]),
            ],
            vec![4, 8, 9],
        )
        .unwrap();
        assert_bennett_matches(&adder);
    }

    fn assert_jms(lift: &LiftResult, f: impl Fn(u64) -> u64, k: usize, xs: impl Iterator<Item = u64>) {
        assert!(lift.garbage_wires.is_empty());
        assert_eq!(lift.circuit.width(), k + lift.pad_len);
        let inv = lift.circuit.inverse();
        for x in xs {
            let padded = Bitstring::from_u64(x, k).pad(lift.pad_len);
            let out = lift.circuit.eval(&padded).unwrap();
            assert_eq!(out, Bitstring::from_u64(f(x), k).pad(lift.pad_len), "x = {x}");
            assert_eq!(inv.eval(&out).unwrap(), padded);
        }
    }

    #[test]
    fn jms_identity() {
        let id = ClassicalCircuit::from_reversible(&ReversibleCircuit::empty(3));
        let lift = jms_lift(&id, &id).unwrap();
        assert_jms(&lift, |x| x, 3, 0..8);
    }

    #[test]
    fn jms_increment() {
        let inc: Vec<u64> = (0..8).map(|x| (x + 1) % 8).collect();
        let dec: Vec<u64> = (0..8).map(|x| (x + 7) % 8).collect();
        let cf = ClassicalCircuit::from_truth_table(3, 3, &inc).unwrap();
        let cfi = ClassicalCircuit::from_truth_table(3, 3, &dec).unwrap();
        let lift = jms_lift(&cf, &cfi).unwrap();
        assert_jms(&lift, |x| (x + 1) % 8, 3, 0..8);
    }

    #[test]
    fn jms_rotation_keeps_padding_zero() {
        let rot = ReversibleCircuit::new(8, (0..7).map(|i| Gate::Swap(i, i + 1)).rev().collect())
            .unwrap();
        let cf = ClassicalCircuit::from_reversible(&rot);
        let cfi = ClassicalCircuit::from_reversible(&rot.inverse());
        let lift = jms_lift(&cf, &cfi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let xs: Vec<u64> = (0..100).map(|_| rng.gen_range(0..256)).collect();
        assert_jms(&lift, |x| rot.eval_word(x), 8, xs.into_iter());
    }

    #[test]
    fn jms_rejects_non_inverse_pair() {
        let inc: Vec<u64> = (0..4).map(|x| (x + 1) % 4).collect();
        let cf = ClassicalCircuit::from_truth_table(2, 2, &inc).unwrap();
        assert!(matches!(jms_lift(&cf, &cf), Err(RevError::NotInverse { .. })));
    }
}

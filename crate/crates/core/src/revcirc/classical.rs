use std::fmt;

use super::{Gate, ReversibleCircuit, RevError};
use crate::bits::Bitstring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicalOp {
    And,
    Or,
    Xor,
    Not,
    Copy,
}

impl ClassicalOp {
    pub fn arity(self) -> usize {
        match self {
            ClassicalOp::And | ClassicalOp::Or | ClassicalOp::Xor => 2,
            ClassicalOp::Not | ClassicalOp::Copy => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassicalOp::And => "and",
            ClassicalOp::Or => "or",
            ClassicalOp::Xor => "xor",
            ClassicalOp::Not => "not",
            ClassicalOp::Copy => "copy",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "and" => ClassicalOp::And,
            "or" => ClassicalOp::Or,
            "xor" => ClassicalOp::Xor,
            "not" => ClassicalOp::Not,
            "copy" => ClassicalOp::Copy,
            _ => return None,
        })
    }

    fn eval(self, ins: &[bool]) -> bool {
        match self {
            ClassicalOp::And => ins[0] & ins[1],
            ClassicalOp::Or => ins[0] | ins[1],
            ClassicalOp::Xor => ins[0] ^ ins[1],
            ClassicalOp::Not => !ins[0],
            ClassicalOp::Copy => ins[0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassicalGate {
    pub op: ClassicalOp,
    pub out: usize,
    pub ins: Vec<usize>,
}

impl fmt::Display for ClassicalGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.op.name(), self.out)?;
        for i in &self.ins {
            write!(f, " {i}")?;
        }
        Ok(())
    }
}

/// An acyclic circuit of irreversible gates. Wires `0..inputs` are the
/// inputs; every gate writes one fresh wire and may only read wires that
/// were written earlier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalCircuit {
    inputs: usize,
    gates: Vec<ClassicalGate>,
    outputs: Vec<usize>,
    wires: usize,
}

impl ClassicalCircuit {
    pub fn new(
        inputs: usize,
        gates: Vec<ClassicalGate>,
        outputs: Vec<usize>,
    ) -> Result<Self, RevError> {
        let mut wires = inputs;
        for g in &gates {
            wires = wires.max(g.out + 1);
        }
        let mut defined = vec![false; wires];
        defined[..inputs].fill(true);
        for (index, g) in gates.iter().enumerate() {
            if g.ins.len() != g.op.arity() {
                return Err(RevError::Classical(format!(
                    "gate {index} ({}) expects {} inputs, got {}",
                    g.op.name(),
                    g.op.arity(),
                    g.ins.len()
                )));
            }
            for &i in &g.ins {
                if i >= wires || !defined[i] {
                    return Err(RevError::Classical(format!(
                        "gate {index} reads wire {i} before it is written"
                    )));
                }
            }
            if defined[g.out] {
                return Err(RevError::Classical(format!(
                    "gate {index} writes wire {} which already has a value",
                    g.out
                )));
            }
            defined[g.out] = true;
        }
        for &o in &outputs {
            if o >= wires || !defined[o] {
                return Err(RevError::Classical(format!("output wire {o} is never written")));
            }
        }
        Ok(ClassicalCircuit {
            inputs,
            gates,
            outputs,
            wires,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn gates(&self) -> &[ClassicalGate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// One more than the largest wire id in use.
    pub fn wire_count(&self) -> usize {
        self.wires
    }

    pub fn eval(&self, input: &Bitstring) -> Result<Bitstring, RevError> {
        if input.width() != self.inputs {
            return Err(RevError::WidthMismatch {
                expected: self.inputs,
                got: input.width(),
            });
        }
        let mut vals = vec![false; self.wires];
        for (i, v) in vals.iter_mut().enumerate().take(self.inputs) {
            *v = input.get(i);
        }
        let mut ins = [false; 2];
        for g in &self.gates {
            for (slot, &w) in ins.iter_mut().zip(&g.ins) {
                *slot = vals[w];
            }
            vals[g.out] = g.op.eval(&ins[..g.ins.len()]);
        }
        let out: Vec<bool> = self.outputs.iter().map(|&o| vals[o]).collect();
        Ok(Bitstring::from_bools(&out))
    }

    pub fn eval_word(&self, x: u64) -> u64 {
        let out = self
            .eval(&Bitstring::from_u64(x, self.inputs))
            .expect("width matches by construction");
        out.to_u64()
    }

    /// Sum-of-minterms circuit for a `k`-input, `m`-output truth table.
    /// `table[x]` holds the output word for input `x`.
    pub fn from_truth_table(k: usize, m: usize, table: &[u64]) -> Result<Self, RevError> {
        if k == 0 || table.len() != 1 << k {
            return Err(RevError::Classical(format!(
                "truth table for {k} inputs needs {} rows",
                1usize << k
            )));
        }
        let mut b = Builder::new(k);
        let neg: Vec<usize> = (0..k).map(|i| b.push(ClassicalOp::Not, &[i])).collect();
        let mut minterms = Vec::with_capacity(table.len());
        for x in 0..table.len() {
            let lit = |i: usize| if x >> i & 1 == 1 { i } else { neg[i] };
            let mut acc = if k == 1 {
                b.push(ClassicalOp::Copy, &[lit(0)])
            } else {
                lit(0)
            };
            for i in 1..k {
                acc = b.push(ClassicalOp::And, &[acc, lit(i)]);
            }
            minterms.push(acc);
        }
        let zero = b.push(ClassicalOp::Xor, &[0, 0]);
        let mut outputs = Vec::with_capacity(m);
        for j in 0..m {
            let mut acc: Option<usize> = None;
            for (x, &mt) in minterms.iter().enumerate() {
                if table[x] >> j & 1 == 1 {
                    acc = Some(match acc {
                        None => mt,
                        Some(a) => b.push(ClassicalOp::Xor, &[a, mt]),
                    });
                }
            }
            outputs.push(acc.unwrap_or(zero));
        }
        ClassicalCircuit::new(k, b.gates, outputs)
    }

    /// Gate-by-gate translation of a reversible circuit; its outputs are the
    /// final wire values in wire order.
    pub fn from_reversible(c: &ReversibleCircuit) -> Self {
        let mut b = Builder::new(c.width());
        let mut cur: Vec<usize> = (0..c.width()).collect();
        for g in c.gates() {
            match *g {
                Gate::Not(t) => cur[t] = b.push(ClassicalOp::Not, &[cur[t]]),
                Gate::Swap(x, y) => cur.swap(x, y),
                Gate::Cnot { control, target } => {
                    cur[target] = b.push(ClassicalOp::Xor, &[cur[control], cur[target]])
                }
                Gate::Toffoli { c1, c2, target } => {
                    let u = b.push(ClassicalOp::And, &[cur[c1], cur[c2]]);
                    cur[target] = b.push(ClassicalOp::Xor, &[u, cur[target]]);
                }
                Gate::Fredkin { control, a, b: bw } => {
                    let d = b.push(ClassicalOp::Xor, &[cur[a], cur[bw]]);
                    let e = b.push(ClassicalOp::And, &[cur[control], d]);
                    cur[a] = b.push(ClassicalOp::Xor, &[cur[a], e]);
                    cur[bw] = b.push(ClassicalOp::Xor, &[cur[bw], e]);
                }
            }
        }
        ClassicalCircuit::new(c.width(), b.gates, cur).expect("translation is well formed")
    }
}

struct Builder {
    next: usize,
    gates: Vec<ClassicalGate>,
}

impl Builder {
    fn new(inputs: usize) -> Self {
        Builder {
            next: inputs,
            gates: Vec::new(),
        }
    }

    fn push(&mut self, op: ClassicalOp, ins: &[usize]) -> usize {
        let out = self.next;
        self.next += 1;
        self.gates.push(ClassicalGate {
            op,
            out,
            ins: ins.to_vec(),
        });
        out
    }
}

use std::fmt;

use crate::bits::Bitstring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Not,
    Swap,
    Cnot,
    Toffoli,
    Fredkin,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Not => 1,
            GateKind::Swap | GateKind::Cnot => 2,
            GateKind::Toffoli | GateKind::Fredkin => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Not => "not",
            GateKind::Swap => "swap",
            GateKind::Cnot => "cnot",
            GateKind::Toffoli => "toffoli",
            GateKind::Fredkin => "fredkin",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        Some(match name {
            "not" => GateKind::Not,
            "swap" => GateKind::Swap,
            "cnot" => GateKind::Cnot,
            "toffoli" => GateKind::Toffoli,
            "fredkin" => GateKind::Fredkin,
            _ => return None,
        })
    }

    pub const ALL: [GateKind; 5] = [
        GateKind::Not,
        GateKind::Swap,
        GateKind::Cnot,
        GateKind::Toffoli,
        GateKind::Fredkin,
    ];
}

/// A reversible gate. Every kind is an involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Not(usize),
    Swap(usize, usize),
    Cnot { control: usize, target: usize },
    Toffoli { c1: usize, c2: usize, target: usize },
    /// Swaps `a` and `b` when `control` is set.
    Fredkin { control: usize, a: usize, b: usize },
}

impl Gate {
    /// Builds a gate from its kind and wire list, in the order used by the
    /// text format (`toffoli c1 c2 target`, `fredkin control a b`).
    pub fn from_wires(kind: GateKind, wires: &[usize]) -> Option<Gate> {
        if wires.len() != kind.arity() {
            return None;
        }
        Some(match kind {
            GateKind::Not => Gate::Not(wires[0]),
            GateKind::Swap => Gate::Swap(wires[0], wires[1]),
            GateKind::Cnot => Gate::Cnot {
                control: wires[0],
                target: wires[1],
            },
            GateKind::Toffoli => Gate::Toffoli {
                c1: wires[0],
                c2: wires[1],
                target: wires[2],
            },
            GateKind::Fredkin => Gate::Fredkin {
                control: wires[0],
                a: wires[1],
                b: wires[2],
            },
        })
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Not(_) => GateKind::Not,
            Gate::Swap(..) => GateKind::Swap,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Toffoli { .. } => GateKind::Toffoli,
            Gate::Fredkin { .. } => GateKind::Fredkin,
        }
    }

    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Gate::Not(t) => vec![t],
            Gate::Swap(a, b) => vec![a, b],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Toffoli { c1, c2, target } => vec![c1, c2, target],
            Gate::Fredkin { control, a, b } => vec![control, a, b],
        }
    }

    pub fn arity(&self) -> usize {
        self.kind().arity()
    }

    pub fn apply(&self, s: &mut Bitstring) {
        match *self {
            Gate::Not(t) => s.flip(t),
            Gate::Swap(a, b) => s.swap_bits(a, b),
            Gate::Cnot { control, target } => {
                if s.get(control) {
                    s.flip(target);
                }
            }
            Gate::Toffoli { c1, c2, target } => {
                if s.get(c1) && s.get(c2) {
                    s.flip(target);
                }
            }
            Gate::Fredkin { control, a, b } => {
                if s.get(control) {
                    s.swap_bits(a, b);
                }
            }
        }
    }

    pub fn apply_word(&self, x: u64) -> u64 {
        let bit = |i: usize| x >> i & 1;
        let swap = |x: u64, a: usize, b: usize| {
            if bit(a) != bit(b) {
                x ^ (1 << a) ^ (1 << b)
            } else {
                x
            }
        };
        match *self {
            Gate::Not(t) => x ^ (1 << t),
            Gate::Swap(a, b) => swap(x, a, b),
            Gate::Cnot { control, target } => x ^ (bit(control) << target),
            Gate::Toffoli { c1, c2, target } => x ^ ((bit(c1) & bit(c2)) << target),
            Gate::Fredkin { control, a, b } => {
                if bit(control) == 1 {
                    swap(x, a, b)
                } else {
                    x
                }
            }
        }
    }

    /// Truth table on the gate's own wires: bit `i` of the argument is the
    /// value on `self.wires()[i]`.
    pub fn local_truth_table(&self) -> Vec<u64> {
        let arity = self.arity();
        let local = match self.kind() {
            GateKind::Not => Gate::Not(0),
            GateKind::Swap => Gate::Swap(0, 1),
            GateKind::Cnot => Gate::Cnot {
                control: 0,
                target: 1,
            },
            GateKind::Toffoli => Gate::Toffoli {
                c1: 0,
                c2: 1,
                target: 2,
            },
            GateKind::Fredkin => Gate::Fredkin {
                control: 0,
                a: 1,
                b: 2,
            },
        };
        (0..1u64 << arity).map(|v| local.apply_word(v)).collect()
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())?;
        for w in self.wires() {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_kind_is_an_involution_and_a_bijection() {
        for kind in GateKind::ALL {
            let wires: Vec<usize> = (0..kind.arity()).collect();
            let g = Gate::from_wires(kind, &wires).unwrap();
            let table = g.local_truth_table();
            let mut sorted = table.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..table.len() as u64).collect::<Vec<_>>());
            for v in 0..table.len() {
                assert_eq!(table[table[v] as usize], v as u64, "{kind:?}");
            }
        }
    }

    #[test]
    fn word_and_bit_paths_agree() {
        let gates = [
            Gate::Not(2),
            Gate::Swap(0, 3),
            Gate::Cnot { control: 1, target: 0 },
            Gate::Toffoli { c1: 3, c2: 1, target: 2 },
            Gate::Fredkin { control: 0, a: 2, b: 3 },
        ];
        for g in gates {
            for x in 0..16u64 {
                let mut b = Bitstring::from_u64(x, 4);
                g.apply(&mut b);
                assert_eq!(b.to_u64(), g.apply_word(x), "{g}");
            }
        }
    }
}

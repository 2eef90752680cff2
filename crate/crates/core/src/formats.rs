//! Line-oriented text formats. `#` starts a comment; blank lines are ignored.
//!
//! | kind      | header          | body lines                                   |
//! |-----------|-----------------|----------------------------------------------|
//! | circuit   | `wires W`       | `toffoli 0 1 2`, `cnot 0 1`, `not 3`, ...    |
//! | classical | `inputs K`      | `and out a b`, ..., then `outputs w1 w2 ...` |
//! | grid      | `bbm W H phase` | `H` rows of `.` and `#`                      |
//! | plb       | `plb N`         | `piece lo hi mult off`                       |
//! | iet       | `iet N`         | `piece lo hi off`                            |
//! | cubic     | `cubic V`       | `edge u v`                                   |
//!
//! Classical circuits may also contain oracle calls,
//! `oracle n <wires> s <wires> t <wires>`, which makes them oracle circuits.

use std::collections::{HashMap, HashSet};
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ca::{Boundary, MargolusGrid, Phase};
use crate::graphs::CubicGraph;
use crate::plb::{validate_plb, Piece, Plb};
use crate::reductions::{OracleCircuit, OracleStep};
use crate::revcirc::{ClassicalCircuit, ClassicalGate, ClassicalOp, Gate, GateKind, ReversibleCircuit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num<T: FromStr>(line: usize, tok: &str) -> Result<T, FormatError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected a number, found `{tok}`")))
}

fn header<'a, I>(it: &mut I, keyword: &str, args: usize) -> Result<(usize, Vec<&'a str>), FormatError>
where
    I: Iterator<Item = (usize, Vec<&'a str>)>,
{
    let (line, toks) = it
        .next()
        .ok_or_else(|| FormatError::Invalid(format!("empty input, expected `{keyword}`")))?;
    if toks[0] != keyword || toks.len() < args + 1 {
        return Err(syntax(line, format!("expected `{keyword}` header with {args} argument(s)")));
    }
    Ok((line, toks[1..].to_vec()))
}

pub fn parse_circuit(text: &str) -> Result<ReversibleCircuit, FormatError> {
    let mut it = lines(text);
    let (line, args) = header(&mut it, "wires", 1)?;
    let width: usize = num(line, args[0])?;
    let mut gates = Vec::new();
    for (line, toks) in it {
        let kind = GateKind::from_name(toks[0]).ok_or_else(|| syntax(line, format!("unknown gate `{}`", toks[0])))?;
        let wires = toks[1..]
            .iter()
            .map(|t| num(line, t))
            .collect::<Result<Vec<usize>, _>>()?;
        let gate = Gate::from_wires(kind, &wires).ok_or_else(|| syntax(line, format!("{} takes {} wires", kind.name(), kind.arity())))?;
        gates.push(gate);
    }
    ReversibleCircuit::new(width, gates).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn write_circuit(c: &ReversibleCircuit) -> String {
    let mut out = format!("wires {}\n", c.width());
    for g in c.gates() {
        out.push_str(&format!("{g}\n"));
    }
    out
}

fn wire_list(line: usize, toks: &[&str]) -> Result<Vec<usize>, FormatError> {
    toks.iter().map(|t| num(line, t)).collect()
}

fn parse_oracle_call(line: usize, toks: &[&str]) -> Result<OracleStep, FormatError> {
    let mut groups: [Vec<usize>; 3] = Default::default();
    let mut current: Option<usize> = None;
    for &t in toks {
        match t {
            "n" => current = Some(0),
            "s" => current = Some(1),
            "t" => current = Some(2),
            _ => {
                let g = current.ok_or_else(|| syntax(line, "oracle wires must follow `n`, `s` or `t`"))?;
                groups[g].push(num(line, t)?);
            }
        }
    }
    let [n, s, t] = groups;
    Ok(OracleStep::Oracle { n, s, t })
}

/// Steps and outputs of a classical or oracle circuit.
fn parse_steps(text: &str) -> Result<(usize, Vec<OracleStep>, Vec<usize>), FormatError> {
    let mut it = lines(text);
    let (line, args) = header(&mut it, "inputs", 1)?;
    let inputs: usize = num(line, args[0])?;
    let mut steps = Vec::new();
    let mut outputs = None;
    for (line, toks) in it {
        if outputs.is_some() {
            return Err(syntax(line, "nothing may follow `outputs`"));
        }
        match toks[0] {
            "outputs" => outputs = Some(wire_list(line, &toks[1..])?),
            "oracle" => steps.push(parse_oracle_call(line, &toks[1..])?),
            name => {
                let op = ClassicalOp::from_name(name).ok_or_else(|| syntax(line, format!("unknown operation `{name}`")))?;
                if toks.len() < 2 {
                    return Err(syntax(line, "missing output wire"));
                }
                let out = num(line, toks[1])?;
                let ins = wire_list(line, &toks[2..])?;
                steps.push(OracleStep::Gate(ClassicalGate { op, out, ins }));
            }
        }
    }
    let outputs = outputs.ok_or_else(|| FormatError::Invalid("missing `outputs` line".into()))?;
    Ok((inputs, steps, outputs))
}

pub fn parse_classical(text: &str) -> Result<ClassicalCircuit, FormatError> {
    let (inputs, steps, outputs) = parse_steps(text)?;
    let gates = steps
        .into_iter()
        .map(|s| match s {
            OracleStep::Gate(g) => Ok(g),
            OracleStep::Oracle { .. } => Err(FormatError::Invalid(
                "oracle calls are not allowed in a plain classical circuit".into(),
            )),
        })
        .collect::<Result<Vec<_>, _>>()?;
    ClassicalCircuit::new(inputs, gates, outputs).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn parse_oracle_circuit(text: &str) -> Result<OracleCircuit, FormatError> {
    let (inputs, steps, outputs) = parse_steps(text)?;
    OracleCircuit::new(inputs, steps, outputs).map_err(|e| FormatError::Invalid(e.to_string()))
}

fn join(ws: &[usize]) -> String {
    ws.iter().map(|w| format!(" {w}")).collect()
}

pub fn write_classical(c: &ClassicalCircuit) -> String {
    let mut out = format!("inputs {}\n", c.inputs());
    for g in c.gates() {
        out.push_str(&format!("{g}\n"));
    }
    out.push_str(&format!("outputs{}\n", join(c.outputs())));
    out
}

pub fn write_oracle_circuit(c: &OracleCircuit) -> String {
    let mut out = format!("inputs {}\n", c.inputs());
    for s in c.steps() {
        match s {
            OracleStep::Gate(g) => out.push_str(&format!("{g}\n")),
            OracleStep::Oracle { n, s, t } => {
                out.push_str(&format!("oracle n{} s{} t{}\n", join(n), join(s), join(t)))
            }
        }
    }
    out.push_str(&format!("outputs{}\n", join(c.outputs())));
    out
}

/// Two-state grids. A trailing `helical` token on the header selects the
/// helical boundary. Since `#` is also a live cell, comments inside the grid
/// body are `#` followed by a space (or nothing), and rows hold no spaces.
pub fn parse_grid(text: &str) -> Result<MargolusGrid, FormatError> {
    let mut raw = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let is_comment = |l: &str| l.is_empty() || l == "#" || l.starts_with("# ");
    let (line, head) = raw
        .by_ref()
        .find(|(_, l)| !is_comment(l))
        .ok_or_else(|| FormatError::Invalid("empty input, expected `bbm`".into()))?;
    let args: Vec<&str> = head.split('#').next().unwrap_or("").split_whitespace().collect();
    if args.len() < 4 || args[0] != "bbm" {
        return Err(syntax(line, "expected `bbm W H phase`"));
    }
    let width: usize = num(line, args[1])?;
    let height: usize = num(line, args[2])?;
    let phase = match args[3] {
        "even" | "0" => Phase::Even,
        "odd" | "1" => Phase::Odd,
        p => return Err(syntax(line, format!("phase must be even or odd, found `{p}`"))),
    };
    let boundary = match args.get(4) {
        None | Some(&"periodic") => Boundary::Periodic,
        Some(&"helical") => Boundary::Helical,
        Some(b) => return Err(syntax(line, format!("unknown boundary `{b}`"))),
    };
    let mut cells = Vec::with_capacity(width * height);
    let mut rows = 0;
    for (line, l) in raw {
        if is_comment(l) {
            continue;
        }
        let mut parts = l.splitn(2, char::is_whitespace);
        let row = parts.next().unwrap_or("");
        if let Some(rest) = parts.next() {
            if !rest.trim_start().starts_with('#') {
                return Err(syntax(line, "rows may not contain spaces"));
            }
        }
        if row.chars().count() != width {
            return Err(syntax(line, format!("row has {} cells, expected {width}", row.chars().count())));
        }
        for ch in row.chars() {
            cells.push(match ch {
                '.' => 0,
                '#' => 1,
                _ => return Err(syntax(line, format!("unexpected cell `{ch}`"))),
            });
        }
        rows += 1;
    }
    if rows != height {
        return Err(FormatError::Invalid(format!("{rows} rows, expected {height}")));
    }
    MargolusGrid::from_cells(width, height, cells, phase, boundary).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn write_grid(g: &MargolusGrid) -> String {
    let phase = match g.phase() {
        Phase::Even => "even",
        Phase::Odd => "odd",
    };
    let boundary = match g.boundary() {
        Boundary::Periodic => "",
        Boundary::Helical => " helical",
    };
    let mut out = format!("bbm {} {} {phase}{boundary}\n", g.width(), g.height());
    for row in g.cells().chunks(g.width()) {
        out.extend(row.iter().map(|&v| if v == 0 { '.' } else { '#' }));
        out.push('\n');
    }
    out
}

/// Parses and validates a piecewise linear bijection.
pub fn parse_plb(text: &str) -> Result<Plb, FormatError> {
    let (size, pieces) = parse_plb_pieces(text)?;
    validate_plb(size, pieces).map_err(|e| FormatError::Invalid(e.to_string()))
}

/// Parses without validating, so callers can report validation failures.
pub fn parse_plb_pieces(text: &str) -> Result<(BigInt, Vec<Piece>), FormatError> {
    let mut it = lines(text);
    let (line, args) = header(&mut it, "plb", 1)?;
    let size: BigInt = num(line, args[0])?;
    let mut pieces = Vec::new();
    for (line, toks) in it {
        if toks[0] != "piece" || toks.len() != 5 {
            return Err(syntax(line, "expected `piece lo hi mult off`"));
        }
        let v: Vec<BigInt> = toks[1..].iter().map(|t| num(line, t)).collect::<Result<_, _>>()?;
        pieces.push(Piece::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()));
    }
    Ok((size, pieces))
}

pub fn write_plb(t: &Plb) -> String {
    t.to_string()
}

pub fn parse_iet(text: &str) -> Result<Plb, FormatError> {
    let mut it = lines(text);
    let (line, args) = header(&mut it, "iet", 1)?;
    let size: BigInt = num(line, args[0])?;
    let mut pieces = Vec::new();
    for (line, toks) in it {
        if toks[0] != "piece" || toks.len() != 4 {
            return Err(syntax(line, "expected `piece lo hi off`"));
        }
        let v: Vec<BigInt> = toks[1..].iter().map(|t| num(line, t)).collect::<Result<_, _>>()?;
        pieces.push(Piece::new(v[0].clone(), v[1].clone(), 1, v[2].clone()));
    }
    validate_plb(size, pieces).map_err(|e| FormatError::Invalid(e.to_string()))
}

/// Panics unless every multiplier is 1.
pub fn write_iet(t: &Plb) -> String {
    assert!(t.is_interval_exchange(), "not an interval exchange");
    let mut out = format!("iet {}\n", t.size());
    for p in t.pieces() {
        out.push_str(&format!("piece {} {} {}\n", p.lo, p.hi, p.off));
    }
    out
}

pub fn parse_cubic(text: &str) -> Result<CubicGraph, FormatError> {
    let mut it = lines(text);
    let (line, args) = header(&mut it, "cubic", 1)?;
    let n: usize = num(line, args[0])?;
    let mut edges = Vec::new();
    for (line, toks) in it {
        if toks[0] != "edge" || toks.len() != 3 {
            return Err(syntax(line, "expected `edge u v`"));
        }
        edges.push((num(line, toks[1])?, num(line, toks[2])?));
    }
    CubicGraph::new(n, edges).map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn write_cubic(g: &CubicGraph) -> String {
    let mut out = format!("cubic {}\n", g.vertex_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("edge {u} {v}\n"));
    }
    out
}

/// A max-degree-2 graph on `k`-bit vertex ids: `graph K` then `edge u v`.
pub fn parse_graph(text: &str) -> Result<(usize, Vec<(u64, u64)>), FormatError> {
    let mut it = lines(text);
    let (line, args) = header(&mut it, "graph", 1)?;
    let k: usize = num(line, args[0])?;
    if !(1..=21).contains(&k) {
        return Err(syntax(line, "vertex width must be between 1 and 21 bits"));
    }
    let mut degree: HashMap<u64, usize> = HashMap::new();
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (line, toks) in it {
        if toks[0] != "edge" || toks.len() != 3 {
            return Err(syntax(line, "expected `edge u v`"));
        }
        let (u, v): (u64, u64) = (num(line, toks[1])?, num(line, toks[2])?);
        if u >> k != 0 || v >> k != 0 {
            return Err(syntax(line, format!("vertex ids must fit in {k} bits")));
        }
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            return Err(syntax(line, "loops and repeated edges are not allowed"));
        }
        for x in [u, v] {
            let d = degree.entry(x).or_insert(0);
            *d += 1;
            if *d > 2 {
                return Err(syntax(line, format!("vertex {x} has degree above 2")));
            }
        }
        edges.push((u, v));
    }
    Ok((k, edges))
}

pub fn write_graph(k: usize, edges: &[(u64, u64)]) -> String {
    let mut out = format!("graph {k}\n");
    for (u, v) in edges {
        out.push_str(&format!("edge {u} {v}\n"));
    }
    out
}

/// A cycle or path written as vertices on one line.
pub fn parse_vertex_list(text: &str) -> Result<Vec<usize>, FormatError> {
    let mut it = lines(text);
    let (line, toks) = it.next().ok_or_else(|| FormatError::Invalid("empty vertex list".into()))?;
    if let Some((extra, _)) = it.next() {
        return Err(syntax(extra, "a vertex list fits on one line"));
    }
    wire_list(line, &toks)
}

pub fn write_vertex_list(vs: &[usize]) -> String {
    let s: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    s.join(" ") + "\n"
}

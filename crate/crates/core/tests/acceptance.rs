//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every random choice is seeded.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::Pow;
use rand::seq::SliceRandom;
use rand::Rng;

use ibx_core::bijection::{check_bijection_exhaustive, Bijection};
use ibx_core::ca::{bbm_rule, dim_redux_compile, Boundary, MargolusGrid, MargolusRule, Phase, StrobeAutomaton};
use ibx_core::graphs::{self, CubicGraph};
use ibx_core::iet::{build_surface, cycle_oracle, four_interval_example, interval_exchange, max_distinct_gaps};
use ibx_core::implicit::{
    count_ham_cycles_through_edge, ham_cycles_through_edge, leaf_start, leaf_to_bijection, leaf_v,
    second_hamiltonian, solve_leaf_walk, AdjacencyFamily, ImplicitFamily,
};
use ibx_core::plb::{circuit_to_plb, riffle, validate_plb, Piece, Plb};
use ibx_core::random::{random_bijection, random_circuit, random_permutation, rng, Rng64};
use ibx_core::reductions::{
    clock_schedule, compile_oracle_circuit, inversion_by_iteration, oracle_schedule, OracleCircuit,
    OracleStep,
};
use ibx_core::revcirc::{
    jms_lift, negation_map, permutation_of_bijection, ClassicalCircuit, ClassicalGate, ClassicalOp,
};
use ibx_core::{Bitstring, Parity};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn step_word(f: &Bijection, n: u64, x: u64) -> u64 {
    (0..n).fold(x, |v, _| f.forward_word(v))
}

fn table_of(f: &Bijection) -> Vec<u64> {
    (0..1u64 << f.width()).map(|x| f.forward_word(x)).collect()
}

fn exhaustive_both_ways(g: &Bijection) -> Result<(), String> {
    ensure!(
        check_bijection_exhaustive(g).map_err(|e| e.to_string())?.is_bijective(),
        "{} is not bijective",
        g.label()
    );
    for y in 0..1u64 << g.width() {
        let x = g.backward_word(y).ok_or("missing backward map")?;
        ensure!(g.forward_word(x) == y, "{}: backward({y}) is not a preimage", g.label());
    }
    Ok(())
}

fn parity_impossibility() -> Outcome {
    let mut r = rng(1);
    let mut circuits = 0;
    for w in 2..=10usize {
        for _ in 0..100 {
            let gates = r.gen_range(1..=50);
            let c = random_circuit(&mut r, w, gates, w - 1);
            let p = c.permutation().map_err(|e| e.to_string())?;
            ensure!(p.parity() == Parity::Even, "odd circuit at w = {w}: {c:?}");
            circuits += 1;
        }
        let neg = permutation_of_bijection(&negation_map(w)).map_err(|e| e.to_string())?;
        ensure!(neg.parity() == Parity::Odd, "negation at w = {w} is even");
        let pairs = ((1usize << w) - 2) / 2;
        ensure!(neg.swapped_pairs() == pairs, "negation at w = {w} swaps {} pairs", neg.swapped_pairs());
        ensure!(neg.cycle_type().iter().all(|&l| l <= 2), "negation is not an involution");
    }
    Ok(format!("{circuits} circuits even, negation odd with 2^(w-1)-1 swaps"))
}

fn jms_lift_pads() -> Outcome {
    let mut r = rng(2);
    for round in 0..20 {
        let f = random_bijection(&mut r, 6);
        let table = table_of(&f);
        let mut inv = vec![0u64; 64];
        for (x, &y) in table.iter().enumerate() {
            inv[y as usize] = x as u64;
        }
        let cf = ClassicalCircuit::from_truth_table(6, 6, &table).map_err(|e| e.to_string())?;
        let cfi = ClassicalCircuit::from_truth_table(6, 6, &inv).map_err(|e| e.to_string())?;
        let lift = jms_lift(&cf, &cfi).map_err(|e| e.to_string())?;
        ensure!(lift.garbage_wires.is_empty(), "round {round}: JMS lift left garbage wires");
        for x in 0..64u64 {
            let state = lift.circuit.eval(&lift.embed(&Bitstring::from_u64(x, 6))).map_err(|e| e.to_string())?;
            let mut expect = Bitstring::zeros(state.width());
            for (i, &w) in lift.output_wires.iter().enumerate() {
                expect.set(w, table[x as usize] >> i & 1 == 1);
            }
            ensure!(state == expect, "round {round}, x = {x}: got {state}, expected {expect}");
        }
    }
    Ok("20 lifts, g(pad(x)) = pad(f(x)) on all 64 inputs".into())
}

/// Random oracle circuit on `k`-bit arguments: a layer of unary/binary gates
/// builds the argument, one oracle call `g^(n)` with a 5-bit count, then
/// one gate that mixes the result with an input. Returns the circuit and a
/// direct evaluator that iterates `g` by hand.
type DirectEval = Box<dyn Fn(&Bijection, u64, u64) -> u64>;

fn random_oracle_circuit(r: &mut Rng64, k: usize, count_bits: usize) -> (OracleCircuit, DirectEval) {
    let inputs = k + count_bits;
    let mut steps = Vec::new();
    let mut pre = Vec::new();
    for i in 0..k {
        let other = r.gen_range(0..inputs);
        let op = *[ClassicalOp::Copy, ClassicalOp::Not, ClassicalOp::Xor, ClassicalOp::And, ClassicalOp::Or]
            .choose(r)
            .expect("non-empty");
        let ins = if op.arity() == 1 { vec![i] } else { vec![i, other] };
        pre.push((op, ins.clone()));
        steps.push(OracleStep::Gate(ClassicalGate { op, out: inputs + i, ins }));
    }
    let s: Vec<usize> = (inputs..inputs + k).collect();
    let t: Vec<usize> = (inputs + k..inputs + 2 * k).collect();
    let n: Vec<usize> = (k..inputs).collect();
    steps.push(OracleStep::Oracle { n, s, t: t.clone() });
    let mix_in = r.gen_range(0..k);
    let mix = inputs + 2 * k;
    steps.push(OracleStep::Gate(ClassicalGate { op: ClassicalOp::Xor, out: mix, ins: vec![t[0], mix_in] }));
    let mut outputs = t;
    outputs.push(mix);
    let oc = OracleCircuit::new(inputs, steps, outputs).expect("well-formed by construction");

    let direct = move |g: &Bijection, x: u64, count: u64| -> u64 {
        let bit = |v: u64, i: usize| v >> i & 1 == 1;
        let all = x | count << k;
        let mut arg = 0u64;
        for (i, (op, ins)) in pre.iter().enumerate() {
            let a = bit(all, ins[0]);
            let b = ins.get(1).is_some_and(|&j| bit(all, j));
            let v = match op {
                ClassicalOp::Copy => a,
                ClassicalOp::Not => !a,
                ClassicalOp::Xor => a ^ b,
                ClassicalOp::And => a & b,
                ClassicalOp::Or => a | b,
            };
            arg |= (v as u64) << i;
        }
        let y = step_word(g, count, arg);
        let m = (y & 1) ^ (x >> mix_in & 1);
        y | m << k
    };
    (oc, Box::new(direct))
}

fn reduction_compilers() -> Outcome {
    let mut r = rng(3);
    // exhaustive bijectivity of the compiled maps
    for k in 1..=5usize {
        let f = random_bijection(&mut r, k).forward_only();
        let x = Bitstring::from_u64(r.gen_range(0..1 << k), k);
        let s = inversion_by_iteration(&f, &x).map_err(|e| e.to_string())?;
        exhaustive_both_ways(&s.g)?;
        let n = if k <= 3 { r.gen_range(1..=20) } else { 1 };
        let c = clock_schedule(&f, n, &x).map_err(|e| e.to_string())?;
        exhaustive_both_ways(&c.g)?;
        let (oc, _) = random_oracle_circuit(&mut r, k, 1);
        let h = compile_oracle_circuit(&oc, &f).map_err(|e| e.to_string())?;
        ensure!(h.g.width() <= 24, "oracle map for k = {k} is {} bits wide", h.g.width());
        exhaustive_both_ways(&h.g)?;
    }
    // end-to-end answers
    for i in 0..50 {
        let k = r.gen_range(1..=5usize);
        let f = random_bijection(&mut r, k);
        let x = r.gen_range(0..1u64 << k);
        let xb = Bitstring::from_u64(x, k);
        let got = inversion_by_iteration(&f.clone().forward_only(), &xb)
            .and_then(|s| Ok(s.run()?))
            .map_err(|e| e.to_string())?;
        ensure!(got.to_u64() == f.forward_word(x), "summation instance {i}: f({x}) wrong");
    }
    for i in 0..50 {
        let k = r.gen_range(1..=5usize);
        let f = random_bijection(&mut r, k);
        let n = r.gen_range(0..=20u64);
        let x = r.gen_range(0..1u64 << k);
        let got = clock_schedule(&f.clone().forward_only(), n, &Bitstring::from_u64(x, k))
            .and_then(|s| Ok(s.run()?))
            .map_err(|e| e.to_string())?;
        ensure!(got.to_u64() == step_word(&f, n, x), "clock instance {i}: f^({n})({x}) wrong");
    }
    for i in 0..50 {
        let k = r.gen_range(1..=5usize);
        let g = random_bijection(&mut r, k).forward_only();
        let (oc, direct) = random_oracle_circuit(&mut r, k, 5);
        let n = r.gen_range(0..=20u64);
        let x = r.gen_range(0..1u64 << k);
        let input = Bitstring::from_u64(x | n << k, k + 5);
        let got = oracle_schedule(&oc, &g, &input)
            .and_then(|s| Ok(s.run()?))
            .map_err(|e| e.to_string())?;
        ensure!(got.to_u64() == direct(&g, x, n), "oracle instance {i}: k = {k}, n = {n}, x = {x}");
    }
    Ok("k <= 5 exhaustive, 3 x 50 instances agree".into())
}

fn leaf_compiler() -> Outcome {
    let mut r = rng(4);
    for round in 0..30 {
        let k = r.gen_range(2..=14usize);
        let ids: Vec<u64> = rand::seq::index::sample(&mut r, 1 << k, (1usize << k).min(4000))
            .into_iter()
            .map(|v| v as u64)
            .collect();
        let len = r.gen_range(2..=ids.len());
        let (path, rest) = ids.split_at(len);
        let mut fam = AdjacencyFamily::path(k, path);
        // distractors: another path and a cycle on unused ids
        if rest.len() >= 2 {
            let cut = r.gen_range(0..=rest.len());
            for w in rest[..cut].windows(2) {
                fam.add_edge(w[0], w[1]);
            }
            let cyc = &rest[cut..];
            if cyc.len() >= 3 {
                for w in cyc.windows(2) {
                    fam.add_edge(w[0], w[1]);
                }
                fam.add_edge(cyc[cyc.len() - 1], cyc[0]);
            }
        }
        let fam: Arc<dyn ImplicitFamily> = Arc::new(fam);
        let v = path[0];
        let walk = solve_leaf_walk(fam.as_ref(), v).map_err(|e| e.to_string())?;
        ensure!(walk.leaf == path[len - 1], "round {round}: walk found {}", walk.leaf);
        let w = fam.neighbors(v).map_err(|e| e.to_string())?[0];
        let f = leaf_to_bijection(fam, k);
        let mut s = leaf_start(k, v, w);
        for _ in 0..1u64 << k {
            s = f.forward_word(s);
        }
        ensure!(
            leaf_v(k, s) == walk.leaf,
            "round {round}: k = {k}, path length {len}: bijection gave {}, walk gave {}",
            leaf_v(k, s),
            walk.leaf
        );
    }
    Ok("30 paths, k <= 14".into())
}

fn cycle_edges(cycle: &[usize]) -> BTreeSet<(usize, usize)> {
    (0..cycle.len())
        .map(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            (a.min(b), a.max(b))
        })
        .collect()
}

fn lollipop_tutte() -> Outcome {
    let corpus: Vec<(String, CubicGraph)> = graphs::corpus(0, 20);
    let mut walks = 0;
    for (name, g) in &corpus {
        ensure!(g.vertex_count() <= 12, "{name} is too large");
        for &e in g.edges() {
            let count = count_ham_cycles_through_edge(g, e).map_err(|x| x.to_string())?;
            ensure!(count % 2 == 0, "{name}: {count} cycles through {e:?}");
            let cycles = ham_cycles_through_edge(g, e);
            ensure!(cycles.len() as u64 == count, "{name}: enumeration disagrees with count");
            for c in &cycles {
                for forward in [true, false] {
                    let other = second_hamiltonian(g, c, e, forward).map_err(|x| format!("{name}: {x}"))?;
                    ensure!(g.is_hamiltonian_cycle(&other), "{name}: walk returned a non-cycle");
                    ensure!(graphs::cycle_has_edge(&other, e.0, e.1), "{name}: walk lost the fixed edge");
                    ensure!(cycle_edges(&other) != cycle_edges(c), "{name}: walk returned the same cycle");
                    walks += 1;
                }
            }
        }
    }
    Ok(format!("{} graphs, {walks} walks", corpus.len()))
}

fn bbm() -> Outcome {
    let rule = bbm_rule();
    // the rule itself: single balls cross the block, diagonal pairs turn
    let (tl, tr, bl, br) = (1usize, 2, 4, 8);
    for s in 0..16usize {
        let expect = match s {
            x if x == tl => br,
            x if x == br => tl,
            x if x == tr => bl,
            x if x == bl => tr,
            x if x == tl | br => tr | bl,
            x if x == tr | bl => tl | br,
            x => x,
        };
        ensure!(rule.table()[s] as usize == expect, "block {s:04b} maps to {:04b}", rule.table()[s]);
    }
    for ((r0, c0), (dr, dc)) in [((4, 4), (1i64, 1i64)), ((4, 5), (1, -1)), ((5, 4), (-1, 1)), ((5, 5), (-1, -1))] {
        let mut g = MargolusGrid::new(64, 64, Boundary::Periodic).map_err(|e| e.to_string())?;
        g.set(r0, c0, 1);
        for step in 1..=100i64 {
            g = g.step(&rule).map_err(|e| e.to_string())?;
            let row = (r0 as i64 + dr * step).rem_euclid(64) as usize;
            let col = (c0 as i64 + dc * step).rem_euclid(64) as usize;
            ensure!(g.live_count() == 1 && g.get(row, col) == 1, "ball from ({r0}, {c0}) lost at step {step}");
        }
    }
    let mut r = rng(6);
    for seed in 0..3 {
        let cells: Vec<u8> = (0..64 * 64).map(|_| r.gen_range(0..2)).collect();
        let start = MargolusGrid::from_cells(64, 64, cells, Phase::Even, Boundary::Periodic).map_err(|e| e.to_string())?;
        let live = start.live_count();
        let mut g = start.clone();
        for step in 1..=10_000 {
            g = g.step(&rule).map_err(|e| e.to_string())?;
            ensure!(g.live_count() == live, "grid {seed}: count changed at step {step}");
        }
        let mut h = start.clone();
        for _ in 0..1000 {
            h = h.step(&rule).map_err(|e| e.to_string())?;
        }
        for _ in 0..1000 {
            h = h.step_back(&rule).map_err(|e| e.to_string())?;
        }
        ensure!(h == start, "grid {seed}: inverse did not restore the start");
    }
    Ok("diagonal motion, 3 grids x 10^4 steps conserved, 10^3 round trip".into())
}

fn dimension_reduction() -> Outcome {
    let mut r = rng(7);
    let mut rules = vec![("bbm".to_string(), bbm_rule())];
    for i in 0..5 {
        let p = random_permutation(&mut r, 16);
        let table = p.images().iter().map(|&v| v as u32).collect();
        rules.push((format!("random{i}"), MargolusRule::from_table(2, table).map_err(|e| e.to_string())?));
    }
    for (name, rule) in &rules {
        for c in [4usize, 6, 8] {
            let a = dim_redux_compile(rule, c, 4 * c).map_err(|e| e.to_string())?;
            let mut g = a.blank_grid();
            for row in 0..g.height() {
                for col in 0..g.width() {
                    g.set(row, col, r.gen_range(0..2));
                }
            }
            if let Some(k) = a.verify(&g, 50).map_err(|e| e.to_string())? {
                return Err(format!("{name}, c = {c}: first mismatch after {k} steps"));
            }
        }
    }
    Ok("6 rules x c in {4, 6, 8}, 50 steps each".into())
}

fn strobe() -> Outcome {
    let mut r = rng(8);
    for t in 2..=9u32 {
        let a = StrobeAutomaton::counter(t).map_err(|e| e.to_string())?;
        let cfg = StrobeAutomaton::counter_pattern(t, 12);
        let lit = a.lit_steps(&cfg, 10 * t as u64).map_err(|e| e.to_string())?;
        let expect: Vec<u64> = (0..10).map(|j| j * t as u64).collect();
        ensure!(lit == expect, "t = {t}: lit at {lit:?}");
        for _ in 0..20 {
            let mut x = StrobeAutomaton::counter_pattern(t, 9);
            x.step = 1000;
            for name in ["s_tc", "s_bc"] {
                x.track_mut(name).iter_mut().for_each(|v| *v = r.gen_range(0..t));
            }
            let y = a.step(&x).map_err(|e| e.to_string())?;
            ensure!(a.step_back(&y).map_err(|e| e.to_string())? == x, "t = {t}: step_back(step(x)) != x");
            let z = a.step_back(&x).map_err(|e| e.to_string())?;
            ensure!(a.step(&z).map_err(|e| e.to_string())? == x, "t = {t}: step(step_back(x)) != x");
        }
    }
    Ok("t = 2..9 lit at multiples of t, reversible".into())
}

/// Random piece list on `[0, n)`: usually a bijection of one of two shapes,
/// sometimes perturbed, sometimes arbitrary.
fn random_description(r: &mut Rng64) -> (u64, Vec<Piece>) {
    let n = r.gen_range(1..=64u64);
    let mut pieces = Vec::new();
    match r.gen_range(0..3) {
        0 => {
            // exchange with optional flips
            let mut cuts: Vec<u64> = (0..r.gen_range(0..6)).map(|_| r.gen_range(0..=n)).collect();
            cuts.extend([0, n]);
            cuts.sort_unstable();
            cuts.dedup();
            let ivs: Vec<(u64, u64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
            let mut order: Vec<usize> = (0..ivs.len()).collect();
            order.shuffle(r);
            let mut at = 0i64;
            for &o in &order {
                let (lo, hi) = ivs[o];
                let len = (hi - lo) as i64;
                if r.gen_bool(0.5) {
                    pieces.push(Piece::new(lo, hi, 1, at - lo as i64));
                } else {
                    pieces.push(Piece::new(lo, hi, -1, at + len - 1 + lo as i64));
                }
                at += len;
            }
        }
        1 => {
            // transpose of an m x h array, split into m pieces
            let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            let m = *divisors.choose(r).expect("n >= 1");
            let h = n / m;
            for j in 0..m {
                let lo = (j * h) as i64;
                pieces.push(Piece::new(lo, lo + h as i64, m as i64, j as i64 - m as i64 * lo));
            }
        }
        _ => {
            let mut lo = 0u64;
            while lo < n {
                let hi = r.gen_range(lo + 1..=n);
                let mult = *[-3i64, -2, -1, 1, 2, 3].choose(r).expect("non-empty");
                pieces.push(Piece::new(lo, hi, mult, r.gen_range(-2 * n as i64..=2 * n as i64)));
                lo = hi;
            }
        }
    }
    if r.gen_bool(0.3) && !pieces.is_empty() {
        let i = r.gen_range(0..pieces.len());
        let p = &mut pieces[i];
        match r.gen_range(0..3) {
            0 => p.off += 1,
            1 if p.hi.clone() - p.lo.clone() > BigInt::from(1) => p.hi -= 1,
            _ => p.lo -= 1,
        }
    }
    (n, pieces)
}

fn brute_bijective(n: u64, pieces: &[Piece]) -> bool {
    let mut covered = vec![0u32; n as usize];
    let mut hit = vec![0u32; n as usize];
    for p in pieces {
        let (Ok(lo), Ok(hi)) = (i64::try_from(&p.lo), i64::try_from(&p.hi)) else {
            return false;
        };
        if lo >= hi || lo < 0 || hi > n as i64 {
            return false;
        }
        for x in lo..hi {
            covered[x as usize] += 1;
            let y = p.eval(&BigInt::from(x));
            match u64::try_from(&y) {
                Ok(y) if y < n => hit[y as usize] += 1,
                _ => return false,
            }
        }
    }
    covered.iter().chain(&hit).all(|&c| c == 1)
}

fn plb_suite() -> Outcome {
    let mut r = rng(9);
    let mut valid = 0;
    for i in 0..1000 {
        let (n, pieces) = random_description(&mut r);
        let brute = brute_bijective(n, &pieces);
        let fast = validate_plb(n, pieces.clone()).is_ok();
        ensure!(brute == fast, "description {i} (N = {n}): brute {brute}, validate_plb {fast}: {pieces:?}");
        valid += brute as usize;
    }
    let rf = riffle(13);
    ensure!(rf.apply(&3.into()) == Ok(6.into()), "riffle(13)(3) != 6");
    ensure!(rf.apply(&7.into()) == Ok(1.into()), "riffle(13)(7) != 1");
    for k in 1..=8usize {
        for _ in 0..4 {
            let gates = r.gen_range(1..=12);
            let c = random_circuit(&mut r, k, gates, 3);
            let (t, s): (Plb, usize) = circuit_to_plb(&c).map_err(|e| e.to_string())?;
            for x in 0..1u64 << k {
                ensure!(t.iterate_u64(s as u64, x) == c.eval_word(x), "k = {k}: T^s({x}) differs");
            }
            for n in 0..=10u64 {
                let x = r.gen_range(0..1u64 << k);
                let want = c.iterate(&BigUint::from(n), &Bitstring::from_u64(x, k)).map_err(|e| e.to_string())?;
                ensure!(t.iterate_u64(n * s as u64, x) == want.to_u64(), "k = {k}: T^(sn)({x}) differs at n = {n}");
            }
        }
    }
    Ok(format!("1000 descriptions ({valid} bijective) agree, riffle(13), circuits k <= 8"))
}

fn random_iet(r: &mut Rng64, n: u64, k: usize) -> Plb {
    let mut cuts: Vec<u64> = (0..k - 1).map(|_| r.gen_range(1..n)).collect();
    cuts.extend([0, n]);
    cuts.sort_unstable();
    cuts.dedup();
    let ivs: Vec<(u64, u64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let mut order: Vec<usize> = (0..ivs.len()).collect();
    order.shuffle(r);
    let mut dest = vec![0u64; ivs.len()];
    let mut at = 0;
    for &o in &order {
        dest[o] = at;
        at += ivs[o].1 - ivs[o].0;
    }
    let pieces: Vec<(u64, u64, i64)> =
        ivs.iter().zip(&dest).map(|(&(lo, hi), &d)| (lo, hi, d as i64 - lo as i64)).collect();
    interval_exchange(n, &pieces).expect("exchange by construction")
}

fn iet_orbit() -> Outcome {
    let fig = four_interval_example();
    for (x, y) in [(0u64, 11u64), (4, 0), (6, 10), (7, 2)] {
        ensure!(fig.iterate_u64(1, x) == y, "four-interval map sends {x} to {}", fig.iterate_u64(1, x));
        let got = build_surface(&fig).and_then(|s| s.solve(x, &BigUint::from(1u32))).map_err(|e| e.to_string())?;
        ensure!(got == y, "surface solve sends {x} to {got}");
    }
    let mut r = rng(10);
    let huge: BigUint = BigUint::from(10u32).pow(100u32);
    for round in 0..50 {
        let n = r.gen_range(2..=500u64);
        let k = r.gen_range(2..=8usize);
        let t = random_iet(&mut r, n, k);
        let surface = build_surface(&t).map_err(|e| format!("round {round}: {e}"))?;
        let steps = r.gen_range(0..=10_000u64);
        for i in 0..n {
            let got = surface.solve(i, &BigUint::from(steps)).map_err(|e| e.to_string())?;
            ensure!(got == t.iterate_u64(steps, i), "round {round}: N = {n}, i = {i}, n = {steps}");
            let far = surface.solve(i, &huge).map_err(|e| e.to_string())?;
            ensure!(far == cycle_oracle(&t, i, &huge), "round {round}: N = {n}, i = {i}, n = 10^100");
        }
    }
    for big_n in 1..=200u64 {
        for c in 0..big_n {
            let g = max_distinct_gaps(big_n, c);
            ensure!(g <= 3, "rotation by {c} mod {big_n} shows {g} gaps");
        }
    }
    Ok("four-interval map, 50 exchanges, 10^100, three gaps for N <= 200".into())
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("parity impossibility", 10, parity_impossibility),
        ("JMS lift", 30, jms_lift_pads),
        ("reduction compilers", 60, reduction_compilers),
        ("leaf compiler", 60, leaf_compiler),
        ("lollipop / Tutte parity", 300, lollipop_tutte),
        ("billiard ball model", 30, bbm),
        ("dimension reduction", 120, dimension_reduction),
        ("strobe", 5, strobe),
        ("piecewise linear bijections", 120, plb_suite),
        ("integer exchange orbits", 120, iet_orbit),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let verdict = match outcome {
            Ok(detail) if took <= Duration::from_secs(limit) => format!("PASS  {detail}"),
            Ok(detail) => format!("FAIL  over the {limit} s limit; {detail}"),
            Err(e) => format!("FAIL  {e}"),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("[{:>2}] {name:<28} {:>8.2?}  {verdict}", i + 1, took);
    }
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}

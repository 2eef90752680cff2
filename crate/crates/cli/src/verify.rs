//! Desk-scale cross-checks of every module against brute-force oracles.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use ibx_core::bijection::check_bijection_exhaustive;
use ibx_core::ca::{bbm_rule, dim_redux_compile, simulate, simulate_back, Boundary, MargolusGrid, MargolusRule, Phase, StrobeAutomaton};
use ibx_core::formats::{parse_circuit, parse_cubic, parse_grid, parse_plb, write_circuit, write_cubic, write_grid, write_plb};
use ibx_core::graphs;
use ibx_core::iet::{build_surface, cycle_oracle, four_interval_example, interval_exchange, max_distinct_gaps};
use ibx_core::implicit::{
    count_ham_cycles_through_edge, ham_cycles_through_edge, leaf_start, leaf_to_bijection, leaf_v, second_hamiltonian,
    solve_leaf_walk, AdjacencyFamily, ImplicitFamily,
};
use ibx_core::plb::{circuit_to_plb, riffle, validate_plb, Piece, Plb};
use ibx_core::random::{random_bijection, random_circuit, random_permutation, rng, Rng64};
use ibx_core::reductions::{clock_schedule, inversion_by_iteration};
use ibx_core::revcirc::{jms_lift, negation_map, permutation_of_bijection, ClassicalCircuit};
use ibx_core::{Bitstring, Parity};

use crate::{CliError, CliResult, Output};

type Suite = fn(&mut Rng64) -> Result<String, String>;

const SUITES: [(&str, Suite); 11] = [
    ("circuits", circuits),
    ("lifts", lifts),
    ("reductions", reductions),
    ("leaf", leaf),
    ("lollipop", lollipop),
    ("bbm", bbm),
    ("dimredux", dimredux),
    ("strobe", strobe),
    ("plb", plb),
    ("iet", iet),
    ("formats", formats),
];

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e(x: impl std::fmt::Display) -> String {
    x.to_string()
}

pub(crate) fn all(seed: u64, only: &[String]) -> CliResult<Output> {
    for name in only {
        if !SUITES.iter().any(|(n, _)| n == name) {
            let known: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
            return Err(CliError::Usage(format!("unknown suite `{name}`; known: {}", known.join(", "))));
        }
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut failed = 0;
    for (i, (name, suite)) in SUITES.iter().enumerate() {
        if !only.is_empty() && !only.iter().any(|o| o == name) {
            continue;
        }
        let mut r = rng(seed.wrapping_add(i as u64));
        let start = Instant::now();
        let outcome = suite(&mut r);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let (ok, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        failed += !ok as usize;
        text.push_str(&format!("{} {name:<11} {ms:>9.1} ms  {detail}\n", if ok { "PASS" } else { "FAIL" }));
        rows.push(json!({"suite": name, "pass": ok, "detail": detail, "ms": ms}));
    }
    if failed > 0 {
        return Err(CliError::Invalid(format!("{text}{failed} suite(s) failed")));
    }
    Ok(Output::new(text, json!({"suites": rows})))
}

fn circuits(r: &mut Rng64) -> Result<String, String> {
    for w in 2..=8usize {
        for _ in 0..20 {
            let gates = r.gen_range(1..=30);
            let c = random_circuit(r, w, gates, w - 1);
            ensure!(c.permutation().map_err(e)?.parity() == Parity::Even, "odd circuit at width {w}");
            let x = Bitstring::from_u64(r.gen_range(0..1 << w), w);
            ensure!(c.inverse().eval(&c.eval(&x).map_err(e)?).map_err(e)? == x, "inverse failed");
            let n = r.gen_range(0..40u64);
            let direct = (0..n).fold(x.to_u64(), |v, _| c.eval_word(v));
            ensure!(c.iterate(&BigUint::from(n), &x).map_err(e)?.to_u64() == direct, "iterate disagrees");
        }
        let neg = permutation_of_bijection(&negation_map(w)).map_err(e)?;
        ensure!(neg.parity() == Parity::Odd && neg.swapped_pairs() == (1 << (w - 1)) - 1, "negation at {w}");
    }
    Ok("random circuits even, negation odd".into())
}

fn lifts(r: &mut Rng64) -> Result<String, String> {
    for _ in 0..5 {
        let k = r.gen_range(2..=5usize);
        let f = random_bijection(r, k);
        let table: Vec<u64> = (0..1u64 << k).map(|x| f.forward_word(x)).collect();
        let mut inv = vec![0; table.len()];
        for (x, &y) in table.iter().enumerate() {
            inv[y as usize] = x as u64;
        }
        let cf = ClassicalCircuit::from_truth_table(k, k, &table).map_err(e)?;
        let cfi = ClassicalCircuit::from_truth_table(k, k, &inv).map_err(e)?;
        let lift = jms_lift(&cf, &cfi).map_err(e)?;
        let bennett = ibx_core::revcirc::bennett_lift(&cf);
        for x in 0..1u64 << k {
            let xb = Bitstring::from_u64(x, k);
            let state = lift.circuit.eval(&lift.embed(&xb)).map_err(e)?;
            ensure!(lift.extract(&state).to_u64() == table[x as usize], "JMS output at {x}");
            ensure!(lift.padding_is_clear(&state), "JMS padding at {x}");
            ensure!(bennett.run(&xb).to_u64() == table[x as usize], "Bennett output at {x}");
        }
    }
    Ok("JMS and Bennett lifts exact".into())
}

fn reductions(r: &mut Rng64) -> Result<String, String> {
    for _ in 0..20 {
        let k = r.gen_range(1..=4usize);
        let f = random_bijection(r, k);
        let x = r.gen_range(0..1u64 << k);
        let xb = Bitstring::from_u64(x, k);
        let s = inversion_by_iteration(&f.clone().forward_only(), &xb).map_err(e)?;
        ensure!(s.run().map_err(e)?.to_u64() == f.forward_word(x), "summation answer");
        let n = r.gen_range(0..=12u64);
        let c = clock_schedule(&f.clone().forward_only(), n, &xb).map_err(e)?;
        let direct = (0..n).fold(x, |v, _| f.forward_word(v));
        ensure!(c.run().map_err(e)?.to_u64() == direct, "clock answer");
        if k <= 2 {
            ensure!(check_bijection_exhaustive(&c.g).map_err(e)?.is_bijective(), "clock map not bijective");
            ensure!(check_bijection_exhaustive(&s.g).map_err(e)?.is_bijective(), "summation map not bijective");
        }
    }
    Ok("summation and clock agree with direct iteration".into())
}

fn leaf(r: &mut Rng64) -> Result<String, String> {
    for _ in 0..10 {
        let k = r.gen_range(2..=10usize);
        let mut ids: Vec<u64> = (0..1u64 << k).collect();
        ids.shuffle(r);
        let len = r.gen_range(2..=ids.len());
        let path = &ids[..len];
        let fam: Arc<dyn ImplicitFamily> = Arc::new(AdjacencyFamily::path(k, path));
        let walk = solve_leaf_walk(fam.as_ref(), path[0]).map_err(e)?;
        ensure!(walk.leaf == path[len - 1], "walk missed the far leaf");
        let f = leaf_to_bijection(fam, k);
        let mut s = leaf_start(k, path[0], path[1]);
        for _ in 0..1u64 << k {
            s = f.forward_word(s);
        }
        ensure!(leaf_v(k, s) == walk.leaf, "compiled leaf differs");
    }
    Ok("walks and compiled bijections agree".into())
}

fn lollipop(r: &mut Rng64) -> Result<String, String> {
    let corpus = graphs::corpus(r.gen(), 5);
    for (name, g) in &corpus {
        for &edge in g.edges() {
            let n = count_ham_cycles_through_edge(g, edge).map_err(e)?;
            ensure!(n % 2 == 0, "{name}: odd count through {edge:?}");
            if let Some(c) = ham_cycles_through_edge(g, edge).first() {
                let other = second_hamiltonian(g, c, edge, true).map_err(e)?;
                ensure!(g.is_hamiltonian_cycle(&other) && &other != c, "{name}: bad second cycle");
            }
        }
    }
    Ok(format!("{} graphs", corpus.len()))
}

fn random_grid(r: &mut Rng64, w: usize, h: usize, boundary: Boundary) -> MargolusGrid {
    let cells = (0..w * h).map(|_| r.gen_range(0..2)).collect();
    MargolusGrid::from_cells(w, h, cells, Phase::Even, boundary).expect("even sides")
}

fn bbm(r: &mut Rng64) -> Result<String, String> {
    let rule = bbm_rule();
    let g = random_grid(r, 32, 32, Boundary::Periodic);
    let h = simulate(&g, &rule, 500).map_err(e)?;
    ensure!(h.live_count() == g.live_count(), "live count changed");
    ensure!(simulate_back(&h, &rule, 500).map_err(e)? == g, "reverse did not restore");
    Ok("conservation and reversibility over 500 steps".into())
}

fn dimredux(r: &mut Rng64) -> Result<String, String> {
    let mut rules = vec![bbm_rule()];
    for _ in 0..2 {
        let table = random_permutation(r, 16).images().iter().map(|&v| v as u32).collect();
        rules.push(MargolusRule::from_table(2, table).map_err(e)?);
    }
    for rule in &rules {
        for c in [4usize, 6] {
            let a = dim_redux_compile(rule, c, 2 * c).map_err(e)?;
            let g = random_grid(r, c, 4, Boundary::Helical);
            ensure!(a.verify(&g, 20).map_err(e)?.is_none(), "ring and grid disagree at c = {c}");
        }
    }
    Ok("ring matches helical grid".into())
}

fn strobe(_: &mut Rng64) -> Result<String, String> {
    for t in 2..=9u32 {
        let a = StrobeAutomaton::counter(t).map_err(e)?;
        let lit = a.lit_steps(&StrobeAutomaton::counter_pattern(t, 6), 10 * t as u64).map_err(e)?;
        ensure!(lit == (0..10).map(|j| j * t as u64).collect::<Vec<_>>(), "t = {t}: lit at {lit:?}");
    }
    Ok("lit exactly at multiples of t".into())
}

fn plb(r: &mut Rng64) -> Result<String, String> {
    for _ in 0..200 {
        let n = r.gen_range(1..=24u64);
        let mut pieces = Vec::new();
        let mut lo = 0;
        while lo < n {
            let hi = r.gen_range(lo + 1..=n);
            let mult = *[-2i64, -1, 1, 2].choose(r).expect("non-empty");
            pieces.push(Piece::new(lo, hi, mult, r.gen_range(-(n as i64)..=n as i64)));
            lo = hi;
        }
        let mut hit = vec![false; n as usize];
        let brute = (0..n).all(|x| {
            let p = pieces.iter().find(|p| p.lo <= BigInt::from(x) && BigInt::from(x) < p.hi).expect("cover");
            match u64::try_from(&p.eval(&BigInt::from(x))) {
                Ok(y) if y < n && !hit[y as usize] => {
                    hit[y as usize] = true;
                    true
                }
                _ => false,
            }
        });
        ensure!(validate_plb(n, pieces).is_ok() == brute, "validate_plb disagrees with brute force");
    }
    let rf: Plb = riffle(13);
    ensure!(rf.iterate_u64(1, 3) == 6 && rf.iterate_u64(1, 7) == 1, "riffle(13)");
    for k in 1..=5 {
        let gates = r.gen_range(1..=8);
        let c = random_circuit(r, k, gates, 3);
        let (t, s) = circuit_to_plb(&c).map_err(e)?;
        for x in 0..1u64 << k {
            ensure!(t.iterate_u64(s as u64, x) == c.eval_word(x), "circuit_to_plb at k = {k}");
        }
    }
    Ok("validation, riffle and circuit compilation".into())
}

fn iet(r: &mut Rng64) -> Result<String, String> {
    let ex = four_interval_example();
    let su = build_surface(&ex).map_err(e)?;
    for (x, y) in [(0u64, 11u64), (4, 0), (6, 10), (7, 2)] {
        ensure!(su.solve(x, &BigUint::from(1u32)).map_err(e)? == y, "four-interval map at {x}");
    }
    for _ in 0..5 {
        let n = r.gen_range(2..=120u64);
        let shift = r.gen_range(1..n);
        let cut = r.gen_range(1..n);
        let t = interval_exchange(n, &[(0, cut, (n - cut) as i64), (cut, n, -(cut as i64))]).map_err(e)?;
        let su = build_surface(&t).map_err(e)?;
        let big = BigUint::from(10u32).pow(30);
        for i in 0..n {
            ensure!(su.solve(i, &BigUint::from(shift)).map_err(e)? == t.iterate_u64(shift, i), "solve at {i}");
            ensure!(su.solve(i, &big).map_err(e)? == cycle_oracle(&t, i, &big), "solve at {i}, n = 10^30");
        }
    }
    for n in 1..=60 {
        for c in 0..n {
            ensure!(max_distinct_gaps(n, c) <= 3, "more than three gaps for {c} mod {n}");
        }
    }
    Ok("four-interval map, exchanges, three gaps".into())
}

fn formats(r: &mut Rng64) -> Result<String, String> {
    let c = random_circuit(r, 6, 20, 3);
    ensure!(parse_circuit(&write_circuit(&c)).map_err(e)? == c, "circuit round trip");
    let g = random_grid(r, 8, 6, Boundary::Helical);
    ensure!(parse_grid(&write_grid(&g)).map_err(e)? == g, "grid round trip");
    let t = riffle(21);
    ensure!(parse_plb(&write_plb(&t)).map_err(e)? == t, "plb round trip");
    let cubic = graphs::petersen();
    ensure!(parse_cubic(&write_cubic(&cubic)).map_err(e)? == cubic, "cubic round trip");
    Ok("round trips".into())
}

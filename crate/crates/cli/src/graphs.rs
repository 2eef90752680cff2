use std::sync::Arc;

use serde_json::json;

use ibx_core::bijection::Bijection;
use ibx_core::formats::{parse_cubic, parse_graph, write_vertex_list};
use ibx_core::graphs::CubicGraph;
use ibx_core::implicit::{
    count_ham_cycles_through_edge, ham_cycles_through_edge, leaf_start, leaf_to_bijection, leaf_v,
    second_hamiltonian, solve_leaf_walk, AdjacencyFamily, ImplicitFamily,
};

use crate::circuits::check_exhaustive;
use crate::{CliError, CliResult, Ctx, LeafCmd, LollipopCmd, OrInvalid, Output};

fn load_family(ctx: &mut Ctx, path: &str) -> CliResult<(usize, AdjacencyFamily)> {
    let (k, edges) = parse_graph(&ctx.read(path)?).or_invalid()?;
    let mut fam = AdjacencyFamily::new(k);
    for (u, v) in edges {
        fam.add_edge(u, v);
    }
    Ok((k, fam))
}

pub(crate) fn leaf(cmd: LeafCmd, ctx: &mut Ctx) -> CliResult<Output> {
    match cmd {
        LeafCmd::Walk { file, v } => {
            let (_, fam) = load_family(ctx, &file)?;
            let walk = solve_leaf_walk(&fam, v).or_invalid()?;
            Ok(Output::new(format!("{}\n", walk.leaf), json!({"leaf": walk.leaf, "walk_steps": walk.steps}))
                .steps(walk.steps))
        }
        LeafCmd::Compile { file, v, check } => {
            let (k, fam) = load_family(ctx, &file)?;
            let nb = fam.neighbors(v).or_invalid()?;
            if nb.len() != 1 {
                return Err(CliError::Invalid(format!("vertex {v} has {} neighbours, not exactly one", nb.len())));
            }
            let f: Bijection = leaf_to_bijection(Arc::new(fam), k);
            let mut s = leaf_start(k, v, nb[0]);
            for _ in 0..1u64 << k {
                s = f.forward_word(s);
            }
            let far = leaf_v(k, s);
            let mut text = format!("{far}\n# map width {} iterations {}\n", f.width(), 1u64 << k);
            let mut data = json!({"leaf": far, "width": f.width()});
            if check.check {
                let ok = check_exhaustive(&f)?;
                text.push_str(&format!("# bijective {ok}\n"));
                data["bijective"] = json!(ok);
            }
            Ok(Output::new(text, data).steps(1u64 << k))
        }
    }
}

fn load_cubic(ctx: &mut Ctx, path: &str) -> CliResult<CubicGraph> {
    parse_cubic(&ctx.read(path)?).or_invalid()
}

pub(crate) fn lollipop(cmd: LollipopCmd, ctx: &mut Ctx) -> CliResult<Output> {
    match cmd {
        LollipopCmd::SecondCycle { file, edge, cycle, reverse } => {
            let g = load_cubic(ctx, &file)?;
            if !g.has_edge(edge.0, edge.1) {
                return Err(CliError::Invalid(format!("({}, {}) is not an edge", edge.0, edge.1)));
            }
            let start = match cycle {
                Some(c) => c,
                None => ham_cycles_through_edge(&g, edge)
                    .into_iter()
                    .next()
                    .ok_or_else(|| CliError::Invalid("no Hamiltonian cycle uses that edge".into()))?,
            };
            let other = second_hamiltonian(&g, &start, edge, !reverse).or_invalid()?;
            let text = format!("{}# from {}", write_vertex_list(&other), write_vertex_list(&start));
            Ok(Output::new(text, json!({"cycle": other, "start": start})))
        }
        LollipopCmd::Count { file, edge } => {
            let g = load_cubic(ctx, &file)?;
            let edges = match edge {
                Some(e) => vec![e],
                None => g.edges().to_vec(),
            };
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut all_even = true;
            for e in edges {
                let n = count_ham_cycles_through_edge(&g, e).or_invalid()?;
                all_even &= n % 2 == 0;
                text.push_str(&format!("{} {} {n}\n", e.0, e.1));
                rows.push(json!({"edge": [e.0, e.1], "cycles": n}));
            }
            Ok(Output::new(text, json!({"counts": rows, "all_even": all_even})))
        }
    }
}

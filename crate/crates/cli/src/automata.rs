use rand::Rng;
use serde_json::json;

use ibx_core::ca::{bbm_rule, dim_redux_compile, simulate_bbm, Boundary, MargolusGrid, MargolusRule, StrobeAutomaton};
use ibx_core::formats::{parse_grid, write_grid};
use ibx_core::random::{random_permutation, rng, Rng64};

use crate::{CaCmd, CliError, CliResult, Ctx, OrInvalid, Output};

fn load_grid(ctx: &mut Ctx, path: &str) -> CliResult<MargolusGrid> {
    parse_grid(&ctx.read(path)?).or_invalid()
}

fn random_rule(r: &mut Rng64) -> MargolusRule {
    let table = random_permutation(r, 16).images().iter().map(|&v| v as u32).collect();
    MargolusRule::from_table(2, table).expect("permutation of the 16 blocks")
}

pub(crate) fn ca(cmd: CaCmd, ctx: &mut Ctx) -> CliResult<Output> {
    match cmd {
        CaCmd::BbmRun { file, steps, trace } => {
            let mut g = load_grid(ctx, &file)?;
            let live = g.live_count();
            let mut text = String::new();
            if trace {
                let rule = bbm_rule();
                text.push_str(&format!("# step 0\n{}", write_grid(&g)));
                for i in 1..=steps {
                    g = g.step(&rule).or_invalid()?;
                    text.push_str(&format!("# step {i}\n{}", write_grid(&g)));
                }
            } else {
                g = simulate_bbm(&g, steps).or_invalid()?;
                text = write_grid(&g);
            }
            let data = json!({"grid": write_grid(&g), "live": g.live_count(), "conserved": live == g.live_count()});
            Ok(Output::new(text, data).steps(steps))
        }
        CaCmd::BbmReverse { file, steps } => {
            let g = ibx_core::ca::simulate_back(&load_grid(ctx, &file)?, &bbm_rule(), steps).or_invalid()?;
            let text = write_grid(&g);
            Ok(Output::new(text.clone(), json!({"grid": text})).steps(steps))
        }
        CaCmd::DimreduxRun { file, steps, random_rule: rand_rule } => {
            let g = load_grid(ctx, &file)?;
            if g.boundary() != Boundary::Helical {
                return Err(CliError::Invalid("dimension reduction needs a helical grid".into()));
            }
            let rule = if rand_rule { random_rule(&mut rng(ctx.seed)) } else { bbm_rule() };
            let c = g.width();
            let a = dim_redux_compile(&rule, c, c * g.height() / 2).or_invalid()?;
            let ring = a.simulate_1d(&a.embed(&g, 0).or_invalid()?, steps * a.strobe_period()).or_invalid()?;
            let out = a.project(&ring).or_invalid()?;
            let text = write_grid(&out);
            let ring_steps = steps * a.strobe_period();
            Ok(Output::new(text.clone(), json!({"grid": text, "ring_cells": a.period(), "ring_steps": ring_steps}))
                .steps(ring_steps))
        }
        CaCmd::DimreduxVerify { c, p, steps, rules } => {
            let p = p.unwrap_or(4 * c);
            let mut r = rng(ctx.seed);
            let mut all = vec![("bbm".to_string(), bbm_rule())];
            for i in 0..rules {
                all.push((format!("random{i}"), random_rule(&mut r)));
            }
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut failed = Vec::new();
            for (name, rule) in &all {
                let a = dim_redux_compile(rule, c, p).or_invalid()?;
                let mut g = a.blank_grid();
                for row in 0..g.height() {
                    for col in 0..g.width() {
                        g.set(row, col, r.gen_range(0..2));
                    }
                }
                let mismatch = a.verify(&g, steps).or_invalid()?;
                match mismatch {
                    None => text.push_str(&format!("{name}: ok for {steps} steps\n")),
                    Some(k) => {
                        text.push_str(&format!("{name}: mismatch after {k} steps\n"));
                        failed.push(name.clone());
                    }
                }
                rows.push(json!({"rule": name, "first_mismatch": mismatch}));
            }
            if !failed.is_empty() {
                return Err(CliError::Invalid(format!("{text}ring and grid disagree for {}", failed.join(", "))));
            }
            let t = c as u64 / 2 + 1;
            Ok(Output::new(text, json!({"c": c, "p": p, "rules": rows})).steps(steps * t))
        }
        CaCmd::StrobeDemo { t, steps, len } => {
            let a = StrobeAutomaton::counter(t).or_usage()?;
            let steps = steps.unwrap_or(10 * t as u64);
            let mut cfg = StrobeAutomaton::counter_pattern(t, len);
            let mut text = String::new();
            let mut lit = Vec::new();
            for i in 0..steps {
                let is_lit = a.is_lit(&cfg);
                if is_lit {
                    lit.push(i);
                }
                let show = |name: &str| cfg.track(name).iter().map(|v| v.to_string()).collect::<Vec<_>>().join("");
                text.push_str(&format!(
                    "{i:>4} {} top {} bottom {}\n",
                    if is_lit { '*' } else { ' ' },
                    show("s_tc"),
                    show("s_bc")
                ));
                cfg = a.step(&cfg).or_invalid()?;
            }
            let expected = lit.iter().enumerate().all(|(j, &s)| s == j as u64 * t as u64)
                && lit.len() as u64 == steps.div_ceil(t as u64);
            text.push_str(&format!("# lit at multiples of {t}: {expected}\n"));
            Ok(Output::new(text, json!({"t": t, "lit": lit, "multiples_of_t": expected})).steps(steps))
        }
    }
}

use serde_json::json;

use ibx_core::bijection::{check_bijection_exhaustive, Bijection, MAX_EXHAUSTIVE_WIDTH};
use ibx_core::formats::{parse_circuit, parse_classical, parse_oracle_circuit, write_circuit};
use ibx_core::reductions::{clock_schedule, inversion_by_iteration, oracle_schedule, Schedule};
use ibx_core::revcirc::{bennett_lift, jms_lift, LiftResult, ReversibleCircuit};
use ibx_core::{Bitstring, Parity};

use crate::{CircuitCmd, CliError, CliResult, Ctx, LiftCmd, OrInvalid, Output, ReduceCmd};

fn bits(s: &str, width: usize) -> CliResult<Bitstring> {
    let b: Bitstring = s.parse().or_usage()?;
    if b.width() != width {
        return Err(CliError::Usage(format!("input has {} bits, expected {width}", b.width())));
    }
    Ok(b)
}

fn load_circuit(ctx: &mut Ctx, path: &str) -> CliResult<ReversibleCircuit> {
    parse_circuit(&ctx.read(path)?).or_invalid()
}

pub(crate) fn circuit(cmd: CircuitCmd, ctx: &mut Ctx) -> CliResult<Output> {
    match cmd {
        CircuitCmd::Eval { file, input } => {
            let c = load_circuit(ctx, &file)?;
            let out = c.eval(&bits(&input, c.width())?).or_invalid()?;
            Ok(Output::new(format!("{out}\n"), json!(out.to_string())).steps(c.len()))
        }
        CircuitCmd::Invert { file, input } => {
            let inv = load_circuit(ctx, &file)?.inverse();
            match input {
                Some(input) => {
                    let out = inv.eval(&bits(&input, inv.width())?).or_invalid()?;
                    Ok(Output::new(format!("{out}\n"), json!(out.to_string())))
                }
                None => {
                    let text = write_circuit(&inv);
                    Ok(Output::new(text.clone(), json!(text)))
                }
            }
        }
        CircuitCmd::Iterate { file, n, input } => {
            let c = load_circuit(ctx, &file)?;
            let out = c.iterate(&n, &bits(&input, c.width())?).or_invalid()?;
            Ok(Output::new(format!("{out}\n"), json!(out.to_string())).steps(n))
        }
        CircuitCmd::Parity { file } => {
            let c = load_circuit(ctx, &file)?;
            let p = c.permutation().or_invalid()?;
            let parity = match p.parity() {
                Parity::Even => "even",
                Parity::Odd => "odd",
            };
            let cycles = p.cycle_type();
            let text = format!(
                "{parity}\ncycle type {}\norder {}\n",
                cycles.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "),
                p.order()
            );
            Ok(Output::new(
                text,
                json!({"parity": parity, "cycle_type": cycles, "order": p.order().to_string()}),
            ))
        }
    }
}

fn describe_lift(l: &LiftResult) -> String {
    let list = |ws: &[usize]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ");
    format!(
        "# inputs {}\n# outputs {}\n# garbage {}\n# padding {}\n{}",
        list(&l.input_wires),
        list(&l.output_wires),
        list(&l.garbage_wires),
        l.pad_len,
        write_circuit(&l.circuit)
    )
}

fn lift_output(l: LiftResult, input: Option<String>) -> CliResult<Output> {
    match input {
        None => {
            let text = describe_lift(&l);
            let data = json!({
                "circuit": write_circuit(&l.circuit),
                "inputs": l.input_wires,
                "outputs": l.output_wires,
                "garbage": l.garbage_wires,
                "padding": l.pad_len,
            });
            Ok(Output::new(text, data).steps(l.circuit.len()))
        }
        Some(input) => {
            let x = bits(&input, l.payload_width())?;
            let state = l.circuit.eval(&l.embed(&x)).or_invalid()?;
            let out = l.extract(&state);
            let clear = l.padding_is_clear(&state);
            let text = format!("{out}\n# state {state}\n# padding clear {clear}\n");
            Ok(Output::new(text, json!({"output": out.to_string(), "state": state.to_string(), "padding_clear": clear}))
                .steps(l.circuit.len()))
        }
    }
}

pub(crate) fn lift(cmd: LiftCmd, ctx: &mut Ctx) -> CliResult<Output> {
    match cmd {
        LiftCmd::Bennett { file, input } => {
            let c = parse_classical(&ctx.read(&file)?).or_invalid()?;
            lift_output(bennett_lift(&c), input)
        }
        LiftCmd::Jms { forward, inverse, input } => {
            let f = parse_classical(&ctx.read(&forward)?).or_invalid()?;
            let fi = parse_classical(&ctx.read(&inverse)?).or_invalid()?;
            lift_output(jms_lift(&f, &fi).or_invalid()?, input)
        }
    }
}

fn run_schedule(s: &Schedule, check: bool) -> CliResult<Output> {
    let out = s.run().or_invalid()?;
    let mut text = format!("{out}\n# map width {} iterations {}\n", s.g.width(), s.total_iterations);
    let mut data = json!({
        "output": out.to_string(),
        "width": s.g.width(),
        "iterations": s.total_iterations.to_string(),
        "layout": s.layout.fields().iter().map(|f| json!({"name": f.name, "offset": f.offset, "width": f.width})).collect::<Vec<_>>(),
    });
    if check {
        let ok = check_exhaustive(&s.g)?;
        text.push_str(&format!("# bijective {ok}\n"));
        data["bijective"] = json!(ok);
        if !ok {
            return Err(CliError::Invalid(format!("compiled map {} is not bijective", s.g.label())));
        }
    }
    Ok(Output::new(text, data).steps(&s.total_iterations))
}

pub(crate) fn check_exhaustive(g: &Bijection) -> CliResult<bool> {
    if g.width() > MAX_EXHAUSTIVE_WIDTH {
        return Err(CliError::Usage(format!(
            "map is {} bits wide; exhaustive checks stop at {MAX_EXHAUSTIVE_WIDTH}",
            g.width()
        )));
    }
    Ok(check_bijection_exhaustive(g).or_invalid()?.is_bijective())
}

pub(crate) fn reduce(cmd: ReduceCmd, ctx: &mut Ctx) -> CliResult<Output> {
    match cmd {
        ReduceCmd::Summation { file, input, check } => {
            let f = load_circuit(ctx, &file)?.to_bijection().forward_only();
            let s = inversion_by_iteration(&f, &bits(&input, f.width())?).or_invalid()?;
            run_schedule(&s, check.check)
        }
        ReduceCmd::Clock { file, n, input, check } => {
            let f = load_circuit(ctx, &file)?.to_bijection().forward_only();
            let s = clock_schedule(&f, n, &bits(&input, f.width())?).or_invalid()?;
            run_schedule(&s, check.check)
        }
        ReduceCmd::Oracle { file, oracle, input, check } => {
            let oc = parse_oracle_circuit(&ctx.read(&file)?).or_invalid()?;
            let g = load_circuit(ctx, &oracle)?.to_bijection();
            let s = oracle_schedule(&oc, &g, &bits(&input, oc.inputs())?).or_invalid()?;
            run_schedule(&s, check.check)
        }
    }
}

use num_bigint::BigInt;
use serde_json::json;

use ibx_core::formats::{parse_circuit, parse_iet, parse_plb, parse_plb_pieces, write_plb};
use ibx_core::iet::{build_surface, three_gap_check, max_distinct_gaps};
use ibx_core::plb::{circuit_to_plb, compose_lift, riffle, rotate_low_bits, validate_plb, Plb};

use crate::{CliError, CliResult, Ctx, IetCmd, OrInvalid, Output, PlbCmd};

fn load_plb(ctx: &mut Ctx, path: &str) -> CliResult<Plb> {
    parse_plb(&ctx.read(path)?).or_invalid()
}

fn plb_output(t: &Plb) -> Output {
    let text = write_plb(t);
    Output::new(text.clone(), json!({"plb": text, "size": t.size().to_string(), "pieces": t.piece_count()}))
}

pub(crate) fn plb(cmd: PlbCmd, ctx: &mut Ctx) -> CliResult<Output> {
    match cmd {
        PlbCmd::Validate { file } => {
            let (size, pieces) = parse_plb_pieces(&ctx.read(&file)?).or_invalid()?;
            let count = pieces.len();
            let t = validate_plb(size, pieces).map_err(|e| CliError::Invalid(format!("not a bijection: {e}")))?;
            let exchange = t.is_interval_exchange();
            let text = format!("valid: {count} pieces on [0, {}), interval exchange {exchange}\n", t.size());
            Ok(Output::new(text, json!({"valid": true, "pieces": count, "interval_exchange": exchange})))
        }
        PlbCmd::Apply { file, x, inverse } => {
            let t = load_plb(ctx, &file)?;
            let y = if inverse { t.apply_inverse(&x) } else { t.apply(&x) }.or_invalid()?;
            Ok(Output::new(format!("{y}\n"), json!(y.to_string())))
        }
        PlbCmd::Iterate { file, n, x } => {
            let t = load_plb(ctx, &file)?;
            let y = t.iterate(&n, &x).or_invalid()?;
            Ok(Output::new(format!("{y}\n"), json!(y.to_string())).steps(n))
        }
        PlbCmd::Compose { files, x } => {
            let stages = files.iter().map(|f| load_plb(ctx, f)).collect::<CliResult<Vec<_>>>()?;
            let program = compose_lift(stages).or_invalid()?;
            let s = program.len();
            match x {
                Some(x) => {
                    let y = program.apply(&x).or_invalid()?;
                    Ok(Output::new(format!("{y}\n"), json!(y.to_string())).steps(s))
                }
                None => {
                    let mut out = plb_output(program.lifted());
                    out.text = format!("# stages {s} inner size {}\n{}", program.inner_size(), out.text);
                    Ok(out.steps(s))
                }
            }
        }
        PlbCmd::Riffle { n, order } => {
            if n < BigInt::from(1) {
                return Err(CliError::Usage("riffle needs n >= 1".into()));
            }
            let t = riffle(n);
            let mut out = plb_output(&t);
            if order {
                if t.size() > &BigInt::from(1u64 << 24) {
                    return Err(CliError::Usage("order is computed for n up to 2^24".into()));
                }
                let o = t.order();
                out.text.push_str(&format!("# order {o}\n"));
                out.data["order"] = json!(o.to_string());
            }
            Ok(out)
        }
        PlbCmd::Rotate { k, m } => Ok(plb_output(&rotate_low_bits(k, m))),
        PlbCmd::FromCircuit { file } => {
            let c = parse_circuit(&ctx.read(&file)?).or_invalid()?;
            let (t, s) = circuit_to_plb(&c).or_invalid()?;
            let mut out = plb_output(&t);
            out.text = format!("# steps {s}\n{}", out.text);
            out.data["steps_per_run"] = json!(s);
            Ok(out.steps(s))
        }
    }
}

pub(crate) fn iet(cmd: IetCmd, ctx: &mut Ctx) -> CliResult<Output> {
    match cmd {
        IetCmd::Build { file, dump } => {
            let t = parse_iet(&ctx.read(&file)?).or_invalid()?;
            let su = build_surface(&t).or_invalid()?;
            let listing = su.dump();
            let text = if dump {
                listing.clone()
            } else {
                listing.lines().next().unwrap_or_default().to_string() + "\n"
            };
            Ok(Output::new(text, json!({"size": su.size(), "triangles": su.triangle_count(), "dump": listing})))
        }
        IetCmd::Solve { file, i, n } => {
            let t = parse_iet(&ctx.read(&file)?).or_invalid()?;
            let y = build_surface(&t).and_then(|su| su.solve(i, &n)).or_invalid()?;
            Ok(Output::new(format!("{y}\n"), json!(y)).steps(n))
        }
        IetCmd::ThreeGap { big_n, c, n } => {
            if big_n == 0 {
                return Err(CliError::Usage("N must be positive".into()));
            }
            match n {
                Some(n) => {
                    let gaps: Vec<u64> = three_gap_check(big_n, c, n).into_iter().collect();
                    let list = gaps.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ");
                    Ok(Output::new(format!("{list}\n"), json!({"gaps": gaps, "distinct": gaps.len()})))
                }
                None => {
                    let worst = max_distinct_gaps(big_n, c);
                    Ok(Output::new(format!("{worst}\n"), json!({"max_distinct_gaps": worst})))
                }
            }
        }
    }
}

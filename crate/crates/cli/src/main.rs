mod input;
mod render;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use zclosure::closure::{
    closure_pipeline, symbolic_diagonal_pipeline, verify_ideal, verify_oracle, verify_symbolic_orbit, ClosureOptions,
    ClosureReport, Coords, Mode, OracleVerdict, PowerPoint,
};
use zclosure::exact::{format_rational, QMatrix};
use zclosure::intlinalg::lattice_equal;
use zclosure::multipoly::MonomialOrder;
use zclosure::toric::{degree_by_volume, realization_matrix, toric_from_points};

use input::CliError;

/// Number of powers checked by `verify` when `--verify` is not given.
const DEFAULT_VERIFY_K: usize = 50;

#[derive(Parser)]
#[command(name = "zclosure", version, about = "Zariski closures of cyclic matrix groups and semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// semigroup: powers k >= 1; group: all integer powers
    #[arg(long, global = true, default_value = "semigroup")]
    mode: Mode,
    /// Report in the input coordinates or in Jordan coordinates
    #[arg(long, global = true, default_value = "original")]
    coords: Coords,
    /// Monomial order of the reported Groebner basis
    #[arg(long, global = true, value_enum, default_value_t = OrderArg::Grevlex)]
    order: OrderArg,
    /// Check the result at the first K powers (0 skips the check)
    #[arg(long = "verify", global = true, value_name = "K", default_value_t = 0)]
    verify: usize,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
}

#[derive(Subcommand)]
enum Command {
    /// Closure of the powers of a rational matrix
    Closure {
        /// Matrix JSON file, `-` for stdin, or inline JSON
        input: String,
    },
    /// Toric varieties from lattice points
    Toric {
        #[command(subcommand)]
        action: ToricCommand,
    },
    /// Polynomial invariants of the loop x <- Mx (+ b)
    Invariants { input: String },
    /// Closure for a diagonal matrix with eigenvalues rational * exp(2 pi i phase)
    Symbolic { input: String },
    /// Check a matrix's closure, or a saved report, against the orbit
    Verify { input: String },
}

#[derive(Subcommand)]
enum ToricCommand {
    /// Diagonal matrix whose group closure is the toric variety of the points
    Realize {
        input: String,
        /// Recompute the closure of the matrix and compare lattices
        #[arg(long)]
        round_trip: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Lex,
    Grevlex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

impl Cli {
    fn options(&self) -> ClosureOptions {
        let order = match self.order {
            OrderArg::Lex => MonomialOrder::Lex,
            OrderArg::Grevlex => MonomialOrder::GrevLex,
        };
        ClosureOptions { mode: self.mode, coords: self.coords, order }
    }
}

fn describe(v: &OracleVerdict) -> Value {
    match v {
        OracleVerdict::Pass { points } => json!({ "passed": true, "points_checked": points }),
        OracleVerdict::Fail(c) => {
            let at = match c.at {
                PowerPoint::Power(k) => json!({ "power": k }),
                PowerPoint::Isolated(i) => json!({ "isolated_point": i }),
            };
            json!({ "passed": false, "counterexample": { "at": at, "generator": c.generator } })
        }
    }
}

fn check(v: OracleVerdict) -> Result<(), CliError> {
    match v {
        OracleVerdict::Pass { .. } => Ok(()),
        OracleVerdict::Fail(c) => {
            let at = match c.at {
                PowerPoint::Power(k) => format!("power {k}"),
                PowerPoint::Isolated(i) => format!("isolated point {i}"),
            };
            Err(CliError::Verify(format!("generator {} does not vanish at {at}", c.generator)))
        }
    }
}

fn emit(cli: &Cli, json: Value, text: impl FnOnce() -> Result<String, CliError>) -> Result<(), CliError> {
    match cli.output {
        Output::Json => println!("{}", serde_json::to_string_pretty(&json).expect("serializable")),
        Output::Text => print!("{}", text()?),
    }
    Ok(())
}

fn emit_report(cli: &Cli, r: &ClosureReport, title: &str) -> Result<(), CliError> {
    emit(cli, r.to_json()?, || Ok(render::report_text(r, title)?))
}

/// The matrix in the report's coordinates, for the oracle.
fn shown(r: &ClosureReport) -> &QMatrix {
    r.matrix.as_ref().expect("rational closure reports carry their matrix")
}

fn run_closure(cli: &Cli, m: &QMatrix, title: &str) -> Result<(), CliError> {
    let r = closure_pipeline(m, &cli.options())?;
    if cli.verify > 0 {
        check(verify_oracle(shown(&r), &r, cli.verify, cli.mode)?)?;
    }
    emit_report(cli, &r, title)
}

fn cmd_invariants(cli: &Cli, source: &str) -> Result<(), CliError> {
    let (m, b) = input::matrix_input(&input::read_json(source)?)?;
    match b {
        Some(b) if b.iter().any(|x| *x != num_traits::Zero::zero()) => {
            run_closure(cli, &input::augment(&m, &b), "polynomial invariants of x <- Mx + b (homogenized)")
        }
        _ => run_closure(cli, &m, "polynomial invariants of x <- Mx"),
    }
}

fn cmd_symbolic(cli: &Cli, source: &str) -> Result<(), CliError> {
    let eigs = input::symbolic_input(&input::read_json(source)?)?;
    let r = symbolic_diagonal_pipeline(&eigs, &cli.options())?;
    if cli.verify > 0 {
        check(verify_symbolic_orbit(&eigs, &r, cli.verify, cli.mode)?)?;
    }
    emit_report(cli, &r, "closure of a diagonal matrix")
}

fn cmd_realize(cli: &Cli, source: &str, round_trip: bool) -> Result<(), CliError> {
    let points = input::points_input(&input::read_json(source)?)?;
    let toric = toric_from_points(&points)?;
    let m = realization_matrix(&points)?;
    if round_trip {
        let r = closure_pipeline(&m, &ClosureOptions::mode(Mode::Group))?;
        let same = lattice_equal(r.relation_lattice.as_ref().expect("invertible"), &toric.kernel)
            .map_err(|e| CliError::Math(e.to_string()))?;
        if !same {
            return Err(CliError::Verify("relation lattice of the realizing matrix differs from the kernel".into()));
        }
    }
    let degree = degree_by_volume(&points).ok();
    let diagonal: Vec<String> = (0..m.rows()).map(|i| format_rational(&m[(i, i)])).collect();
    let json = json!({
        "matrix": m,
        "diagonal": diagonal,
        "toric": toric.to_json()?,
        "degree": degree.as_ref().map(|d| d.to_string()),
        "round_trip": if round_trip { json!(true) } else { Value::Null },
    });
    emit(cli, json, || {
        let mut out = format!("diagonal matrix: diag({})\n", diagonal.join(", "));
        render::toric_text(&toric, &render::Style::plain(), &mut out)?;
        if let Some(d) = &degree {
            out.push_str(&format!("degree (normalized volume): {d}\n"));
        }
        if round_trip {
            out.push_str("round trip: relation lattice equals the kernel\n");
        }
        Ok(out)
    })
}

fn cmd_verify(cli: &Cli, source: &str) -> Result<(), CliError> {
    let v = input::read_json(source)?;
    let k = if cli.verify > 0 { cli.verify } else { DEFAULT_VERIFY_K };
    let (verdict, mode) = if v.get("ideal").is_some() {
        let saved = input::saved_report(&v)?;
        let mode: Mode = saved.mode.parse().map_err(CliError::Input)?;
        (verify_ideal(&saved.matrix, &saved.ideal, &saved.isolated, k, mode)?, mode)
    } else {
        let (m, _) = input::matrix_input(&v)?;
        let r = closure_pipeline(&m, &cli.options())?;
        (verify_oracle(shown(&r), &r, k, cli.mode)?, cli.mode)
    };
    let mut json = describe(&verdict);
    json["k"] = json!(k);
    json["mode"] = json!(mode.to_string());
    emit(cli, json, || {
        Ok(match &verdict {
            OracleVerdict::Pass { points } => format!("passed: {points} points checked (K = {k}, {mode} mode)\n"),
            OracleVerdict::Fail(_) => "failed\n".to_string(),
        })
    })?;
    check(verdict)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Closure { input } => {
            let (m, _) = input::matrix_input(&input::read_json(input)?)?;
            run_closure(cli, &m, "closure")
        }
        Command::Toric { action: ToricCommand::Realize { input, round_trip } } => cmd_realize(cli, input, *round_trip),
        Command::Invariants { input } => cmd_invariants(cli, input),
        Command::Symbolic { input } => cmd_symbolic(cli, input),
        Command::Verify { input } => cmd_verify(cli, input),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zclosure: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}

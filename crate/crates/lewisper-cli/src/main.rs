mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "lewisper", version, about = "Maass forms, period functions and transfer operators for twisted modular groups")]
struct Cli {
    /// Worker threads for grid evaluation
    #[arg(long, global = true, env = "LEWISPER_THREADS")]
    threads: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "report")]
    format: Format,
    /// Write the report or CSV here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Validate a representation and print its data
    Repinfo(RepArgs),
    /// Search a window for a cusp form (trivial representation)
    Solve(SolveArgs),
    /// Evaluate the cusp form at points of the upper half-plane
    Eval(EvalArgs),
    /// Period function values on a real grid or at given points
    Period(PeriodArgs),
    /// Residual of the three-term equation on a grid
    LewisCheck(LewisCheckArgs),
    /// Eigenvalues of a discretized transfer operator
    TransferSpec(TransferArgs),
    /// Completed L-functions and their functional equations
    Lfunc(LfuncArgs),
    /// Build a form from Dirichlet data and test the hypotheses
    Converse(FormArgs),
    /// Decay and boundedness of the period function
    Asymptotics(AsymptoticsArgs),
}

fn existing_file(s: &str) -> Result<PathBuf, String> {
    let p = PathBuf::from(s);
    if p.is_file() {
        Ok(p)
    } else {
        Err(format!("no such file: {s}"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

fn grid_spec(s: &str) -> Result<String, String> {
    grid::parse_grid(s).map(|_| s.to_string()).map_err(|e| e.to_string())
}

fn point(s: &str) -> Result<String, String> {
    grid::parse_c64(s).map(|_| s.to_string()).map_err(|e| e.to_string())
}

#[derive(Args, Debug, Serialize)]
struct RepArgs {
    /// Built-in name (trivial, s3-sign, s3-std, gamma0:N, gamma:N) or a file
    #[arg(long, default_value = "trivial")]
    rep: String,
}

#[derive(Args, Debug, Serialize)]
struct FormArgs {
    /// Coefficient file
    #[arg(long, value_parser = existing_file)]
    form: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    rep: RepArgs,
}

#[derive(Args, Debug, Serialize)]
struct SolveArgs {
    /// Spectral window lo:hi in R
    #[arg(long, value_parser = |s: &str| grid::parse_window(s).map(|_| s.to_string()).map_err(|e| e.to_string()))]
    window: String,
    #[arg(long, value_enum, default_value = "even")]
    parity: commands::ParityArg,
    #[arg(long, default_value_t = 25)]
    kmax: usize,
    #[arg(long, default_value_t = 0.2, value_parser = positive)]
    y0: f64,
    /// Automorphy residual a solution must meet
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    tol: f64,
    /// Coefficient file to write
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    form: FormArgs,
    /// Point re,im (repeatable)
    #[arg(long = "z", required = true, value_parser = point)]
    points: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
struct PeriodArgs {
    #[command(flatten)]
    #[serde(flatten)]
    form: FormArgs,
    /// Real grid start:stop:count
    #[arg(long, default_value = "0.1:10:100", value_parser = grid_spec)]
    grid: String,
    /// Extra complex points re,im (repeatable)
    #[arg(long = "z", value_parser = point)]
    points: Vec<String>,
    #[arg(long, value_enum, default_value = "auto")]
    route: commands::RouteArg,
}

#[derive(Args, Debug, Serialize)]
struct LewisCheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    form: FormArgs,
    #[arg(long, default_value = "0.1:10:100", value_parser = grid_spec)]
    grid: String,
    #[arg(long, default_value_t = 1e-7, value_parser = positive)]
    tol: f64,
}

#[derive(Args, Debug, Serialize)]
struct TransferArgs {
    /// L0, Linf or Gauss
    #[arg(long, default_value = "Gauss")]
    kind: String,
    /// Spectral parameter re,im
    #[arg(long, value_parser = point)]
    nu: String,
    #[command(flatten)]
    #[serde(flatten)]
    rep: RepArgs,
    #[arg(long, default_value_t = 40)]
    basis: usize,
    /// Eigenvalues to report
    #[arg(long, default_value_t = 3)]
    count: usize,
}

#[derive(Args, Debug, Serialize)]
struct LfuncArgs {
    #[command(flatten)]
    #[serde(flatten)]
    form: FormArgs,
    /// Point s = re,im (repeatable); defaults to a probe grid in the critical strip
    #[arg(long = "s", value_parser = point)]
    points: Vec<String>,
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    tol: f64,
}

#[derive(Args, Debug, Serialize)]
struct AsymptoticsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    form: FormArgs,
    /// Bound exponent c with ψ(z) = O(|z|^{-c}); must lie in (0, 2 Re nu + 1)
    #[arg(long, default_value_t = 0.5, value_parser = positive)]
    c: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli.command) {
        Ok((name, out)) => {
            let config = serde_json::to_value(&cli.command).unwrap_or_default();
            let config = config.as_object().and_then(|m| m.values().next().cloned()).unwrap_or(config);
            let text = output::render(name, &config, &out, cli.format);
            if let Err(e) = output::emit(&text, cli.output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                for f in &out.failures {
                    eprintln!("check failed: {f}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

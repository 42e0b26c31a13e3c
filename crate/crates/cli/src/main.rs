use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rkdg_cli::{parse_assignment, parse_text, resolve, run, CliError};

/// Accuracy, stability and CFL experiments for RKDG and sdA-RKDG schemes.
///
/// Settings come from an optional `key = value` file; flags and `--set`
/// assignments override it. Exit status: 0 on success (blow-up rows only
/// warn), 1 for configuration errors, 2 for I/O errors, 3 when rows failed.
#[derive(Debug, Parser)]
#[command(name = "rkdg", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,

    /// configuration file of `key = value` lines
    #[arg(short, long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// override any configuration key
    #[arg(short, long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// RK orders, e.g. 2,3,4
    #[arg(long, global = true)]
    r: Option<String>,

    /// polynomial degrees, or `auto` for k = r - 1
    #[arg(long, global = true)]
    k: Option<String>,

    /// standard, sdA or both
    #[arg(long, global = true)]
    variant: Option<String>,

    #[arg(long, global = true)]
    dim: Option<String>,

    /// cells per direction, e.g. 20,40,80
    #[arg(short = 'n', long = "n", global = true, value_name = "N")]
    n: Option<String>,

    /// CFL grid (stability) or CFL step rule (accuracy); `a:step:b` ranges work
    #[arg(long, global = true, conflicts_with = "tau")]
    cfl: Option<String>,

    /// fixed time step
    #[arg(long, global = true)]
    tau: Option<String>,

    /// final time
    #[arg(short = 't', long = "final-time", global = true, value_name = "T")]
    t_final: Option<String>,

    /// step counts for the delta metric
    #[arg(long, global = true)]
    m: Option<String>,

    /// regularity index relative to r: r, r+1 or both
    #[arg(long, global = true)]
    flat: Option<String>,

    /// node perturbation fraction (1D)
    #[arg(long, global = true)]
    perturb: Option<String>,

    #[arg(long, global = true)]
    seed: Option<String>,

    /// output CSV path, `-` for stdout
    #[arg(short, long, global = true)]
    output: Option<String>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Cmd {
    /// smooth-data error tables
    Accuracy,
    /// limited-regularity error tables
    Regularity,
    /// delta sweeps over CFL numbers
    Stability,
    /// Fourier CFL numbers
    Cfl,
    /// operator identities on random states
    PropTests,
}

impl Cmd {
    fn name(self) -> &'static str {
        match self {
            Cmd::Accuracy => "accuracy",
            Cmd::Regularity => "regularity",
            Cmd::Stability => "stability",
            Cmd::Cfl => "cfl",
            Cmd::PropTests => "prop-tests",
        }
    }
}

fn flag_pairs(cli: &Cli) -> Result<Vec<(String, String)>, CliError> {
    let named = [
        ("command", cli.command.map(|c| c.name().to_string())),
        ("r", cli.r.clone()),
        ("k", cli.k.clone()),
        ("variant", cli.variant.clone()),
        ("dim", cli.dim.clone()),
        ("N", cli.n.clone()),
        ("cfl", cli.cfl.clone()),
        ("tau", cli.tau.clone()),
        ("T", cli.t_final.clone()),
        ("m", cli.m.clone()),
        ("flat", cli.flat.clone()),
        ("perturb", cli.perturb.clone()),
        ("seed", cli.seed.clone()),
        ("output", cli.output.clone()),
    ];
    let mut out: Vec<(String, String)> = cli.set.iter().map(|s| parse_assignment(s)).collect::<Result<_, _>>()?;
    for (key, value) in named {
        if let Some(v) = value {
            if out.iter().any(|(k, _)| k == key) {
                return Err(CliError::Conflict(format!("`{key}` given both as a flag and with --set")));
            }
            out.push((key.to_string(), v));
        }
    }
    Ok(out)
}

fn init_workers() -> Result<(), CliError> {
    let Ok(v) = std::env::var("RKDG_WORKERS") else {
        return Ok(());
    };
    let n: usize = match v.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return Err(CliError::invalid_env("RKDG_WORKERS", &v)),
    };
    // a second initialisation is harmless; keep the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn main_inner(cli: Cli) -> Result<u8, CliError> {
    init_workers()?;
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            parse_text(&text)?
        }
        None => Vec::new(),
    };
    let cfg = resolve(&file, &flag_pairs(&cli)?)?;
    let outcome = run(&cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &outcome.csv).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => std::io::stdout()
            .write_all(outcome.csv.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })?,
    }
    if outcome.flagged > 0 {
        eprintln!("warning: {} row(s) flagged as numerical blow-up", outcome.flagged);
    }
    if outcome.failed > 0 {
        eprintln!("error: {} row(s) failed", outcome.failed);
        return Ok(3);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

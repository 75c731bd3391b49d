//! `drinfeld` — exact arithmetic for rank-1 sign-normalized Drinfeld modules
//! over coordinate rings of elliptic curves, their tensor-power Anderson
//! modules, and the associated special zeta values.

use clap::{Args, Parser, Subcommand, ValueEnum};
use drinfeld_cli::commands::{self, CmdOut, ZetaMode};
use drinfeld_cli::session::CurveSpec;
use drinfeld_cli::CliResult;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "drinfeld",
    version,
    about = "Exact Drinfeld/Anderson module calculator over elliptic coordinate rings",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Output format selection, shared by every subcommand.
#[derive(Args, Clone, Copy, Debug)]
struct OutFmt {
    /// Emit machine-readable JSON on stdout (the default).
    #[arg(long)]
    json: bool,
    /// Emit human-readable text instead of JSON.
    #[arg(long, conflicts_with = "json")]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Report q, the divisor class number, and nonsingularity of the curve.
    CurveInfo {
        /// Path to a curve-spec JSON file.
        spec: PathBuf,
        #[command(flatten)]
        fmt: OutFmt,
    },
    /// Compute the distinguished point V and the shtuka function f.
    Shtuka {
        spec: PathBuf,
        #[command(flatten)]
        fmt: OutFmt,
    },
    /// Compute the basis functions g_i, h_i and structure constants for the
    /// n-th tensor power.
    Basis {
        spec: PathBuf,
        /// Tensor power (1 <= n <= q-1).
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        fmt: OutFmt,
    },
    /// Compute the Anderson module structure: d-matrices and the tau-matrices
    /// rho_t, rho_y.
    Module {
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        fmt: OutFmt,
    },
    /// Compute exponential coefficient matrices Q_0..Q_T.
    Exp {
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Number of coefficient matrices beyond Q_0.
        #[arg(long, default_value_t = 5)]
        terms: usize,
        #[command(flatten)]
        fmt: OutFmt,
    },
    /// Compute logarithm coefficient matrices P_0..P_T.
    Log {
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        terms: usize,
        #[command(flatten)]
        fmt: OutFmt,
    },
    /// Partial sums of the zeta value: term i is b times the degree-i power
    /// sum S_i(s).
    Zeta {
        spec: PathBuf,
        /// Coefficient-ring element, e.g. "1", "T^2 + 2", "T*Y + [0,1]".
        #[arg(long, default_value = "1")]
        b: String,
        /// Exponent s >= 1 (closed mode requires s <= q-1).
        #[arg(long, default_value_t = 1)]
        s: i64,
        /// Highest power-sum degree to include.
        #[arg(long, default_value_t = 4)]
        terms: usize,
        /// Evaluation strategy for the power sums.
        #[arg(long, value_enum, default_value_t = ModeArg::Closed)]
        mode: ModeArg,
        #[command(flatten)]
        fmt: OutFmt,
    },
    /// Compute the zeta vector: the constant C, the per-twist summand
    /// vectors, and their total.
    ZetaVector {
        spec: PathBuf,
        #[arg(long, default_value = "1")]
        b: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        fmt: OutFmt,
    },
    /// Run the full verification battery and report each check.
    Verify {
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Depth for the recurrence / inversion / cross-check identities.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Working precision (Laurent digits) for the tail comparison.
        #[arg(long, default_value_t = 64)]
        precision: usize,
        /// Seed for the randomized property suites.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        fmt: OutFmt,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    Brute,
    Closed,
}

fn emit(out: &CmdOut, fmt: OutFmt) {
    use std::io::Write;
    let text = if fmt.pretty {
        out.pretty.clone()
    } else {
        let mut line = serde_json::to_string(&out.value).expect("serializable");
        line.push('\n');
        line
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = lock.write_all(text.as_bytes()).and_then(|_| lock.flush()) {
        // A closed pipe (e.g. piping into `head`) is a normal way for the
        // reader to stop early; anything else is a genuine I/O failure.
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("drinfeld: cannot write output: {e}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::CurveInfo { spec, fmt } => {
            let spec = CurveSpec::load(&spec)?;
            let (out, nonsingular) = commands::curve_info(&spec)?;
            emit(&out, fmt);
            Ok(if nonsingular { 0 } else { 1 })
        }
        Command::Shtuka { spec, fmt } => {
            let ctx = CurveSpec::load(&spec)?.context()?;
            emit(&commands::shtuka(&ctx)?, fmt);
            Ok(0)
        }
        Command::Basis { spec, n, fmt } => {
            let ctx = CurveSpec::load(&spec)?.context()?;
            emit(&commands::basis(&ctx, n)?, fmt);
            Ok(0)
        }
        Command::Module { spec, n, fmt } => {
            let ctx = CurveSpec::load(&spec)?.context()?;
            emit(&commands::module(&ctx, n)?, fmt);
            Ok(0)
        }
        Command::Exp { spec, n, terms, fmt } => {
            let ctx = CurveSpec::load(&spec)?.context()?;
            emit(&commands::exp(&ctx, n, terms)?, fmt);
            Ok(0)
        }
        Command::Log { spec, n, terms, fmt } => {
            let ctx = CurveSpec::load(&spec)?.context()?;
            emit(&commands::log(&ctx, n, terms)?, fmt);
            Ok(0)
        }
        Command::Zeta { spec, b, s, terms, mode, fmt } => {
            let ctx = CurveSpec::load(&spec)?.context()?;
            let mode = match mode {
                ModeArg::Brute => ZetaMode::Brute,
                ModeArg::Closed => ZetaMode::Closed,
            };
            emit(&commands::zeta(&ctx, &b, s, terms, mode)?, fmt);
            Ok(0)
        }
        Command::ZetaVector { spec, b, n, fmt } => {
            let ctx = CurveSpec::load(&spec)?.context()?;
            emit(&commands::zeta_vector_cmd(&ctx, &b, n)?, fmt);
            Ok(0)
        }
        Command::Verify { spec, n, depth, precision, seed, fmt } => {
            let ctx = CurveSpec::load(&spec)?.context()?;
            let (out, all_pass) = commands::verify(&ctx, n, depth, precision, seed, 200)?;
            emit(&out, fmt);
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

fn main() {
    // clap prints usage errors to stderr and exits 2; --help/--version exit 0.
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("drinfeld: {}", f.message());
            std::process::exit(f.exit_code());
        }
    }
}

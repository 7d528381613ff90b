use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qudit_rb::cli::{self, RunOptions, Suite};

#[derive(Parser)]
#[command(name = "qrb", version, about = "Randomized benchmarking of qudit Clifford gates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML file
    Run {
        spec: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Use infinite-shot survival probabilities
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        emit_plot: bool,
    },
    /// Run a built-in check: design, counterexample or cardinality
    Verify { suite: String },
    /// Enumerate the Clifford group for prime d and n qudits
    Enumerate {
        d: u32,
        n: usize,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

fn run(cmd: Command) -> Result<i32, qudit_rb::Error> {
    match cmd {
        Command::Run { spec, seed, exact, out, emit_plot } => {
            let res = cli::cmd_run(&spec, &RunOptions { seed, exact, out, emit_plot })?;
            let r = &res.report;
            for f in &res.files {
                println!("wrote {}", f.display());
            }
            if r.flat_curve {
                println!("flat curve at level {:.6}; no resolvable decay", r.b0_hat);
            }
            println!("p_hat = {:.10}  A0 = {:.6}  B0 = {:.6}", r.p_hat, r.a0_hat, r.b0_hat);
            println!("{}", r.r_hat);
            Ok(cli::EXIT_OK)
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let rep = cli::cmd_verify(suite)?;
            for l in &rep.lines {
                println!("{l}");
            }
            if rep.passed() {
                Ok(cli::EXIT_OK)
            } else {
                for f in &rep.failures {
                    eprintln!("failed: {f}");
                }
                Ok(cli::EXIT_VERIFY_FAILED)
            }
        }
        Command::Enumerate { d, n, cache } => {
            let (_, msg) = cli::cmd_enumerate(d, n, cache.as_deref())?;
            println!("{msg}");
            Ok(cli::EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    if let Some(threads) = std::env::var("QRB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // ignore failure: the pool may already exist
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let code = match run(args.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            cli::exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use poisson_forge_cli::{run_str, Options};

/// Runs one Poisson algebra problem described in JSON and prints a JSON
/// report. Exit codes: 0 holds or value computed, 1 fails with a
/// counterexample, 2 input or usage error.
#[derive(Parser, Debug)]
#[command(name = "poisson-forge", version)]
struct Args {
    /// Descriptor file; reads stdin when absent or `-`.
    input: Option<PathBuf>,
    /// Seed for randomized trials.
    #[arg(long)]
    seed: Option<u64>,
    /// Degree bound for sampled operands and scans.
    #[arg(long)]
    bound: Option<u32>,
    /// Number of randomized trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Monomial order: grevlex, grlex or lex.
    #[arg(long)]
    order: Option<String>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let mut input = String::new();
    let read = match &args.input {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map(|s| input = s),
        _ => std::io::stdin().read_to_string(&mut input).map(|_| ()),
    };
    if let Err(e) = read {
        eprintln!("error: cannot read input: {e}");
        return ExitCode::from(2);
    }
    let overrides = Options {
        degree_bound: args.bound,
        trials: args.trials,
        seed: args.seed,
        order: args.order,
    };
    let out = run_str(&input, &overrides);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}

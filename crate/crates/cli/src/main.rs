mod family;
mod input;
mod largesieve;
mod report;
mod rs;
mod sieve;
mod verify;
mod zeros;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use report::{emit, to_value, CliResult, Failure, Report};

#[derive(Parser, Debug)]
#[command(name = "autosieve", version, about = "Rankin-Selberg, sieve and zero-density experiments")]
struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "AUTOSIEVE_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report (or family file) destination; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Destination of the command's CSV table.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Identity and inequality checks on random data.
    #[command(subcommand)]
    Verify(verify::Verify),
    /// Rankin-Selberg coefficients of family members.
    #[command(subcommand)]
    Rs(rs::Rs),
    /// Selberg weights and smoothed sums.
    #[command(subcommand)]
    Sieve(sieve::Sieve),
    /// Large sieve ratios and mean values.
    #[command(subcommand)]
    Largesieve(largesieve::LargeSieve),
    /// Zero scans, density counts and zero detection.
    #[command(subcommand)]
    Zeros(zeros::Zeros),
    /// Write family files.
    #[command(subcommand)]
    Family(family::FamilyCmd),
}

/// `"group sub"` and the subcommand's own arguments.
fn describe(cmd: &Command) -> (&'static str, serde_json::Value) {
    use family::FamilyCmd as F;
    use largesieve::LargeSieve as L;
    use sieve::Sieve as S;
    use verify::Verify as V;
    use zeros::Zeros as Z;
    match cmd {
        Command::Verify(V::Cauchy(a)) => ("verify cauchy", to_value(a)),
        Command::Verify(V::Prop31(a)) => ("verify prop31", to_value(a)),
        Command::Verify(V::Hseries(a)) => ("verify hseries", to_value(a)),
        Command::Verify(V::Mertens(a)) => ("verify mertens", to_value(a)),
        Command::Verify(V::Turan(a)) => ("verify turan", to_value(a)),
        Command::Rs(rs::Rs::Expand(a)) => ("rs expand", to_value(a)),
        Command::Sieve(S::Weights(a)) => ("sieve weights", to_value(a)),
        Command::Sieve(S::Smoothed(a)) => ("sieve smoothed", to_value(a)),
        Command::Sieve(S::PartialLower(a)) => ("sieve partial-lower", to_value(a)),
        Command::Largesieve(L::Ratio(a)) => ("largesieve ratio", to_value(a)),
        Command::Largesieve(L::PrimeWindow(a)) => ("largesieve prime-window", to_value(a)),
        Command::Largesieve(L::Gallagher(a)) => ("largesieve gallagher", to_value(a)),
        Command::Largesieve(L::Mvt(a)) => ("largesieve mvt", to_value(a)),
        Command::Zeros(Z::Scan(a)) => ("zeros scan", to_value(a)),
        Command::Zeros(Z::Zde(a)) => ("zeros zde", to_value(a)),
        Command::Zeros(Z::Detect(a)) => ("zeros detect", to_value(a)),
        Command::Zeros(Z::Identity(a)) => ("zeros identity", to_value(a)),
        Command::Zeros(Z::Subconvexity(a)) => ("zeros subconvexity", to_value(a)),
        Command::Family(F::Sample(a)) => ("family sample", to_value(a)),
        Command::Family(F::Characters(a)) => ("family characters", to_value(a)),
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Io(e.to_string()))?;
    }
    if let Command::Family(cmd) = &cli.command {
        if cli.csv.is_some() {
            return Err(Failure::Usage("family commands write no CSV".into()));
        }
        return emit(&family::run(cmd, cli.seed)?, cli.out.as_deref());
    }

    let (name, args) = describe(&cli.command);
    let config = json!({"command": name, "seed": cli.seed, "args": args});
    let mut report = Report::new(name, config);
    match &cli.command {
        Command::Verify(c) => verify::run(c, cli.seed, &mut report)?,
        Command::Rs(c) => rs::run(c, &mut report)?,
        Command::Sieve(c) => sieve::run(c, &mut report)?,
        Command::Largesieve(c) => largesieve::run(c, cli.seed, &mut report)?,
        Command::Zeros(c) => zeros::run(c, &mut report)?,
        Command::Family(_) => unreachable!("handled above"),
    }
    if let Some(path) = &cli.csv {
        match &report.table {
            Some(t) => t.write(path)?,
            None => return Err(Failure::Usage(format!("{name} has no CSV table"))),
        }
    }
    emit(&report.to_json(), cli.out.as_deref())?;
    match report.violations() {
        [] => Ok(()),
        v => Err(Failure::Validation(v.join("; "))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", Failure::Usage(e.render().to_string()).to_json());
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}

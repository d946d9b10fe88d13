use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use haagerup_core::harness::{
    cmd_enumerate, cmd_norm, cmd_verify, rows_status, write_csv, write_enumeration, ExitStatus, RunConfig,
    OPERATOR_NORM_NOTE,
};
use haagerup_core::Error;

/// Non-crossing partition enumeration, moment computations and inequality checks.
#[derive(Parser)]
#[command(name = "haagerup", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the partitions of a family as CSV.
    Enumerate(Common),
    /// Run a verification suite; exit 1 if any row fails.
    Verify(Common),
    /// Norms and bounds for a family file.
    Norm {
        /// Family file.
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Default)]
struct Common {
    /// key=value file supplying defaults for unset flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    suite: Option<String>,
    /// nc, ncstar, ncstar2, ncdm or interval-pairings.
    #[arg(long)]
    family: Option<String>,
    /// circular, haar, semicircle or rdiag:a1,a2,...
    #[arg(long)]
    spec: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    alpha: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Enumeration cap on the ground size.
    #[arg(long)]
    cap: Option<usize>,
    /// Use the non-holomorphic formula for a plain family.
    #[arg(long)]
    nonholo: bool,
}

impl Common {
    fn into_config(self, input: Option<PathBuf>) -> Result<RunConfig, Error> {
        let flags = RunConfig {
            suite: self.suite,
            family: self.family,
            spec: self.spec,
            n: self.n,
            d: self.d,
            m: self.m,
            r: self.r,
            alpha: self.alpha,
            p: self.p,
            seed: self.seed,
            trials: self.trials,
            tol: self.tol,
            cap: self.cap,
            nonholo: self.nonholo.then_some(true),
            input,
            out: self.out,
        };
        match self.config {
            Some(path) => Ok(flags.or(RunConfig::from_file(&path)?)),
            None => Ok(flags),
        }
    }
}

fn output(cfg: &RunConfig) -> Result<Box<dyn Write>, Error> {
    Ok(match &cfg.out {
        Some(path) => Box::new(File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<ExitStatus, Error> {
    match cli.command {
        Command::Enumerate(common) => {
            let cfg = common.into_config(None)?;
            let e = cmd_enumerate(&cfg)?;
            write_enumeration(output(&cfg)?, &e)?;
            eprintln!("{}", e.summary);
            Ok(if e.consistent { ExitStatus::Pass } else { ExitStatus::Failure })
        }
        Command::Verify(common) => {
            let cfg = common.into_config(None)?;
            let rows = cmd_verify(&cfg)?;
            write_csv(output(&cfg)?, &rows)?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            eprintln!("{} rows, {failed} failed", rows.len());
            eprintln!("{OPERATOR_NORM_NOTE}");
            Ok(rows_status(&rows))
        }
        Command::Norm { file, common } => {
            let cfg = common.into_config(Some(file))?;
            let text = cmd_norm(&cfg)?;
            output(&cfg)?.write_all(text.as_bytes())?;
            Ok(ExitStatus::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { ExitStatus::Usage as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::Usage as u8)
        }
    }
}

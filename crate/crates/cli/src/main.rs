use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use crosshull_cli::format::parse_rational;
use crosshull_cli::{run, Command, RunConfig};

#[derive(Parser)]
#[command(name = "crosshull", version, about = "Exact convex extremal functions and envelopes of Reinhardt crosses")]
struct Cli {
    #[command(subcommand)]
    group: Group,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Truncation level M: polydisc log-images start at -M.
    #[arg(long, global = true, default_value = "64")]
    truncation: String,
    /// Decimal digits for modulus input and approximate modulus output.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Accept decimal moduli (rounded to rational logarithms).
    #[arg(long, global = true)]
    inexact: bool,
    /// Record wall-clock time in the report (makes reports non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Group {
    /// Convex extremal function of a pair S ⊆ U.
    #[command(subcommand)]
    Phi(PhiCmd),
    /// Hulls of crosses.
    #[command(subcommand)]
    Cross(CrossCmd),
    /// Reinhardt domains in logarithmic coordinates.
    #[command(subcommand)]
    Reinhardt(ReinhardtCmd),
}

#[derive(Subcommand)]
enum PhiCmd {
    /// Evaluate at the given points.
    Eval {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Seeded check of range, hull invariance, rescaling and exhaustion.
    Verify(Campaign),
}

#[derive(Subcommand)]
enum CrossCmd {
    /// Seeded check that the hull of the cross is the sublevel set {Σ Φ < 1}.
    Verify(Campaign),
}

#[derive(Subcommand)]
enum ReinhardtCmd {
    /// Domain-of-holomorphy test with certificate.
    Doh {
        #[arg(long)]
        domain: PathBuf,
    },
    /// Log-image of the envelope of holomorphy.
    Envelope {
        #[arg(long)]
        domain: PathBuf,
    },
    /// Relative extremal function at log-space points.
    Hstar {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "D")]
        d: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Seeded check of the envelope of a Reinhardt cross.
    CrossVerify(Campaign),
}

#[derive(Args)]
struct Campaign {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn command(group: Group) -> Command {
    match group {
        Group::Phi(PhiCmd::Eval { spec, points }) => Command::PhiEval { spec, points },
        Group::Phi(PhiCmd::Verify(c)) => Command::PhiVerify {
            spec: c.spec,
            samples: c.samples,
            seed: c.seed,
        },
        Group::Cross(CrossCmd::Verify(c)) => Command::CrossVerify {
            spec: c.spec,
            samples: c.samples,
            seed: c.seed,
        },
        Group::Reinhardt(ReinhardtCmd::Doh { domain }) => Command::ReinhardtDoh { domain },
        Group::Reinhardt(ReinhardtCmd::Envelope { domain }) => Command::ReinhardtEnvelope { domain },
        Group::Reinhardt(ReinhardtCmd::Hstar { a, d, points }) => Command::ReinhardtHstar { a, d, points },
        Group::Reinhardt(ReinhardtCmd::CrossVerify(c)) => Command::ReinhardtCrossVerify {
            spec: c.spec,
            samples: c.samples,
            seed: c.seed,
        },
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, matching the input-error code
    let cli = Cli::parse();
    match try_main(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn try_main(cli: Cli) -> anyhow::Result<u8> {
    let truncation = parse_rational(&cli.truncation).context("--truncation")?;
    let config = RunConfig {
        command: command(cli.group),
        truncation,
        precision: cli.precision,
        inexact: cli.inexact,
        timing: cli.timing,
    };
    let outcome = run(&config);
    if let Some(err) = outcome.report.get("error") {
        eprintln!("error: {}", err.as_str().unwrap_or_default());
    }
    let text = outcome.render();
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(outcome.exit_code)
}

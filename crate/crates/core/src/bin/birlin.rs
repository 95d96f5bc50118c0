use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use birlin::brauer::verify_main;
use birlin::genericity::enumerate_configs;
use birlin::report::{self, Format, MuReport};
use birlin::{
    compose_mu, descent_chain, fixed_det_report, run_sweep, BundleType, Error, Genus, SweepConfig,
    Verdict,
};

/// Birational descent for moduli of stable bundles on curves.
#[derive(Parser)]
#[command(name = "birlin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Pretty,
    Json,
    Tsv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Pretty => Format::Pretty,
            OutFormat::Json => Format::Json,
            OutFormat::Tsv => Format::Tsv,
        }
    }
}

#[derive(Args)]
struct TypeArgs {
    #[arg(long)]
    genus: i64,
    #[arg(long)]
    rank: i64,
    #[arg(long, allow_negative_numbers = true)]
    degree: i64,
    #[arg(long, value_enum, default_value = "pretty")]
    format: OutFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Print the descent chain down to a terminal type.
    Chain(TypeArgs),
    /// Print the composed map and its fiber-dimension ledger.
    Mu(TypeArgs),
    /// Transport the weight class along the main diagram.
    Brauer {
        #[command(flatten)]
        ty: TypeArgs,
        /// Show every edge of the derivation.
        #[arg(long)]
        trace: bool,
    },
    /// Sweep a box of types and check every invariant.
    Verify {
        #[arg(long)]
        genus: i64,
        /// Sweep every genus from --genus up to this value.
        #[arg(long)]
        genus_max: Option<i64>,
        #[arg(long)]
        max_rank: i64,
        #[arg(long)]
        max_degree: i64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "pretty")]
        format: OutFormat,
    },
    /// Enumerate kernel/torsion configurations of maps F -> E.
    Hirsch {
        #[arg(long)]
        genus: i64,
        #[arg(long)]
        rank_f: i64,
        #[arg(long, allow_negative_numbers = true)]
        degree_f: i64,
        #[arg(long)]
        rank_e: i64,
        #[arg(long, allow_negative_numbers = true)]
        degree_e: i64,
        #[arg(long, default_value_t = 4)]
        max_dt: i64,
        #[arg(long, value_enum, default_value = "pretty")]
        format: OutFormat,
    },
}

enum Outcome {
    Ok(String),
    Violation(String, String),
}

fn parse_type(a: &TypeArgs) -> Result<(Genus, BundleType), Error> {
    Ok((Genus::new(a.genus)?, BundleType::new(a.rank, a.degree)?))
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Chain(a) => {
            let (g, t) = parse_type(&a)?;
            let chain = descent_chain(g, t)?;
            chain.check()?;
            Ok(Outcome::Ok(report::render_chain(&chain, a.format.into())))
        }
        Command::Mu(a) => {
            let (g, t) = parse_type(&a)?;
            let tree = compose_mu(g, t)?;
            tree.check_ledger()?;
            let rep = MuReport {
                tree,
                fixed_det: fixed_det_report(g, t)?,
            };
            Ok(Outcome::Ok(report::render_mu(&rep, a.format.into())))
        }
        Command::Brauer { ty, trace } => {
            let (g, t) = parse_type(&ty)?;
            let d = verify_main(g, t)?;
            let out = report::render_derivation(&d, trace, ty.format.into());
            if d.verdict == Verdict::Equal && d.replays()? {
                Ok(Outcome::Ok(out))
            } else {
                Ok(Outcome::Violation(
                    out,
                    format!("transported class {} differs from {}", d.result, d.expected),
                ))
            }
        }
        Command::Verify {
            genus,
            genus_max,
            max_rank,
            max_degree,
            jobs,
            format,
        } => {
            let rep = run_sweep(&SweepConfig {
                genus_min: genus,
                genus_max: genus_max.unwrap_or(genus),
                max_rank,
                max_degree,
                jobs,
            })?;
            let out = report::render_sweep(&rep, format.into());
            if rep.all_passed() {
                Ok(Outcome::Ok(out))
            } else {
                Ok(Outcome::Violation(
                    out,
                    format!("{} of {} triples failed", rep.failed, rep.total()),
                ))
            }
        }
        Command::Hirsch {
            genus,
            rank_f,
            degree_f,
            rank_e,
            degree_e,
            max_dt,
            format,
        } => {
            let g = Genus::new(genus)?;
            let f = BundleType::new(rank_f, degree_f)?;
            let e = BundleType::new(rank_e, degree_e)?;
            let en = enumerate_configs(g, f, e, max_dt)?;
            for w in &en.warnings {
                eprintln!("warning: {w}");
            }
            let out = report::render_hirsch(&en, format.into());
            let (imp, tor) = (en.implication_failures(), en.torsion_identity_failures());
            if imp == 0 && tor == 0 {
                Ok(Outcome::Ok(out))
            } else {
                Ok(Outcome::Violation(
                    out,
                    format!("{imp} implication failures, {tor} torsion identity failures"),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(cli.command) {
        Ok(Outcome::Ok(out)) => {
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(Outcome::Violation(out, msg)) => {
            let _ = stdout.write_all(out.as_bytes());
            eprintln!("birlin: invariant violation: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("birlin: {e}");
            ExitCode::from(if e.is_invalid_input() { 2 } else { 1 })
        }
    }
}

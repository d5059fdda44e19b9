use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use jumpnum::candidates;
use jumpnum::contribution::{self, Applicability, MethodChoice};
use jumpnum::fixture;
use jumpnum::model;
use jumpnum::report;
use jumpnum::surface;
use jumpnum::{Error, Rational, ResolutionData};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_SOFTWARE: u8 = 70;

#[derive(Parser)]
#[command(
    name = "jumpnum",
    version,
    about = "Jumping numbers and contribution verdicts from log resolution data"
)]
struct Cli {
    /// Run even if the fixture has validation diagnostics.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Effectivity,
    Criterion,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check every invariant; diagnostics go to stderr.
    Validate { file: PathBuf },
    /// Log canonical threshold and the divisors achieving it.
    Lct { file: PathBuf },
    /// Candidate jumping numbers in (0, upper].
    Candidates {
        file: PathBuf,
        #[arg(long, default_value = "1")]
        upper: Rational,
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Jumping numbers in (0, upper] (surfaces only).
    JumpingNumbers {
        file: PathBuf,
        #[arg(long, default_value = "1")]
        upper: Rational,
    },
    /// Whether E contributes lambda. Exit 0 yes, 1 no, 2 undecidable.
    Contributes {
        file: PathBuf,
        /// Exceptional divisor id; comma-separated components for reducible E.
        #[arg(long, value_delimiter = ',', required = true)]
        divisor: Vec<String>,
        #[arg(long)]
        lambda: Rational,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Print the verdict as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Closed-form criterion for E, the necessary condition, and contraction tests.
    Criteria {
        file: PathBuf,
        #[arg(long)]
        divisor: String,
    },
    /// Full per-divisor report.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the fixture for the minimal resolution of x^p = y^q.
    Xpyq {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
    },
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::NonTerminating(_) => EX_SOFTWARE,
        _ => EX_DATAERR,
    }
}

fn load(file: &PathBuf, force: bool) -> Result<ResolutionData, Error> {
    fixture::load(file, force)
}

fn run(cli: Cli) -> Result<u8, Error> {
    let force = cli.force;
    match cli.command {
        Command::Validate { file } => {
            let data = fixture::read(&file)?;
            let diags = model::validate(&data);
            for d in &diags {
                eprintln!("{d}");
            }
            if diags.is_empty() {
                println!("ok");
                Ok(0)
            } else {
                Ok(EX_DATAERR)
            }
        }
        Command::Lct { file } => {
            let data = load(&file, force)?;
            let (l, who) = candidates::lct(&data)?;
            println!("{l} ({})", who.join(", "));
            Ok(0)
        }
        Command::Candidates {
            file,
            upper,
            divisor,
        } => {
            let data = load(&file, force)?;
            if let Some(id) = &divisor {
                data.divisor(id)?;
            }
            let list = candidates::candidates(&data, &upper)?;
            for e in &list.entries {
                if divisor
                    .as_ref()
                    .map_or(true, |id| e.supporters.contains(id))
                {
                    println!("{}\t{}", e.lambda, e.supporters.join(", "));
                }
            }
            Ok(0)
        }
        Command::JumpingNumbers { file, upper } => {
            let data = load(&file, force)?;
            let jn = surface::surface_jumping_numbers(&data, &upper)?;
            println!(
                "{}",
                jn.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            Ok(0)
        }
        Command::Contributes {
            file,
            divisor,
            lambda,
            method,
            json,
        } => {
            let data = load(&file, force)?;
            let choice = match method {
                MethodArg::Auto => MethodChoice::Auto,
                MethodArg::Effectivity => MethodChoice::Effectivity,
                MethodArg::Criterion => MethodChoice::Criterion,
            };
            let ids: Vec<&str> = divisor.iter().map(String::as_str).collect();
            let v = contribution::contributes(&data, &ids, &lambda, choice)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&v).expect("verdict serializes")
                );
            } else {
                println!("{v}");
            }
            Ok(v.verdict.exit_code() as u8)
        }
        Command::Criteria { file, divisor } => {
            let data = load(&file, force)?;
            criteria(&data, &divisor)?;
            Ok(0)
        }
        Command::Report { file, format } => {
            let data = load(&file, force)?;
            match format {
                Format::Text => print!("{}", report::text(&data)?),
                Format::Json => println!("{}", report::json(&data)?),
                Format::Dot => print!("{}", report::dot(&data)),
            }
            Ok(0)
        }
        Command::Xpyq { p, q } => {
            println!("{}", fixture::to_json(&fixture::xpyq(p, q)?, None));
            Ok(0)
        }
    }
}

fn criteria(data: &ResolutionData, e: &str) -> Result<(), Error> {
    match contribution::applicable_criterion(data, e)? {
        Applicability::Applies(c) => {
            println!("criterion: {}", c.method);
            let inputs: Vec<String> = c.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!("inputs: {}", inputs.join(", "));
            for i in &c.result.inequalities {
                println!("  {i}");
            }
            println!("zone: {}", c.result.zone);
            println!("1 - 1/a = {}", c.one_minus_one_over_a());
        }
        Applicability::NotApplicable { reason } => println!("criterion: none ({reason})"),
    }
    if let Some(lat) = data.lattices.get(e) {
        if lat.flags.effectivity_as_q_divisor {
            let n = contribution::necessary_condition(data, e)?;
            println!(
                "necessary condition: K_E + E°|_E = {} -> {:?}",
                n.class, n.outcome
            );
        }
        for fam in &lat.curve_families {
            for strict in [true, false] {
                let c = contribution::contraction_sufficiency(data, e, &fam.name, strict)?;
                println!(
                    "contraction via {} ({}): (K_E + E°|_E)·C = {} -> {}",
                    c.family,
                    if strict { "strict" } else { "non-strict" },
                    c.pairing,
                    if c.fires { "fires" } else { "does not fire" }
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_for(&err))
        }
    }
}

//! `quadric`: Hilbert matrices of point sets on P1 x P1 from the command
//! line.
//!
//! Exit status: 0 success, 1 failed check or mismatch, 2 bad input, 3 the
//! line-addition hypothesis does not hold (strict mode).

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quadric_hilbert::acm::{self, AcmVerdict};
use quadric_hilbert::bigraded::{check_structure, line_profiles, HilbertMatrix};
use quadric_hilbert::engine::{self, EngineError, LineStep, Mode};
use quadric_hilbert::field::{PrimeField, DEFAULT_PRIME};
use quadric_hilbert::format::{to_ascii, to_json, MatrixJson};
use quadric_hilbert::oracle::{self, parse_config, ConfigFile, GridConfig};
use quadric_hilbert::replay::{self, ReplayError, ReplayOptions};
use quadric_hilbert::{DeltaMatrix, Direction, Field};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "quadric",
    version,
    about = "Hilbert matrices of reduced point sets on P1 x P1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for random line coordinates.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Prime modulus (at least 2^60); implies `--field prime`.
    #[arg(long, global = true)]
    prime: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = FieldArg::Rational)]
    field: FieldArg,

    #[arg(long, global = true, value_enum, default_value_t = Format::Ascii)]
    format: Format,

    /// Apply the line-addition rule even when its hypothesis fails.
    #[arg(long, global = true)]
    predict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Rational,
    Prime,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert function values on the support rectangle.
    Hilbert { file: PathBuf },
    /// First difference of the Hilbert function.
    Delta { file: PathBuf },
    /// Structural checks on the first difference and line counts.
    Check { file: PathBuf },
    /// Number of lines with each point count, read off the first difference.
    Profiles { file: PathBuf },
    /// Staircase (ACM) test with witness permutations.
    Acm { file: PathBuf },
    /// Add a (1,0)-line meeting the columns in `--hit`.
    AddRow(AddArgs),
    /// Add a (0,1)-line meeting the rows in `--hit`.
    AddCol(AddArgs),
    /// Run a multi-step script, printing every intermediate matrix.
    Replay {
        file: PathBuf,
        /// Recompute every matrix with the rank oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Engine prediction against the oracle for the first step of a script.
    Compare { file: PathBuf },
}

#[derive(clap::Args)]
struct AddArgs {
    file: PathBuf,
    /// Largest index of the lines of the other ruling after the addition.
    #[arg(long)]
    n: usize,
    /// Comma-separated indices of the lines the new line meets.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    hit: Vec<usize>,
}

enum Failure {
    Check(String),
    Input(String),
    Refused(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
            Failure::Refused(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Input(m) | Failure::Refused(m) => m,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

impl From<ReplayError> for Failure {
    fn from(e: ReplayError) -> Self {
        match e {
            ReplayError::Engine {
                source: EngineError::HypothesisNotMet(_),
                ..
            } => Failure::Refused(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("quadric: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn field(cli: &Cli, file_prime: Option<u64>) -> Result<Field, Failure> {
    let prime = cli.prime.or(file_prime);
    match (cli.field, cli.prime) {
        (FieldArg::Rational, None) => Ok(Field::Rational),
        _ => Ok(Field::Prime(
            PrimeField::new(prime.unwrap_or(DEFAULT_PRIME)).map_err(input)?,
        )),
    }
}

fn load(cli: &Cli, path: &PathBuf) -> Result<(ConfigFile, GridConfig, Field), Failure> {
    let file = parse_config(&read(path)?).map_err(input)?;
    let cfg = file
        .to_grid_config(cli.seed.or(file.seed).unwrap_or(0))
        .map_err(input)?;
    let field = field(cli, file.prime)?;
    Ok((file, cfg, field))
}

fn oracle_delta(cfg: &GridConfig, field: Field) -> Result<DeltaMatrix, Failure> {
    oracle::hilbert_matrix(cfg, field).map_err(input)
}

fn matrix(cli: &Cli, d: &DeltaMatrix) -> String {
    match cli.format {
        Format::Ascii => d.to_string(),
        Format::Json => to_json(d) + "\n",
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Hilbert { file } => {
            let (_, cfg, field) = load(cli, file)?;
            let d = oracle_delta(&cfg, field)?;
            let values = HilbertMatrix::new(d.clone()).window(d.rows(), d.cols());
            match cli.format {
                Format::Ascii => print!("{}", to_ascii(&values)),
                Format::Json => println!(
                    "{}",
                    json!({"rows": d.rows(), "cols": d.cols(), "hilbert": values})
                ),
            }
            Ok(())
        }
        Command::Delta { file } => {
            let (_, cfg, field) = load(cli, file)?;
            print!("{}", matrix(cli, &oracle_delta(&cfg, field)?));
            Ok(())
        }
        Command::Check { file } => check(cli, file),
        Command::Profiles { file } => {
            let (_, cfg, field) = load(cli, file)?;
            let profiles = line_profiles(&oracle_delta(&cfg, field)?)
                .map_err(|e| Failure::Check(e.to_string()))?;
            match cli.format {
                Format::Ascii => {
                    for direction in [Direction::Row, Direction::Col] {
                        let parts: Vec<String> = profiles
                            .profile(direction)
                            .iter()
                            .map(|(k, n)| format!("{n} with {k}"))
                            .collect();
                        println!("{direction} lines: {}", parts.join(", "));
                    }
                }
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&profiles).expect("maps serialize")
                ),
            }
            Ok(())
        }
        Command::Acm { file } => staircase(cli, file),
        Command::AddRow(args) => add(cli, args, Direction::Row),
        Command::AddCol(args) => add(cli, args, Direction::Col),
        Command::Replay { file, oracle } => replay_cmd(cli, file, *oracle),
        Command::Compare { file } => compare(cli, file),
    }
}

fn check(cli: &Cli, path: &PathBuf) -> Result<(), Failure> {
    let (_, cfg, field) = load(cli, path)?;
    let d = oracle_delta(&cfg, field)?;
    let report = check_structure(&d);
    let inc = cfg.incidence();
    let profiles = line_profiles(&d);
    let profile_ok = profiles.as_ref().is_ok_and(|p| {
        p.row_profile == inc.histogram(Direction::Row)
            && p.col_profile == inc.histogram(Direction::Col)
    });
    let profile_msg = match &profiles {
        Ok(_) if profile_ok => "pass".to_string(),
        Ok(p) => format!(
            "fail: first difference gives rows {:?} columns {:?}, grid has rows {:?} columns {:?}",
            p.row_profile,
            p.col_profile,
            inc.histogram(Direction::Row),
            inc.histogram(Direction::Col)
        ),
        Err(e) => format!("fail: {e}"),
    };
    match cli.format {
        Format::Ascii => {
            print!("{d}");
            println!("structure: {report}");
            println!("line counts: {profile_msg}");
        }
        Format::Json => println!(
            "{}",
            json!({"delta": MatrixJson::from(&d), "structure": report.to_string(), "line_counts": profile_msg})
        ),
    }
    if report.passed() && profile_ok {
        Ok(())
    } else {
        Err(Failure::Check("check failed".into()))
    }
}

fn staircase(cli: &Cli, path: &PathBuf) -> Result<(), Failure> {
    let (_, cfg, _) = load(cli, path)?;
    let verdict = acm::is_acm(cfg.incidence());
    match cli.format {
        Format::Json => {
            let d = match &verdict {
                AcmVerdict::Staircase { profile, .. } => {
                    Some(MatrixJson::from(&acm::delta_acm(profile)))
                }
                AcmVerdict::NotStaircase { .. } => None,
            };
            println!("{}", json!({"verdict": verdict, "delta": d}));
        }
        Format::Ascii => match &verdict {
            AcmVerdict::Staircase {
                profile,
                row_perm,
                col_perm,
            } => {
                println!("ACM: yes");
                println!("row permutation: {row_perm:?}");
                println!("column permutation: {col_perm:?}");
                println!("points per row: {:?}", profile.row_counts());
                println!("points per column: {:?}", profile.col_counts());
                print!("{}", acm::delta_acm(profile));
            }
            AcmVerdict::NotStaircase { cell, occupied } => {
                println!("ACM: no");
                let state = if *occupied { "occupied" } else { "empty" };
                println!("after sorting lines by point count, cell {cell:?} is {state}");
            }
        },
    }
    if verdict.is_acm() {
        Ok(())
    } else {
        Err(Failure::Check("not a staircase".into()))
    }
}

fn add(cli: &Cli, args: &AddArgs, direction: Direction) -> Result<(), Failure> {
    let (_, cfg, field) = load(cli, &args.file)?;
    let step = LineStep {
        direction,
        n: args.n,
        hit: args.hit.iter().copied().collect::<BTreeSet<_>>(),
    };
    let spec = step.to_spec(cfg.incidence()).map_err(input)?;
    let d = oracle_delta(&cfg, field)?;
    let staircase = acm::is_acm(cfg.incidence()).is_acm();
    let mode = if cli.predict {
        Mode::Predict
    } else {
        Mode::Strict
    };
    let result = if staircase {
        acm::acm_add_partial_line(&d, &spec)
    } else {
        engine::add_partial_line(&d, &spec, mode)
    };
    let out = match result {
        Ok(out) => out,
        Err(e @ EngineError::HypothesisNotMet(_)) => return Err(Failure::Refused(e.to_string())),
        Err(e) => return Err(input(e)),
    };
    match cli.format {
        Format::Ascii => {
            print!("{}", out.delta);
            println!("hypothesis: {}", out.verdict);
            println!("exceptions: {:?}", out.exceptions.0);
            if !out.verified {
                println!("unverified prediction");
            }
        }
        Format::Json => println!("{}", serde_json::to_string(&out).expect("serializable")),
    }
    Ok(())
}

fn replay_cmd(cli: &Cli, path: &PathBuf, verify: bool) -> Result<(), Failure> {
    let script = replay::parse_script(&read(path)?)?;
    let options = ReplayOptions {
        seed: cli.seed,
        field: field(cli, script.config.prime)?,
        mode: if cli.predict {
            Mode::Predict
        } else {
            Mode::Strict
        },
        verify_with_oracle: verify,
    };
    let out = replay::run_script(&script, options)?;
    match cli.format {
        Format::Ascii => {
            let route = match out.base_route {
                replay::Route::Staircase => "staircase closed form",
                _ => "oracle",
            };
            println!("base ({route}):");
            print!("{}", out.base);
            for (k, s) in out.steps.iter().enumerate() {
                let flag = if s.addition.verified {
                    ""
                } else {
                    ", unverified"
                };
                println!("step {}: {} ({}{flag})", k + 1, s.step, s.addition.verdict);
                print!("{}", s.addition.delta);
            }
            for m in &out.mismatches {
                println!(
                    "mismatch at step {} against {}: expected",
                    m.index, m.source
                );
                print!("{}", m.expected);
                println!("found");
                print!("{}", m.found);
            }
        }
        Format::Json => println!(
            "{}",
            json!({
                "base": MatrixJson::from(&out.base),
                "steps": out.steps,
                "mismatches": out.mismatches,
            })
        ),
    }
    if out.mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} mismatches",
            out.mismatches.len()
        )))
    }
}

fn compare(cli: &Cli, path: &PathBuf) -> Result<(), Failure> {
    let script = replay::parse_script(&read(path)?)?;
    let step = script
        .steps
        .first()
        .ok_or_else(|| Failure::Input("script has no `step:` line".into()))?;
    let seed = cli.seed.or(script.config.seed).unwrap_or(0);
    let cfg = match &script.base {
        replay::Base::Profile(p) => GridConfig::with_seed(p.incidence(), seed),
        replay::Base::Grid => script.config.to_grid_config(seed).map_err(input)?,
    };
    let c = replay::compare_step(&cfg, step, field(cli, script.config.prime)?, seed)?;
    let met = c.verdict.is_satisfied();
    match cli.format {
        Format::Ascii => {
            println!("step: {step}");
            if met {
                println!("hypothesis met: {}", c.verdict);
            } else {
                println!("hypothesis not met; {}", c.verdict);
            }
            println!("predicted:");
            print!("{}", c.predicted);
            println!("oracle:");
            print!("{}", c.oracle);
            if c.agrees() {
                println!("prediction agrees with the oracle");
            }
            for (i, j, p, o) in &c.differences {
                println!("predicted ({i},{j})={p}, oracle ({i},{j})={o}");
            }
        }
        Format::Json => println!("{}", serde_json::to_string(&c).expect("serializable")),
    }
    if !met && !cli.predict {
        Err(Failure::Refused(format!(
            "hypothesis not met: {}",
            c.verdict
        )))
    } else if c.agrees() {
        Ok(())
    } else {
        Err(Failure::Check("prediction differs from the oracle".into()))
    }
}

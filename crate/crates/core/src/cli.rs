//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use thiserror::Error;

use crate::formula::{Formula, Interpretation, SolveConfig};
use crate::grounder::{GroundConfig, UniverseConfig, DEFAULT_AGG_BUDGET};
use crate::pipeline::{self, Config, PipelineError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Print the stable models.
    Models,
    /// Print the ground formulas.
    Ground,
    /// Print the program after expanding head aggregates and counting sugar.
    Core,
    /// Run the built-in oracle suites.
    Check,
}

#[derive(Debug, Parser)]
#[command(
    name = "agref",
    version,
    about = "Ground and solve Abstract Gringo programs"
)]
pub struct Args {
    /// Input files, read in order and concatenated.
    pub files: Vec<PathBuf>,

    #[arg(long, value_enum, default_value = "models")]
    pub mode: Mode,

    /// Constant definition, e.g. `-c n=4`.
    #[arg(short = 'c', long = "const", value_name = "NAME=INT", value_parser = parse_const)]
    pub constants: Vec<(String, BigInt)>,

    /// Numerals that variables range over, e.g. `0..10`.
    #[arg(long, value_name = "LO..HI", value_parser = parse_range)]
    pub int_range: Option<(BigInt, BigInt)>,

    /// Nesting depth of generated function terms in the universe.
    #[arg(long, default_value_t = 0)]
    pub fn_depth: usize,

    /// Stop after this many models (all when absent).
    #[arg(long, value_name = "N")]
    pub models: Option<usize>,

    /// Disable the aggregate rewrites.
    #[arg(long)]
    pub no_simplify: bool,

    /// Maximum number of index entries whose subsets are enumerated.
    #[arg(long, default_value_t = DEFAULT_AGG_BUDGET, value_parser = parse_budget)]
    pub agg_budget: usize,

    /// Maximum number of search decisions.
    #[arg(long, default_value_t = SolveConfig::default().search_budget, value_parser = clap::value_parser!(u64).range(1..))]
    pub search_budget: u64,

    /// Also print the core program (models mode).
    #[arg(long)]
    pub dump_core: bool,

    /// Also print the ground formulas (models mode).
    #[arg(long)]
    pub ground: bool,

    /// Also print stable models dropped for containing `p` and `-p`.
    #[arg(long)]
    pub list_inconsistent: bool,

    /// Seed for the random instances of check mode.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

fn parse_const(s: &str) -> Result<(String, BigInt), String> {
    let (name, value) = s.split_once('=').ok_or("expected NAME=INT")?;
    let name = name.trim();
    if !name.starts_with(|c: char| c.is_ascii_lowercase())
        || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
    {
        return Err(format!("`{name}` is not a constant name"));
    }
    let value = value
        .trim()
        .parse()
        .map_err(|_| format!("`{value}` is not an integer"))?;
    Ok((name.to_string(), value))
}

fn parse_budget(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(k) if (1..=63).contains(&k) => Ok(k),
        _ => Err("expected an integer between 1 and 63".into()),
    }
}

fn parse_range(s: &str) -> Result<(BigInt, BigInt), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo: BigInt = lo
        .trim()
        .parse()
        .map_err(|_| format!("`{lo}` is not an integer"))?;
    let hi: BigInt = hi
        .trim()
        .parse()
        .map_err(|_| format!("`{hi}` is not an integer"))?;
    if lo > hi {
        return Err("LO must not exceed HI".into());
    }
    Ok((lo, hi))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("{0} check(s) failed")]
    Check(usize),
    #[error(transparent)]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Pipeline(PipelineError::Parse(_)) => 2,
            _ => 1,
        }
    }
}

impl Args {
    pub fn config(&self) -> Config {
        Config {
            constants: self.constants.iter().cloned().collect(),
            ground: GroundConfig {
                universe: UniverseConfig {
                    int_range: self.int_range.clone(),
                    fn_depth: self.fn_depth,
                    ..UniverseConfig::default()
                },
                agg_budget: self.agg_budget,
                simplify: !self.no_simplify,
            },
            solve: SolveConfig {
                search_budget: self.search_budget,
                max_models: self.models,
            },
        }
    }

    fn source(&self) -> Result<String, CliError> {
        let mut src = String::new();
        for path in &self.files {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
                path: path.clone(),
                source,
            })?;
            src.push_str(&text);
            src.push('\n');
        }
        Ok(src)
    }
}

fn print_model(out: &mut dyn Write, m: &Interpretation) -> std::io::Result<()> {
    let atoms: Vec<String> = m.iter().map(ToString::to_string).collect();
    writeln!(out, "{{{}}}", atoms.join(", "))
}

/// One line per top-level conjunct.
fn print_formulas(out: &mut dyn Write, fs: &[Formula]) -> std::io::Result<()> {
    for f in fs {
        match f {
            Formula::And(v) if !v.is_empty() => {
                for g in v {
                    writeln!(out, "{g}")?;
                }
            }
            f => writeln!(out, "{f}")?,
        }
    }
    Ok(())
}

pub fn run(args: &Args, out: &mut dyn Write) -> Result<(), CliError> {
    if args.mode == Mode::Check {
        let tallies = crate::check::run_all(args.seed);
        for t in &tallies {
            writeln!(out, "{t}")?;
        }
        for row in crate::check::table_rows() {
            writeln!(out, "table: {row}")?;
        }
        let failed = tallies.iter().filter(|t| !t.passed()).count();
        return if failed == 0 {
            Ok(())
        } else {
            Err(CliError::Check(failed))
        };
    }
    let src = args.source()?;
    let cfg = args.config();
    if args.mode == Mode::Core || args.dump_core {
        let core = pipeline::core_program(&src, &cfg.constants)?;
        write!(out, "{core}")?;
        if args.mode == Mode::Core {
            return Ok(());
        }
    }
    if args.mode == Mode::Ground || args.ground {
        let g = pipeline::ground(&src, &cfg)?;
        print_formulas(out, &g.formulas)?;
        if args.mode == Mode::Ground {
            return Ok(());
        }
    }
    let answer = pipeline::answer_sets(&src, &cfg)?;
    for m in &answer.models {
        print_model(out, m)?;
    }
    if args.list_inconsistent {
        for m in &answer.inconsistent {
            write!(out, "inconsistent: ")?;
            print_model(out, m)?;
        }
    }
    let more = if answer.complete { "" } else { "+" };
    writeln!(out, "Models: {}{more}", answer.models.len())?;
    Ok(())
}

/// Runs with the process arguments and returns the exit code.
pub fn main() -> i32 {
    let args = Args::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&args, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("agref: {e}");
            e.exit_code()
        }
    }
}

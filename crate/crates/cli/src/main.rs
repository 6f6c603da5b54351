//! `ppcomp`: decide pp-formula equivalence and containment, analyze finite
//! algebras, and run the hardness reductions as formula compilers.
//!
//! Exit codes: 0 yes/pass, 1 no/fail, 2 usage, parse or validation error,
//! 3 budget exceeded.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{error_json, Exit, Report};

#[derive(Parser, Debug)]
#[command(name = "ppcomp", version, about = "Primitive positive formula comparison and reductions")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Print the witness of a negative verdict.
    #[arg(long, global = true)]
    pub witness: bool,
    /// Largest number of variables a decider accepts per formula.
    #[arg(long, default_value_t = ppcomp::eval::DEFAULT_MAX_VARS, global = true)]
    pub max_vars: usize,
    /// Enumeration budget for polymorphism, property and matching sweeps.
    #[arg(long, env = "PPCOMP_BUDGET", global = true)]
    pub budget: Option<u64>,
    /// Largest number of variables the DNF decider enumerates.
    #[arg(long, default_value_t = ppcomp::cm::DEFAULT_DNF_GUARD, global = true)]
    pub dnf_guard: usize,
    /// Do not require pentagon axiom 4 (`β ∘ γ = 1`) when parsing pentagons.
    #[arg(long, global = true)]
    pub skip_axiom4: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Are two formulas equivalent over a structure?
    Ppeq(PairArgs),
    /// Is every solution of the first formula a solution of the second?
    Ppcon(PairArgs),
    /// Does a two-sorted formula entail another on every listed pentagon?
    Entail {
        /// Pentagon files.
        #[arg(long = "pentagon", required = true)]
        pentagons: Vec<PathBuf>,
        phi: PathBuf,
        psi: PathBuf,
    },
    /// Polymorphisms, congruence lattice, modularity and pentagon triples.
    Analyze {
        /// A structure or algebra file.
        file: PathBuf,
        /// Largest polymorphism arity for structures.
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
    /// Run a reduction and emit the transformed formulas.
    Reduce {
        #[command(subcommand)]
        pipeline: Pipeline,
    },
    /// Is a DNF formula a tautology?
    Dnf {
        /// File holding the formula.
        #[arg(required_unless_present = "expr", conflicts_with = "expr")]
        file: Option<PathBuf>,
        /// The formula given inline.
        #[arg(short = 'e', long)]
        expr: Option<String>,
    },
    /// Does `t ≤ t'` hold in the given lattices?
    Latineq {
        t: String,
        t_prime: String,
        /// Pentagon files; sweeps generator assignments of each K_P.
        #[arg(long = "pentagon", required_unless_present = "algebra")]
        pentagons: Vec<PathBuf>,
        /// Sweep every element of K_P instead of the generators only.
        #[arg(long)]
        all_elements: bool,
        /// An algebra file; sweeps its congruence lattice.
        #[arg(long, conflicts_with = "pentagons")]
        algebra: Option<PathBuf>,
    },
    /// Parse and check a structure, algebra, pentagon, package or formula file.
    Validate { file: PathBuf },
}

#[derive(Args, Debug)]
pub struct PairArgs {
    pub structure: PathBuf,
    pub phi: PathBuf,
    pub psi: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Pipeline {
    /// Containment over a boolean base to containment over a unary-type algebra.
    Lemma1 {
        #[arg(long)]
        package: PathBuf,
        phi: PathBuf,
        psi: PathBuf,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Lattice-term inequality to two-sorted entailment over pentagons.
    Thm15 {
        #[arg(long = "pentagon", required = true)]
        pentagons: Vec<PathBuf>,
        t: String,
        t_prime: String,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Two-sorted entailment to containment over an amalgam package.
    Thm11 {
        #[arg(long)]
        amalgam: PathBuf,
        phi: PathBuf,
        psi: PathBuf,
        #[command(flatten)]
        emit: EmitArgs,
    },
}

#[derive(Args, Debug)]
pub struct EmitArgs {
    /// Run the brute-force checks of the reduction.
    #[arg(long)]
    pub verify: bool,
    /// Directory for the emitted formula files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ppeq(_) => "ppeq",
            Command::Ppcon(_) => "ppcon",
            Command::Entail { .. } => "entail",
            Command::Analyze { .. } => "analyze",
            Command::Reduce { pipeline } => match pipeline {
                Pipeline::Lemma1 { .. } => "reduce lemma1",
                Pipeline::Thm15 { .. } => "reduce thm15",
                Pipeline::Thm11 { .. } => "reduce thm11",
            },
            Command::Dnf { .. } => "dnf",
            Command::Latineq { .. } => "latineq",
            Command::Validate { .. } => "validate",
        }
    }
}

fn classify(err: &anyhow::Error) -> Exit {
    let budget = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<ppcomp::Error>(), Some(ppcomp::Error::BudgetExceeded(_))));
    if budget {
        Exit::Budget
    } else {
        Exit::Usage
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = cli.command.name();
    let mut report = Report::new(name);
    let outcome = commands::run(&cli.command, &cli.global, &mut report);
    let elapsed = start.elapsed();
    let exit = match outcome {
        Ok(()) => {
            match cli.global.format {
                Format::Json => println!("{}", report.to_json(elapsed)),
                Format::Text => print!("{}", report.to_text(cli.global.witness)),
            }
            report.exit
        }
        Err(err) => {
            let exit = classify(&err);
            let message = format!("{err:#}");
            eprintln!("error: {message}");
            if cli.global.format == Format::Json {
                println!("{}", error_json(name, &report.inputs, &message, elapsed));
            }
            exit
        }
    };
    ExitCode::from(exit as u8)
}

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use spcsep_cli::commands::{self, CanonicalMode, CliError, Generator, Report, ReproduceParams, Target};
use spcsep_cli::report::{self, num};

#[derive(Parser)]
#[command(name = "spcsep", version, about = "SPC, PPT and separability analysis of bipartite matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative tolerance for Hermiticity, positivity and equality tests.
    #[arg(long, global = true, default_value_t = spcsep::DEFAULT_TOL)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Include wall-clock time in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the matrix in a file: PSD, PPT, SPC, tensor rank, separability.
    Analyze {
        path: PathBuf,
        /// Also report the Hermitian Schmidt terms.
        #[arg(long)]
        schmidt: bool,
    },
    /// Re-run a construction or a seeded property sweep.
    Reproduce {
        #[arg(value_enum)]
        target: TargetArg,
        #[command(flatten)]
        params: Params,
    },
    /// Canonical form of a rank-4 SPC matrix in M2⊗M2, or rank-3 reduction in M2⊗Mm.
    Canonical {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Canonical)]
        mode: ModeArg,
        /// Regularization parameter of the reduction; repeat for a decreasing sequence.
        #[arg(long = "epsilon")]
        epsilon: Vec<f64>,
    },
    /// Write a matrix file for a construction or a seeded random sample.
    Generate {
        #[arg(value_enum)]
        what: GeneratorArg,
        #[command(flatten)]
        params: Params,
        /// Output path; standard output when omitted.
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Params {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    samples: Option<usize>,
    /// Recursion depth of the Sym/ASym bases; k = 2^n.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Local dimension; repeat to sweep several.
    #[arg(long)]
    k: Vec<usize>,
    /// Second local dimension; repeat to sweep several.
    #[arg(long)]
    m: Vec<usize>,
    /// Number of Hermitian product terms in random SPC samples.
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long)]
    epsilon: Vec<f64>,
}

impl Params {
    fn resolve(self, tol: f64) -> ReproduceParams {
        ReproduceParams {
            tol,
            seed: self.seed,
            samples: self.samples,
            n: self.n,
            alpha: self.alpha,
            k: self.k,
            m: self.m,
            terms: self.terms,
            epsilon: self.epsilon,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Counterexample,
    FlipFamily,
    Bases,
    TgSweep,
    SpcPptSweep,
    Rank3Sweep,
    CanonicalSweep,
    WitnessSweep,
    Structural,
    AntisymSweep,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Counterexample => Target::Counterexample,
            TargetArg::FlipFamily => Target::FlipFamily,
            TargetArg::Bases => Target::Bases,
            TargetArg::TgSweep => Target::TgSweep,
            TargetArg::SpcPptSweep => Target::SpcPptSweep,
            TargetArg::Rank3Sweep => Target::Rank3Sweep,
            TargetArg::CanonicalSweep => Target::CanonicalSweep,
            TargetArg::WitnessSweep => Target::WitnessSweep,
            TargetArg::Structural => Target::Structural,
            TargetArg::AntisymSweep => Target::AntisymSweep,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Canonical,
    Reduce,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorArg {
    Counterexample,
    FlipFamily,
    RandomSpc,
    SymmetricState,
    Rank3,
    Identity,
}

impl From<GeneratorArg> for Generator {
    fn from(g: GeneratorArg) -> Self {
        match g {
            GeneratorArg::Counterexample => Generator::Counterexample,
            GeneratorArg::FlipFamily => Generator::FlipFamily,
            GeneratorArg::RandomSpc => Generator::RandomSpc,
            GeneratorArg::SymmetricState => Generator::SymmetricState,
            GeneratorArg::Rank3 => Generator::Rank3,
            GeneratorArg::Identity => Generator::Identity,
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let start = Instant::now();
    let tol = cli.tol;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::parse(format!("--tol must lie in (0, 1), got {tol}")));
    }
    let Report { mut document, exit_code } = match cli.command {
        Command::Analyze { path, schmidt } => commands::analyze(&path, tol, schmidt)?,
        Command::Reproduce { target, params } => commands::reproduce(target.into(), &params.resolve(tol))?,
        Command::Canonical { path, mode, epsilon } => {
            let mode = match mode {
                ModeArg::Canonical => CanonicalMode::Canonical,
                ModeArg::Reduce => CanonicalMode::Reduce,
            };
            let eps = if epsilon.is_empty() { vec![1e-2, 1e-3, 1e-4] } else { epsilon };
            if eps.iter().any(|&e| e.is_nan() || e <= 0.0) {
                return Err(CliError::parse("--epsilon must be positive"));
            }
            commands::canonical(&path, mode, &eps, tol)?
        }
        Command::Generate { what, params, out } => {
            let text = commands::generate(what.into(), &params.resolve(tol))?.write();
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| CliError::precondition(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            return Ok(0);
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    if cli.timing {
        if let Value::Object(map) = &mut document {
            map.insert("elapsed_seconds".into(), num(elapsed));
        }
    }
    match cli.output {
        Output::Json => print!("{}", report::to_json_string(&document)),
        Output::Text => print!("{}", report::to_text(&document)),
    }
    Ok(exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use shorted::suite::{run_case, SuiteSummary};
use shorted::{
    ball_bound, block_pinv, check_complementable, decompose, ep_equivalence_report, is_ep, is_hypo_ep,
    make_example, numerical_rank, schur, schur_unsafe, singleton_probe, verify_structure, BlockOp, Check,
    ExampleName, Mat, Probe, Route, Subspace, Tol,
};

#[derive(Parser)]
#[command(name = "shorted", version, about = "Block decompositions, Schur complements and EP checks for complex matrices")]
struct Cli {
    /// Relative cutoff for numerical rank.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_rank: f64,
    /// Relative tolerance for equalities and inclusions.
    #[arg(long, global = true, env = "SHORTED_TOL_EQ", default_value_t = 1e-9)]
    tol_eq: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Triple {
    /// Operator T (matrix file).
    t: PathBuf,
    /// Domain subspace M.
    m: PathBuf,
    /// Codomain subspace N.
    n: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Blocks A, B, C, D of T relative to (M, N).
    Decompose(Triple),
    /// Complementability verdict; exit 1 unless complementable.
    Check(Triple),
    /// Schur complement A − BD⁺C.
    Schur {
        #[command(flatten)]
        io: Triple,
        #[arg(long, default_value = "pinv")]
        route: Route,
        /// Skip the complementability gate.
        #[arg(long = "unsafe")]
        skip_gate: bool,
    },
    /// Probe the set T(x + M⊥) ∩ N at a point x of M.
    Probe {
        #[command(flatten)]
        io: Triple,
        /// Vector file (a one-column or one-row matrix).
        #[arg(long)]
        x: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Ball bounds ‖Z‖ ≤ ‖C‖/γ(D) and the left analogue.
    Bounds(Triple),
    /// Range, kernel and factorization identities of the Schur complement.
    Structure(Triple),
    /// Moore–Penrose inverse from the block formula.
    PinvBlock(Triple),
    /// EP and hypo-EP flags of a square matrix.
    Classify {
        t: PathBuf,
    },
    /// EP equivalences between T, its Schur complement and D.
    EpReport(Triple),
    /// Build a corpus example.
    Corpus {
        #[arg(long)]
        name: ExampleName,
        #[arg(long, default_value_t = 32)]
        dim: usize,
        /// Write t.json, m.json, n.json and case.json into this directory.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Run the randomized property suite.
    Verify {
        #[arg(long, default_value_t = 200)]
        seeds: u64,
        #[arg(long, default_value_t = 40)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    /// Exit 1: a negative verdict or violated property.
    Verdict(String),
    /// Exit 2: unreadable or inconsistent input.
    Input(String),
}

impl From<shorted::Error> for Failure {
    fn from(e: shorted::Error) -> Self {
        match e {
            shorted::Error::InvalidInput(_) | shorted::Error::UnknownExample(_) => Failure::Input(e.to_string()),
            _ => Failure::Verdict(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verdict(msg)) => {
            eprintln!("shorted: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("shorted: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let tol = Tol::new(cli.tol_rank, cli.tol_eq, 1e-13)
        .map_err(|e| Failure::Input(format!("--tol-rank/--tol-eq: {e}")))?;
    let out = Output(cli.format);
    match &cli.command {
        Command::Decompose(io) => {
            let blk = io.load()?;
            out.emit(&blk)?;
            Ok(true)
        }
        Command::Check(io) => {
            let report = check_complementable(&io.load()?, &tol)?;
            out.emit(&report)?;
            Ok(report.is_complementable())
        }
        Command::Schur { io, route, skip_gate } => {
            let blk = io.load()?;
            let result = if *skip_gate { schur_unsafe(&blk, *route, &tol)? } else { schur(&blk, *route, &tol)? };
            out.emit(&result)?;
            Ok(true)
        }
        Command::Probe { io, x, trials, seed } => {
            let blk = io.load()?;
            let x = load_vector(x, blk.ambient_dom())?;
            let probe = singleton_probe(&blk, &x, *trials, *seed, &tol)?;
            out.emit(&probe)?;
            Ok(matches!(probe, Probe::Point { .. }))
        }
        Command::Bounds(io) => {
            let report = ball_bound(&io.load()?, &tol)?;
            out.emit(&report)?;
            Ok(report.holds)
        }
        Command::Structure(io) => {
            let (t, m, n) = io.read()?;
            let report = verify_structure(&t, &m, &n, &tol)?;
            out.emit(&report)?;
            Ok(report.all_hold())
        }
        Command::PinvBlock(io) => {
            let pinv = block_pinv(&io.load()?, &tol)?;
            out.emit(&pinv)?;
            Ok(true)
        }
        Command::Classify { t } => {
            let t: Mat = load(t, "T")?;
            let report = Classification {
                rank: numerical_rank(&t, &tol),
                is_ep: is_ep(&t, &tol)?,
                is_hypo_ep: is_hypo_ep(&t, &tol)?,
            };
            out.emit(&report)?;
            Ok(true)
        }
        Command::EpReport(io) => {
            let (t, m, n) = io.read()?;
            let report = ep_equivalence_report(&t, &m, &n, &tol)?;
            out.emit(&report)?;
            Ok(report.equivalences_consistent && report.unconditional_implication)
        }
        Command::Corpus { name, dim, emit } => {
            let case = make_example::<f64>(*name, *dim)?;
            match emit {
                None => out.emit(&case)?,
                Some(dir) => {
                    let written = write_case(dir, &case)?;
                    out.emit(&Written { written })?;
                }
            }
            Ok(true)
        }
        Command::Verify { seeds, max_dim, seed } => {
            if *max_dim < 2 {
                return Err(Failure::Input(format!("--max-dim: must be at least 2, got {max_dim}")));
            }
            let start = Instant::now();
            // collect() keeps index order whatever the completion order
            let outcomes: Vec<_> = (0..*seeds).into_par_iter().map(|i| run_case(i, *seed, *max_dim, &tol)).collect();
            let report = VerifyReport {
                seed: *seed,
                max_dim: *max_dim,
                elapsed_secs: start.elapsed().as_secs_f64(),
                summary: SuiteSummary::from_outcomes(&outcomes),
            };
            match out.0 {
                Format::Json => out.emit(&report)?,
                Format::Text => print!("{}", render::suite(&report.summary, report.elapsed_secs)),
            }
            Ok(report.summary.failed == 0)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Classification {
    rank: usize,
    is_ep: Check<f64>,
    is_hypo_ep: Check<f64>,
}

#[derive(Serialize, Deserialize)]
struct Written {
    written: Vec<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct VerifyReport {
    seed: u64,
    max_dim: usize,
    elapsed_secs: f64,
    #[serde(flatten)]
    summary: SuiteSummary,
}

impl Triple {
    fn read(&self) -> Result<(Mat, Subspace, Subspace), Failure> {
        Ok((load(&self.t, "T")?, load(&self.m, "M")?, load(&self.n, "N")?))
    }

    fn load(&self) -> Result<BlockOp, Failure> {
        let (t, m, n) = self.read()?;
        Ok(decompose(&t, &m, &n)?)
    }
}

fn load<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{what} ({}): {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{what} ({}): {e}", path.display())))
}

fn load_vector(path: &Path, len: usize) -> Result<Vec<shorted::C64>, Failure> {
    let m: Mat = load(path, "x")?;
    let v = match m.shape() {
        (_, 1) => m.column(0),
        (1, _) => m.adjoint().column(0).iter().map(|z| z.conj()).collect(),
        (r, c) => return Err(Failure::Input(format!("x: expected a vector, got a {r}×{c} matrix"))),
    };
    if v.len() != len {
        return Err(Failure::Input(format!("x: length {} but T has {len} columns", v.len())));
    }
    Ok(v)
}

fn write_case(dir: &Path, case: &shorted::LabeledCase) -> Result<Vec<PathBuf>, Failure> {
    let io_err = |p: &Path, e: std::io::Error| Failure::Input(format!("--emit ({}): {e}", p.display()));
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let files = [
        ("t.json", to_json(&case.t)?),
        ("m.json", to_json(&case.m)?),
        ("n.json", to_json(&case.n)?),
        ("case.json", to_json(case)?),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| io_err(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Failure::Verdict(format!("encoding report: {e}")))
}

struct Output(Format);

impl Output {
    fn emit<T: Serialize + ?Sized>(&self, value: &T) -> Result<(), Failure> {
        match self.0 {
            Format::Json => println!("{}", to_json(value)?),
            Format::Text => {
                let v = serde_json::to_value(value).map_err(|e| Failure::Verdict(format!("encoding report: {e}")))?;
                print!("{}", render::text(&v));
            }
        }
        Ok(())
    }
}

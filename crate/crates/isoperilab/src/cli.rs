//! Argument parsing and command dispatch.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use isoperilab_core::constructions::{ClosedForms, Recipe};
use isoperilab_core::polytope::json::PolytopeDocument;
use isoperilab_core::positions::{petty_minimize, schatten_bound_check, PettyOptions};
use isoperilab_core::spectral::{spectral_certificate, DEFAULT_SAMPLES};

use crate::campaign::{
    parse_range, spectral_campaign, theorem1_campaign, theorem2_campaign, SpectralConfig, Theorem1Config,
    Theorem2Config,
};
use crate::report::CampaignReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CELLS_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] isoperilab_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "isoperilab", version, about = "Isoperimetry experiments on convex polytopes")]
pub struct Cli {
    /// Worker threads (0 uses one per core). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a polytope from a JSON recipe (inline or a file path).
    Construct {
        #[arg(long)]
        recipe: String,
        /// Polytope JSON; closed forms go to `<out>.closed.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Volume, surface area and iq of a polytope file.
    Iq {
        #[arg(long)]
        input: PathBuf,
    },
    /// Minimal surface area position of a polytope file.
    Petty {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalue certificate of an origin-symmetric polytope file.
    Spectral {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification campaign.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Dimensions, `a..b` inclusive or a single value.
        #[arg(long)]
        n_range: Option<String>,
        #[arg(long)]
        phi_range: Option<String>,
        #[arg(long)]
        beta_range: Option<String>,
        #[arg(long)]
        m_range: Option<String>,
        /// Random bodies per Lindelöf cell, or per (n, m) spectral cell.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Re-serialize a campaign report.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `argv`, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_RUNTIME;
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("output serializes");
    let mut s = serde_json::to_string_pretty(&value).expect("output serializes");
    s.push('\n');
    s
}

fn load_document(path: &Path) -> Result<PolytopeDocument, CliError> {
    Ok(PolytopeDocument::from_json(&read(path)?)?)
}

fn range(arg: &Option<String>, flag: &str) -> Result<Option<Vec<u64>>, CliError> {
    arg.as_deref().map(parse_range).transpose().map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".closed.json");
    PathBuf::from(s)
}

fn run(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Construct { recipe, out } => {
            let text = if recipe.trim_start().starts_with('{') { recipe } else { read(Path::new(&recipe))? };
            let recipe = Recipe::from_json(&text).map_err(|e| {
                CliError::Usage(format!("{e}; see the \"Recipes\" section of the README for the schema"))
            })?;
            let c = recipe.build()?;
            let doc = c.document().to_json() + "\n";
            match out {
                Some(p) => {
                    write(&p, &doc)?;
                    write(&sidecar(&p), &pretty(&c.closed))?;
                }
                None => print!("{}", pretty(&serde_json::json!({ "polytope": c.document(), "closed": c.closed }))),
            }
            Ok(EXIT_OK)
        }
        Command::Iq { input } => {
            let p = load_document(&input)?.to_polytope()?;
            emit(None, &pretty(&ClosedForms::measured(&p)))?;
            Ok(EXIT_OK)
        }
        Command::Petty { input, seed, out } => {
            let p = load_document(&input)?.to_polytope()?;
            let r = petty_minimize(&p, &PettyOptions { seed, ..PettyOptions::default() })?;
            let schatten = schatten_bound_check(&p, &r).ok();
            emit(out.as_deref(), &pretty(&serde_json::json!({ "position": r, "schatten": schatten })))?;
            Ok(if r.certified { EXIT_OK } else { EXIT_CELLS_FAILED })
        }
        Command::Spectral { input, samples, seed, out } => {
            let doc = load_document(&input)?;
            let h = match doc.hpolytope()? {
                Some(h) => h,
                None => doc.to_polytope()?.hrep()?,
            };
            let c = spectral_certificate(&h, samples, seed)?;
            let mut v = c.to_json();
            v["details"] = serde_json::to_value(&c).expect("certificates serialize");
            emit(out.as_deref(), &pretty(&v))?;
            Ok(if c.passes { EXIT_OK } else { EXIT_CELLS_FAILED })
        }
        Command::Verify { theorem, n_range, phi_range, beta_range, m_range, trials, samples, seed, out, format } => {
            let started = Instant::now();
            let default_n = match theorem {
                Theorem::Spectral => vec![2, 3],
                _ => vec![2, 3, 4, 5],
            };
            let n: Vec<usize> = match range(&n_range, "n-range")? {
                Some(v) => v.into_iter().map(|x| x as usize).collect(),
                None => default_n,
            };
            if n.contains(&0) {
                return Err(CliError::Usage("--n-range: dimensions start at 1".into()));
            }
            let report = match theorem {
                Theorem::One => theorem1_campaign(&Theorem1Config {
                    n,
                    phi: range(&phi_range, "phi-range")?,
                    trials: trials.unwrap_or(20),
                    seed,
                }),
                Theorem::Two => theorem2_campaign(&Theorem2Config { n, beta: range(&beta_range, "beta-range")?, seed }),
                Theorem::Spectral => spectral_campaign(&SpectralConfig {
                    n,
                    m: range(&m_range, "m-range")?,
                    trials: trials.unwrap_or(50),
                    samples,
                    seed,
                }),
            };
            log::info!("{} campaign: {} cells in {:.2?}", report.campaign, report.cells.len(), started.elapsed());
            eprintln!(
                "{}: {} cells, {} failed, {} skipped, {:.2?}",
                report.campaign,
                report.cells.len(),
                report.cells_failed,
                report.cells_skipped,
                started.elapsed()
            );
            emit(out.as_deref(), &serialize(&report, format)?)?;
            Ok(if report.passed { EXIT_OK } else { EXIT_CELLS_FAILED })
        }
        Command::Report { input, format, out } => {
            let report = CampaignReport::from_json(&read(&input)?)
                .map_err(|e| CliError::Usage(format!("{}: not a campaign report: {e}", input.display())))?;
            emit(out.as_deref(), &serialize(&report, format)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn serialize(report: &CampaignReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(report.to_json()),
        Format::Csv => report.to_csv().map_err(|e| CliError::Usage(format!("csv: {e}"))),
    }
}

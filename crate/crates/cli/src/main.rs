mod args;
mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use log::{info, warn};
use rrf_core::io::{export_sdpa, parse_csv, parse_problem, ReportDocument};
use rrf_core::{
    epigraph_distance, is_robust_feasible, natural_base, rrf_bounds, rrf_estimate,
    separability_radius, OracleConfig, SolverConfig, UncertaintyRadii,
};
use serde::Serialize;

use args::{Cli, Command, Options, Output};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        source: rrf_core::Error,
    },
    #[error("{}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] rrf_core::Error),
}

/// What a successful run produced.
struct Rendered {
    text: String,
    converged: bool,
}

fn solver_config(opts: &Options) -> rrf_core::Result<SolverConfig> {
    let mut cfg = SolverConfig::default();
    if let Some(tol) = opts.tol {
        cfg.gap_tol = tol;
    }
    if let Some(iters) = opts.max_iters {
        cfg.max_iters = iters;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn oracle_config(opts: &Options) -> rrf_core::Result<OracleConfig> {
    let mut cfg = OracleConfig::default();
    if let Some(grid) = opts.grid {
        cfg.x_grid = grid;
    }
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn load_problem(path: &Path) -> Result<(Vec<u8>, rrf_core::NominalProblem), CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let p = parse_problem(&text).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((bytes, p))
}

fn emit<T: Serialize, C: Serialize>(
    output: Output,
    input: &[u8],
    config: C,
    result: T,
    text: impl FnOnce(&T) -> String,
) -> String {
    match output {
        Output::Json => ReportDocument::new(input, config, result).to_json(),
        Output::Text => text(&result),
    }
}

fn run(cli: &Cli) -> Result<Rendered, CliError> {
    let opts = &cli.opts;
    let out = opts.output;
    Ok(match &cli.command {
        Command::Bounds { problem } => {
            let cfg = solver_config(opts)?;
            let (bytes, p) = load_problem(problem)?;
            let report = rrf_bounds(&p, &cfg)?;
            info!("bounds after {} iterations", report.iterations);
            let converged = report.converged;
            Rendered {
                text: emit(out, &bytes, cfg, report, render::bounds),
                converged,
            }
        }
        Command::Dist { problem } => {
            let cfg = solver_config(opts)?;
            let (bytes, p) = load_problem(problem)?;
            let d = epigraph_distance(&p, &natural_base(p.cone), &cfg)?;
            let converged = d.converged;
            Rendered {
                text: emit(out, &bytes, cfg, d, render::dist),
                converged,
            }
        }
        Command::Oracle {
            problem,
            r,
            estimate,
        } => {
            let cfg = oracle_config(opts)?;
            let (bytes, p) = load_problem(problem)?;
            let text = if *estimate {
                let est = rrf_estimate(&p, &cfg)?;
                emit(out, &bytes, cfg, est, render::estimate)
            } else {
                let radii = UncertaintyRadii::new(r.clone().unwrap_or_default())?;
                let verdict = is_robust_feasible(&p, &radii, &cfg)?;
                emit(out, &bytes, cfg, verdict, render::verdict)
            };
            Rendered {
                text,
                converged: true,
            }
        }
        Command::Svm { data } => {
            let cfg = solver_config(opts)?;
            let bytes = read(data)?;
            let set =
                parse_csv(&String::from_utf8_lossy(&bytes)).map_err(|source| CliError::Input {
                    path: data.clone(),
                    source,
                })?;
            let radius = separability_radius(&set, &cfg)?;
            let converged = radius.converged;
            Rendered {
                text: emit(out, &bytes, cfg, radius, render::svm),
                converged,
            }
        }
        Command::ExportSdpa { problem } => {
            let (_, p) = load_problem(problem)?;
            Rendered {
                text: export_sdpa(&p)?,
                converged: true,
            }
        }
    })
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let wrap = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wrap)?;
    tmp.write_all(text.as_bytes()).map_err(wrap)?;
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RRF_LOG", "warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let rendered = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match &cli.opts.out {
        Some(path) => {
            if let Err(e) = write_atomic(path, &rendered.text) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
        None => print!("{}", rendered.text),
    }
    if rendered.converged {
        ExitCode::SUCCESS
    } else {
        warn!("solver stopped at the iteration cap; the interval is valid but loose");
        eprintln!("warning: solver did not converge");
        ExitCode::from(2)
    }
}

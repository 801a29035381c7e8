//! `clonelab` command-line interface: fidelity tables, QKD sweeps and the verification report.

mod args;
mod commands;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use commands::{Family, Params, Protocol};

/// One parsed list per flag occurrence.
type List = Vec<usize>;
type Grid = Vec<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "clonelab", version, about = "Quantum cloning tables, QKD sweeps and verification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Qudit dimensions, e.g. `2,3,5` or `2..7`.
    #[arg(long, value_parser = args::parse_list)]
    d: Option<List>,
    /// Input copy counts.
    #[arg(long = "N", value_parser = args::parse_list)]
    n: Option<List>,
    /// Output copy counts.
    #[arg(long = "M", value_parser = args::parse_list)]
    m: Option<List>,
    /// Number of attacked bases g (1 ≤ g ≤ d).
    #[arg(long, value_parser = args::parse_list)]
    g: Option<List>,
    /// F_Bob grid, `lo:hi:n` or a comma list.
    #[arg(long, value_parser = args::parse_grid)]
    grid: Option<Grid>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

impl Common {
    fn params(&self) -> Params {
        Params { d: self.d.clone(), n: self.n.clone(), m: self.m.clone(), g: self.g.clone(), grid: self.grid.clone() }
    }
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Emit a fidelity or disturbance table.
    Table {
        #[arg(value_enum)]
        family: Family,
        #[command(flatten)]
        common: Common,
    },
    /// Emit (F_Bob, F_Eve) curves.
    Sweep {
        #[arg(value_enum)]
        protocol: Protocol,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance checks; exits 0 iff every selected check passes.
    Verify {
        /// Criterion number, criterion key or check-name prefix; repeatable. All when absent.
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Override the tolerance of every check.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_table(t: &table::Table, common: &Common) -> Result<()> {
    let mut w = sink(&common.out)?;
    match common.format {
        Format::Csv => t.write_csv(&mut w)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &t.to_json())?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Table { family, common } => {
            emit_table(&commands::table(family, &common.params())?, &common)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sweep { protocol, common } => {
            emit_table(&commands::sweep(protocol, &common.params())?, &common)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { checks, tol, out, format } => {
            let all: Vec<String> = clonelab::verify::CRITERIA.iter().map(|c| c.key.to_string()).collect();
            let selectors = if checks.is_empty() { all } else { checks };
            let selection = match commands::select(&selectors) {
                Ok(s) => s,
                Err(msg) => Cli::command().error(clap::error::ErrorKind::InvalidValue, msg).exit(),
            };
            if tol.is_some_and(|t| !(t.is_finite() && t >= 0.0)) {
                Cli::command().error(clap::error::ErrorKind::InvalidValue, "--tol must be finite and >= 0").exit();
            }
            let report = commands::verify(&selection, tol)?;
            let mut w = sink(&out)?;
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut w, &report)?;
                    writeln!(w)?;
                }
                Format::Csv => {
                    let mut t = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut w);
                    t.write_record(["name", "expected", "got", "tol", "pass"])?;
                    for c in &report.checks {
                        let num = |x: f64| args::sig12(x);
                        t.write_record([c.name.clone(), num(c.expected), num(c.got), num(c.tol), c.pass.to_string()])?;
                    }
                    t.flush()?;
                }
            }
            w.flush()?;
            let passed = report.checks.iter().filter(|c| c.pass).count();
            eprintln!("{passed}/{} checks passed", report.checks.len());
            Ok(if report.pass() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        let kind = c
            .downcast_ref::<io::Error>()
            .map(io::Error::kind)
            .or_else(|| c.downcast_ref::<serde_json::Error>().and_then(serde_json::Error::io_error_kind));
        kind == Some(io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

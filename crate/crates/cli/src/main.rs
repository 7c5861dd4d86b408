use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use omn::config::{self, Config};
use omn::error::{CliError, Result};
use omn::figures::Figure;
use omn::sweep::{self, SweepSpec};
use omn::report;
use omn_core::{critical, pipeline};

/// Steady-state entanglement of two Coulomb-coupled mechanical oscillators.
#[derive(Debug, Parser)]
#[command(name = "omn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one parameter set and print everything as JSON.
    Point {
        /// Config file; only `base.*` entries are used.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override a base parameter, e.g. `--set detuning_in_omega_m=0.75`.
        #[arg(long = "set", value_name = "KEY=EXPR")]
        set: Vec<String>,
    },
    /// Run the grid described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output file; `.json` selects JSON, anything else CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallel: Option<usize>,
    },
    Fig2(FigureArgs),
    Fig3(FigureArgs),
    Fig4(FigureArgs),
    Fig5a(FigureArgs),
    Fig5b(FigureArgs),
    /// Locate the temperature where entanglement vanishes.
    CriticalTemp {
        #[arg(long)]
        config: PathBuf,
        /// Lower end of the bracket, K.
        #[arg(long)]
        t_lo: f64,
        /// Upper end of the bracket, K.
        #[arg(long)]
        t_hi: f64,
        /// Bracket width to stop at, K.
        #[arg(long)]
        tol: f64,
    },
}

#[derive(Debug, clap::Args)]
struct FigureArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    parallel: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("omn: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Point { config, set } => {
            let mut text = match config {
                Some(path) => read_config(&path)?,
                None => String::new(),
            };
            for entry in &set {
                let (key, value) =
                    entry.split_once('=').ok_or_else(|| CliError::config(format!("--set {entry}: expected KEY=EXPR")))?;
                if !text.is_empty() && !text.ends_with('\n') {
                    text.push('\n');
                }
                text.push_str(&format!("base.{} = {}\n", key.trim(), value.trim()));
            }
            let params = base_only(config::parse(&text)?, "point")?;
            print_json(&report::point_json(&params, &pipeline::evaluate(&params)))
        }
        Command::Sweep { config, out, parallel } => {
            let cfg = config::parse(&read_config(&config)?)?;
            let spec = SweepSpec::from_config(cfg, out, parallel)?;
            run_spec(&spec)
        }
        Command::Fig2(a) => run_figure(Figure::Fig2, a),
        Command::Fig3(a) => run_figure(Figure::Fig3, a),
        Command::Fig4(a) => run_figure(Figure::Fig4, a),
        Command::Fig5a(a) => run_figure(Figure::Fig5a, a),
        Command::Fig5b(a) => run_figure(Figure::Fig5b, a),
        Command::CriticalTemp { config, t_lo, t_hi, tol } => {
            if !(t_lo > 0.0 && t_hi > t_lo && t_hi.is_finite() && tol > 0.0) {
                return Err(CliError::config("need 0 < --t-lo < --t-hi and --tol > 0"));
            }
            let params = base_only(config::parse(&read_config(&config)?)?, "critical-temp")?;
            let result = critical::critical_temperature(&params, t_lo, t_hi, tol);
            print_json(&report::critical_json(t_lo, t_hi, tol, &result))
        }
    }
}

fn run_figure(figure: Figure, args: FigureArgs) -> Result<()> {
    let parallel = match args.parallel {
        Some(0) => return Err(CliError::config("--parallel must be >= 1")),
        Some(n) => n,
        None => sweep::env_parallelism()?.unwrap_or_else(sweep::default_parallelism),
    };
    run_spec(&figure.spec(args.out, parallel))
}

fn run_spec(spec: &SweepSpec) -> Result<()> {
    let rows = sweep::run_sweep(spec)?;
    sweep::write_table(&spec.output_path, &spec.axes, &rows)
}

fn base_only(cfg: Config, command: &str) -> Result<omn_core::params::SystemParams> {
    if !cfg.axes.is_empty() {
        return Err(CliError::config(format!("{command} takes no axes.* entries")));
    }
    Ok(cfg.base)
}

fn read_config(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)
        .map_err(std::io::Error::from)
        .and_then(|()| writeln!(out))
        .map_err(|e| CliError::io("<stdout>", e))
}

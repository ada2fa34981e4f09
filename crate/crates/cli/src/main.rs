use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wkb_march_cli::config::ConfigFile;
use wkb_march_cli::output::{write_nodes, write_table};
use wkb_march_cli::{run_convergence, run_phase_study, run_solve, run_work_precision, CliError, ExperimentConfig};

/// WKB marching schemes for eps^2 phi'' + a(x) phi = 0.
#[derive(Parser)]
#[command(name = "wkb-march", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one IVP and print the solution at every node.
    Solve(Common),
    /// Global errors over an (eps, h) sweep with log-log slopes.
    Convergence(Common),
    /// As convergence, with median solve times over repetitions.
    WorkPrecision(Common),
    /// As convergence with a numerically integrated phase.
    PhaseStudy(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML experiment file; flags override its entries.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// airy, airy(<x_end>), exp, constant(<c>) or custom.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    step_sizes: Option<Vec<f64>>,
    /// exact, simpson or chebyshev<N>.
    #[arg(long)]
    phase_mode: Option<String>,
    /// U or wave.
    #[arg(long)]
    error_frame: Option<String>,
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

fn load(args: &Common) -> Result<ExperimentConfig, CliError> {
    let mut file = match &args.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let a = args.clone();
    file.problem = a.problem.or(file.problem);
    file.methods = a.methods.or(file.methods);
    file.epsilons = a.epsilons.or(file.epsilons);
    file.step_sizes = a.step_sizes.or(file.step_sizes);
    file.phase_mode = a.phase_mode.or(file.phase_mode);
    file.error_frame = a.error_frame.or(file.error_frame);
    file.repetitions = a.repetitions.or(file.repetitions);
    let mut out = file.output.take().unwrap_or_default();
    out.path = a.output.or(out.path);
    out.format = a.format.or(out.format);
    file.output = Some(out);
    ExperimentConfig::from_file(file)
}

fn sink(cfg: &ExperimentConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cfg.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn single<T: Copy>(v: &[T], what: &str) -> Result<T, CliError> {
    match v {
        [x] => Ok(*x),
        _ => Err(CliError::Config(format!("solve needs exactly one {what}"))),
    }
}

fn execute(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Solve(args) => {
            let cfg = load(&args)?;
            let method = single(&cfg.methods, "method")?;
            let eps = single(&cfg.epsilons, "epsilon")?;
            let h = single(&cfg.step_sizes, "step size")?;
            let nodes = run_solve(&cfg.problem, method, eps, h, cfg.phase_mode)?;
            write_nodes(&nodes, cfg.format, sink(&cfg)?)
        }
        Command::Convergence(args) => {
            let cfg = load(&args)?;
            write_table(&run_convergence(&cfg)?, cfg.format, sink(&cfg)?)
        }
        Command::WorkPrecision(args) => {
            let cfg = load(&args)?;
            write_table(&run_work_precision(&cfg)?, cfg.format, sink(&cfg)?)
        }
        Command::PhaseStudy(args) => {
            let cfg = load(&args)?;
            write_table(&run_phase_study(&cfg)?, cfg.format, sink(&cfg)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wkb-march: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twisted_ring_lab::experiment::{
    emit, run, ExperimentConfig, ExperimentKind, OutputFormat, Overrides, RunError,
};

#[derive(Parser)]
#[command(name = "twlab", version, about = "Experiments on twisted group rings and time-frequency translates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the cocycle identity on random triples.
    CocycleCheck(Common),
    /// Search truncated windows for a zero-divisor cofactor.
    ZdSearch(Common),
    /// Build the explicit zero-divisor pair at a torsion element.
    TorsionConstruct(Common),
    /// Interior ratios, kernel nullities and dimension estimates over growing windows.
    FolnerDim(Common),
    /// Gram matrix and independence witness for time-frequency translates.
    GaborGram(Common),
    /// Gram witness, kernel search and dimension estimate on one lattice.
    Pipeline(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of printing a table.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn load(kind: ExperimentKind, args: &Common) -> Result<ExperimentConfig, RunError> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| RunError::Config {
                field: "--config".into(),
                message: format!("{}: {e}", path.display()),
            })?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::default(),
    };
    let overrides = Overrides {
        radius: args.radius,
        tol: args.tol,
        out: args.out.as_ref().map(|p| p.display().to_string()),
    };
    config.apply(kind, &overrides)?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::CocycleCheck(a) => (ExperimentKind::CocycleCheck, a),
        Command::ZdSearch(a) => (ExperimentKind::ZdSearch, a),
        Command::TorsionConstruct(a) => (ExperimentKind::TorsionConstruct, a),
        Command::FolnerDim(a) => (ExperimentKind::FolnerDim, a),
        Command::GaborGram(a) => (ExperimentKind::GaborGram, a),
        Command::Pipeline(a) => (ExperimentKind::Pipeline, a),
    };
    let report = match load(kind, args).and_then(|c| run(&c).map(|r| (c, r))) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("twlab {}: {e}", kind.name());
            return ExitCode::from(e.status().code() as u8);
        }
    };
    let (config, report) = report;
    let format = match args.format {
        Some(Format::Csv) => OutputFormat::Csv,
        _ => OutputFormat::Json,
    };
    match &config.output {
        Some(path) => {
            if let Err(e) = emit(&report, format, path.as_ref()) {
                eprintln!("twlab {}: cannot write {path}: {e}", kind.name());
                return ExitCode::from(1);
            }
            print!("{}", report.table);
        }
        None if args.format.is_some() => print!("{}", report.render(format)),
        None => print!("{}", report.table),
    }
    ExitCode::from(report.status.code() as u8)
}

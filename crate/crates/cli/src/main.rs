use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use epstab::commands::{run_bound, run_oracle, run_sample, run_sweep, run_verify, sample_settings, SweepAxis};
use epstab::datasets::DATASETS;
use epstab::{open_scenario, CliError, CliResult, Format, Report, EXIT_FLAGGED};

#[derive(Parser)]
#[command(
    name = "epstab",
    version,
    about = "Equilibrium stability bounds and checks for gravitating belts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// More log output; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic epsilon bound of a similar, powerlaw or planets scenario.
    Bound {
        /// Scenario file, or the name of a bundled dataset.
        #[arg(long)]
        scenario: String,
        /// Target epsilon; adds the largest admissible body count or mass.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Metropolis estimate of the radial variances.
    Sample {
        #[arg(long)]
        scenario: String,
        /// Sweeps per chain, burn-in included.
        #[arg(long, default_value_t = 200_000)]
        steps: u64,
        /// Defaults to a tenth of the steps.
        #[arg(long)]
        burn_in: Option<u64>,
        #[arg(long, default_value_t = 4)]
        chains: usize,
        /// Drawn at random and reported when omitted.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Quadrature value of the radial variances for two bodies.
    Oracle {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 1e-6)]
        rel_tol: f64,
    },
    /// Residuals of the graph identities over random weights.
    Verify {
        /// Number of vertices, at most 6.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        draws: usize,
    },
    /// The bound along one parameter.
    Sweep {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        axis: String,
        /// First value; a bare number or `"<value> <unit>"`.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Space the points geometrically.
        #[arg(long)]
        log: bool,
    },
    /// Bundled scenario files.
    Datasets {
        #[command(subcommand)]
        action: DatasetAction,
    },
}

#[derive(Subcommand)]
enum DatasetAction {
    List,
    Show { name: String },
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        log::info!("no seed given, using {s}");
        s
    })
}

fn run(cli: &Cli) -> CliResult<Option<Report>> {
    Ok(Some(match &cli.command {
        Command::Bound { scenario, eps } => run_bound(&open_scenario(scenario)?, *eps)?,
        Command::Sample {
            scenario,
            steps,
            burn_in,
            chains,
            seed,
        } => {
            let settings = sample_settings(*steps, *burn_in, *chains, seed_or_random(*seed));
            run_sample(&open_scenario(scenario)?, &settings)?
        }
        Command::Oracle { scenario, rel_tol } => run_oracle(&open_scenario(scenario)?, *rel_tol)?,
        Command::Verify { n, seed, draws } => run_verify(*n, seed_or_random(*seed), *draws)?,
        Command::Sweep {
            scenario,
            axis,
            from,
            to,
            points,
            log,
        } => run_sweep(
            &open_scenario(scenario)?,
            &SweepAxis {
                name: axis.clone(),
                from: from.clone(),
                to: to.clone(),
                points: *points,
                log: *log,
            },
        )?,
        Command::Datasets { action } => {
            let mut out = io::stdout().lock();
            let io = |source| CliError::Io {
                context: "writing to standard output".into(),
                source,
            };
            match action {
                DatasetAction::List => {
                    for d in DATASETS {
                        writeln!(out, "{:<20} {}", d.name, d.summary).map_err(io)?;
                    }
                }
                DatasetAction::Show { name } => {
                    let d = epstab::datasets::find(name)
                        .ok_or_else(|| CliError::Input(format!("no bundled dataset `{name}`")))?;
                    out.write_all(d.text.as_bytes()).map_err(io)?;
                }
            }
            return Ok(None);
        }
    }))
}

fn emit(cli: &Cli, report: &Report) -> CliResult<()> {
    match &cli.out {
        Some(path) => {
            let mut f = File::create(path).map_err(|source| CliError::Io {
                context: format!("creating {}", path.display()),
                source,
            })?;
            report.write(cli.format, &mut f)
        }
        None => report.write(cli.format, &mut io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = run(&cli).and_then(|report| {
        if let Some(r) = &report {
            emit(&cli, r)?;
        }
        Ok(report)
    });
    match result {
        Ok(Some(r)) if r.flagged.is_some() => {
            eprintln!("epstab: {}", r.flagged.as_deref().unwrap_or_default());
            ExitCode::from(EXIT_FLAGGED as u8)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("epstab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

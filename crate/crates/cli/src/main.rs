//! `limitlab`: limit sets, basins and immersion checks for the catalog systems.

mod commands;
mod demo;
mod error;
mod parse;
mod render;
mod settings;

use clap::{Parser, Subcommand};
use commands::{Ctx, ImmersionChoice};
use error::CliError;
use limitlab_core::catalog::get_system;
use settings::Settings;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "limitlab", version, about = "Limit sets, basins and immersion checks for discrete-time systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Catalog system, e.g. mobius, cot-map, rotation-scaling.
    #[arg(long, global = true, default_value = "mobius")]
    system: String,
    /// System parameter as key=value, repeatable.
    #[arg(long = "param", global = true, value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Domain such as "[-1,1]", "(-inf,1)", "[-2,2]x[-2,2]", "annulus[0.1,10]" or "R^2".
    #[arg(long, global = true, allow_hyphen_values = true)]
    domain: Option<String>,
    #[arg(long, global = true, env = "LIMITLAB_SEED", default_value_t = 42)]
    seed: u64,
    /// Directory for artifacts.
    #[arg(long, global = true, default_value = "limitlab-out")]
    out: PathBuf,
    /// Caps worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides a numeric default as name=value, repeatable (see the README table).
    #[arg(long = "set", global = true, value_name = "NAME=VALUE")]
    sets: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate one orbit and write it as CSV.
    Simulate {
        /// Initial point, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Iterate the inverse map.
        #[arg(long)]
        backward: bool,
    },
    /// Estimate and cluster limit sets from many seeds.
    Limits {
        /// Seeds as semicolon-separated points; defaults to the documented seeds plus a grid.
        #[arg(long, allow_hyphen_values = true)]
        seeds: Option<String>,
        /// Include alpha-limit sets.
        #[arg(long)]
        alpha: bool,
    },
    /// Label a grid by limit set and look for basin-closedness witnesses.
    Basins,
    /// Check an immersion: conjugacy residual, injectivity and limit-set collapse.
    Verify {
        #[arg(long, value_enum, default_value_t = ImmersionChoice::Exact)]
        immersion: ImmersionChoice,
        /// Dictionary for a learned immersion, e.g. fourier:3.
        #[arg(long, default_value = "monomial:3")]
        dict: String,
        #[arg(long, default_value_t = 0.0)]
        ridge: f64,
    },
    /// Fit a linear lift on a dictionary.
    Learn {
        /// fourier:N, monomial:N or rational-pole:POLE:N.
        #[arg(long)]
        dict: String,
        #[arg(long, default_value_t = 0.0)]
        ridge: f64,
    },
    /// Fit every dictionary and ridge, recording residual against collapse.
    Sweep {
        /// Comma-separated dictionaries; sizes may be ranges such as fourier:1-8.
        #[arg(long, default_value = "fourier:1-8")]
        dicts: String,
        #[arg(long, default_value = "0,1e-8,1e-4")]
        ridges: String,
    },
    /// Run the four worked examples with their golden checks.
    Demo,
    /// Print the numeric defaults that --set overrides.
    Settings,
    /// Turn CSV artifacts into PPM rasters and XY data files.
    Render {
        /// Specific artifacts; by default every CSV in the output directory.
        files: Vec<PathBuf>,
    },
}

fn context(cli: &Cli, settings: Settings) -> Result<Ctx, CliError> {
    let params = parse::key_values(&cli.params, "invalid_param")?;
    let entry = get_system(&cli.system, &params)?;
    let dim = entry.system.dim();
    let (domain, domain_given) = match &cli.domain {
        Some(d) => (parse::domain(d, dim)?, true),
        None => (entry.sample_domain.clone(), false),
    };
    Ok(Ctx { entry, domain, domain_given, seed: cli.seed, out: cli.out.clone(), settings })
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let settings = Settings::from_overrides(&parse::key_values(&cli.sets, "invalid_setting")?)?;
    let report = match &cli.command {
        Command::Demo => demo::run(&settings, cli.seed, &cli.out)?,
        Command::Settings => return Ok(settings::table_json()),
        Command::Render { files } => return render::run(&cli.out, files),
        Command::Simulate { x0, backward } => commands::simulate(&context(cli, settings)?, x0.as_deref(), *backward)?,
        Command::Limits { seeds, alpha } => commands::limits(&context(cli, settings)?, seeds.as_deref(), *alpha)?,
        Command::Basins => commands::basins(&context(cli, settings)?)?,
        Command::Verify { immersion, dict, ridge } => commands::verify(&context(cli, settings)?, *immersion, dict, *ridge)?,
        Command::Learn { dict, ridge } => commands::learn(&context(cli, settings)?, dict, *ridge)?,
        Command::Sweep { dicts, ridges } => commands::sweep(&context(cli, settings)?, dicts, ridges)?,
    };
    Ok(serde_json::to_string_pretty(&report).expect("reports serialize"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::validation("usage", e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            let err = CliError::validation("usage", "--threads must be at least 1");
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool is configured once");
    }
    match run(&cli) {
        Ok(text) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use watson::sweep::{run_sweep, write_csv};
use watson::verify::{check_bounds, run_preset, VerifyPreset};

use config::{output_path, parse_range, FileConfig, Overrides, OUT_DIR_ENV};

/// Optimally truncated Watson expansions of Laplace integrals, checked
/// against quadrature.
#[derive(Debug, Parser)]
#[command(name = "watson", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate expansion and reference on an (x, theta) grid and write CSV.
    Sweep(SweepArgs),
    /// Randomized checks of the incomplete gamma bounds.
    CheckBounds {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Samples per bound.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Run the acceptance checks: fig1, fig2, bounds, hadamard, e1, trivial or all.
    Verify {
        #[arg(default_value = "all")]
        preset: String,
    },
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Baked-in grid: fig1a, fig1b, fig2a, fig2b, e1, trivial.
    #[arg(long)]
    preset: Option<String>,
    /// TOML file with any of the keys below; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Amplitude (u:a,b | struve | pole:psi/pi | sqrt:psi/pi | constant | e1); repeatable.
    #[arg(long = "spec")]
    specs: Vec<String>,
    #[arg(long)]
    r: Option<f64>,
    /// Comma-separated |z| values.
    #[arg(long, value_delimiter = ',')]
    x: Vec<f64>,
    /// start:stop of arg z, in units of pi.
    #[arg(long, value_parser = parse_range)]
    theta_range: Option<(f64, f64)>,
    /// Number of theta points.
    #[arg(long)]
    points: Option<usize>,
    /// Sector margin, in units of pi.
    #[arg(long)]
    delta: Option<f64>,
    /// Relative tolerance of the reference quadrature.
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output file or directory; defaults to $WATSON_OUT_DIR/<name>.csv, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn sweep(args: SweepArgs) -> Result<ExitCode> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let flags = Overrides {
        preset: args.preset,
        specs: args.specs,
        r: args.r,
        x: (!args.x.is_empty()).then_some(args.x),
        theta_range: args.theta_range,
        points: args.points,
        delta: args.delta,
        tol: args.tol,
        jobs: args.jobs,
        out: args.out,
    };
    let resolved = config::resolve(file, flags)?;
    let records = run_sweep(&resolved.config, resolved.jobs)?;
    let failed = records.iter().filter(|r| r.error.is_some()).count();

    let env_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    match output_path(resolved.out.as_deref(), env_dir.as_deref(), &resolved.name) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&records, BufWriter::new(f))?;
            eprintln!("wrote {} rows to {}", records.len(), path.display());
        }
        None => write_csv(&records, io::stdout().lock())?,
    }
    if failed > 0 {
        eprintln!("{failed} grid points failed; see the error column");
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::CheckBounds { seed, samples } => {
            let report = check_bounds(seed, samples);
            println!("seed {seed}");
            println!("{report}");
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Verify { preset } => verify(&preset),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn verify(preset: &str) -> Result<ExitCode> {
    let preset: VerifyPreset = preset.parse()?;
    let reports = run_preset(preset);
    let mut out = io::stdout().lock();
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    writeln!(out, "{passed} of {} criteria passed", reports.len())?;
    Ok(if passed == reports.len() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

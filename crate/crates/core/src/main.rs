use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nanodot::charge::Unfolding;
use nanodot::cli::{self, OutputFormat, Report, RunConfig, ZeroCache};
use nanodot::zeros::ZeroKind;
use nanodot::{Error, Order};

/// Bessel zeros with interlacing-certified brackets and the spectrum of a
/// graphene disk with infinite-mass confinement.
///
/// Exit codes: 0 success, 1 interlacing violations, 2 usage error,
/// 3 numeric failure.
#[derive(Debug, Parser)]
#[command(name = "nanodot", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Disk radius in nm.
    #[arg(long, global = true, default_value_t = 100.0)]
    radius: f64,

    /// Fermi velocity in units of c.
    #[arg(long, global = true, default_value_t = 1.0 / 300.0)]
    vf: f64,

    /// Valley × spin multiplicity.
    #[arg(long, global = true, default_value_t = 4)]
    degeneracy: u32,

    /// Temperature in kelvin; 0 gives the zero-temperature staircase.
    #[arg(long, global = true, default_value_t = 0.0)]
    temperature: f64,

    /// Spectrum extent in units of ħc·v_F/R.
    #[arg(long, global = true, default_value_t = 120.0)]
    zmax: f64,

    /// Root tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Zero cache file (defaults to $NANODOT_CACHE when set).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Bessel,
    BesselPrime,
    CrossMinus,
    CrossPlus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UnfoldingArg {
    Weyl,
    GlobalMean,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Positive zeros of J_ν, J'_ν or J_{ν-1} ± J_ν.
    Zeros {
        #[arg(long)]
        nu: f64,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Disk levels below zmax, with the gap.
    Spectrum,
    /// Mean carrier number and Weyl term on a μ grid (meV).
    Charge {
        #[arg(long, default_value_t = -30.0, allow_negative_numbers = true)]
        mu_min: f64,
        #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
        mu_max: f64,
        #[arg(long, default_value_t = 601)]
        mu_steps: usize,
    },
    /// Conductance peak positions in a μ window (meV).
    Peaks {
        #[arg(long, default_value_t = -30.0, allow_negative_numbers = true)]
        mu_min: f64,
        #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
        mu_max: f64,
    },
    /// Check the interlacing inequalities; exits 1 on any violation.
    Verify {
        /// Comma-separated orders; `a:b` and `a:b:step` ranges are expanded.
        #[arg(long, default_value = "1:20")]
        nu_list: String,
        #[arg(long, default_value_t = 50)]
        kmax: usize,
    },
    /// Nearest-neighbour spacing statistics of the lowest levels.
    Spacings {
        #[arg(long, default_value_t = 2496)]
        levels: usize,
        #[arg(long, value_enum, default_value_t = UnfoldingArg::Weyl)]
        unfolding: UnfoldingArg,
    },
}

fn run_config(g: &GlobalArgs) -> RunConfig {
    RunConfig {
        radius_nm: g.radius,
        fermi_velocity_over_c: g.vf,
        temperature_k: g.temperature,
        degeneracy: g.degeneracy,
        z_max: g.zmax,
        tolerance: g.tol,
        output_format: match g.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
        cache_path: cli::resolve_cache_path(g.cache.clone()),
    }
}

fn run(command: Command, config: &RunConfig) -> Result<(Report, bool), Error> {
    let report = match command {
        Command::Zeros { nu, kind, count } => {
            let kind = match kind {
                Kind::Bessel => ZeroKind::Bessel,
                Kind::BesselPrime => ZeroKind::BesselPrime,
                Kind::CrossMinus => ZeroKind::CrossMinus,
                Kind::CrossPlus => ZeroKind::CrossPlus,
            };
            let mut cache = match &config.cache_path {
                Some(path) => ZeroCache::open(path)?,
                None => ZeroCache::disabled(),
            };
            let report = cli::cmd_zeros(config, Order::new(nu)?, kind, count, &mut cache)?;
            cache.flush()?;
            report
        }
        Command::Spectrum => cli::cmd_spectrum(config)?,
        Command::Charge {
            mu_min,
            mu_max,
            mu_steps,
        } => cli::cmd_charge(config, mu_min, mu_max, mu_steps)?,
        Command::Peaks { mu_min, mu_max } => cli::cmd_peaks(config, mu_min, mu_max)?,
        Command::Verify { nu_list, kmax } => {
            let nus = cli::parse_nu_list(&nu_list)?;
            return cli::cmd_verify(config, &nus, kmax);
        }
        Command::Spacings { levels, unfolding } => {
            let unfolding = match unfolding {
                UnfoldingArg::Weyl => Unfolding::Weyl,
                UnfoldingArg::GlobalMean => Unfolding::GlobalMean,
            };
            cli::cmd_spacings(config, levels, unfolding)?
        }
    };
    Ok((report, true))
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let config = run_config(&args.global);
    match run(args.command, &config) {
        Ok((report, passed)) => {
            let text = report.render(config.output_format);
            if std::io::stdout().lock().write_all(text.as_bytes()).is_err() {
                return ExitCode::from(3);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("nanodot: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}

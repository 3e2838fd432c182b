use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process;

use apsk_core::{Constellation, Family};
use apsk_shaper::commands::{self, Evaluator};
use apsk_shaper::config::{parse_f64_list, parse_families, parse_usize_list};
use apsk_shaper::table::sweep_csv;
use apsk_shaper::{format, CliError, Method, RunConfig};
use clap::{Args, Parser, Subcommand};

/// Capacity-approaching APSK constellations: generation, mutual-information
/// sweeps and numerical convergence checks.
#[derive(Parser)]
#[command(name = "apsk-shaper", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a constellation as JSON.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        power: f64,
        /// Rescale APSK points to average power exactly P.
        #[arg(long)]
        normalize: bool,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mutual information of one constellation at one SNR, as a one-row CSV.
    Evaluate {
        /// Constellation JSON file; alternative to --family/--n.
        #[arg(long, conflicts_with_all = ["family", "n"])]
        input: Option<PathBuf>,
        #[arg(long, requires = "n")]
        family: Option<Family>,
        #[arg(long, requires = "family")]
        n: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        power: f64,
        #[arg(long)]
        normalize: bool,
        #[arg(long, allow_hyphen_values = true)]
        snr_db: f64,
        #[command(flatten)]
        est: EstimatorArgs,
    },
    /// Gap to Gaussian capacity over a (family, n, snr) grid.
    Sweep(GridArgs),
    /// Achievable rates of the two APSK designs.
    Compare(GridArgs),
    /// Lemma table, power audit and characteristic-function scan.
    Convergence {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated families to audit and scan.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        power: Option<f64>,
        /// Directory for lemma.csv, power_audit.csv and cf_convergence.csv
        /// (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct EstimatorArgs {
    /// quad or mc.
    #[arg(long)]
    method: Option<Method>,
    /// Gauss–Hermite nodes per axis.
    #[arg(long)]
    order: Option<usize>,
    /// Monte Carlo draws.
    #[arg(long)]
    samples: Option<u64>,
    /// Monte Carlo seed (falls back to $APSK_SHAPER_SEED, then 42).
    #[arg(long)]
    seed: Option<u64>,
    /// Report bits per real dimension instead of per complex use.
    #[arg(long)]
    per_dimension: bool,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Flat key = value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated families.
    #[arg(long)]
    family: Option<String>,
    /// n values, e.g. 2..35 or 2,4,8.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    power: Option<f64>,
    /// SNR grid in dB, e.g. 5,10,15 or 0..20:2.
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<String>,
    #[arg(long)]
    normalize: bool,
    #[command(flatten)]
    est: EstimatorArgs,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn usage(e: String) -> CliError {
    CliError::Usage(e)
}

fn load_config(base: RunConfig, path: Option<&Path>) -> Result<RunConfig, CliError> {
    let mut cfg = base;
    if let Some(path) = path {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        cfg.apply_file_text(&text)?;
    }
    Ok(cfg)
}

fn apply_estimator(cfg: &mut RunConfig, est: &EstimatorArgs) {
    if let Some(m) = est.method {
        cfg.method = m;
    }
    if let Some(o) = est.order {
        cfg.order = o;
    }
    if let Some(s) = est.samples {
        cfg.samples = s;
    }
    if est.seed.is_some() {
        cfg.seed = est.seed;
    }
    cfg.per_dimension |= est.per_dimension;
}

fn grid_config(base: RunConfig, args: &GridArgs) -> Result<RunConfig, CliError> {
    let mut cfg = load_config(base, args.config.as_deref())?;
    if let Some(f) = &args.family {
        cfg.families = parse_families(f).map_err(usage)?;
    }
    if let Some(n) = &args.n {
        cfg.n_values = parse_usize_list(n).map_err(usage)?;
    }
    if let Some(s) = &args.snr_db {
        cfg.snr_db = parse_f64_list(s).map_err(usage)?;
    }
    if let Some(p) = args.power {
        cfg.power = p;
    }
    cfg.normalize |= args.normalize;
    apply_estimator(&mut cfg, &args.est);
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate {
            family,
            n,
            power,
            normalize,
            out,
        } => emit(out.as_deref(), &commands::generate(family, n, power, normalize)?),
        Command::Evaluate {
            input,
            family,
            n,
            power,
            normalize,
            snr_db,
            est,
        } => {
            let c = match (input, family, n) {
                (Some(path), _, _) => format::read_constellation(&path)?,
                (None, Some(family), Some(n)) => Constellation::build(family, n, power)?,
                _ => return Err(usage("evaluate needs --input or --family with --n".into())),
            };
            let c = if normalize { c.normalized() } else { c };
            let mut cfg = RunConfig::sweep();
            apply_estimator(&mut cfg, &est);
            if cfg.order < 2 {
                return Err(usage(format!("order must be at least 2, got {}", cfg.order)));
            }
            if cfg.samples == 0 {
                return Err(usage("samples must be at least 1".into()));
            }
            let row = Evaluator::new(&cfg)?.row(&c, snr_db)?;
            emit(None, &sweep_csv(&[row]))
        }
        Command::Sweep(args) => {
            let cfg = grid_config(RunConfig::sweep(), &args)?;
            emit(cfg.out.as_deref(), &sweep_csv(&commands::sweep(&cfg)?))
        }
        Command::Compare(args) => {
            let cfg = grid_config(RunConfig::compare(), &args)?;
            emit(cfg.out.as_deref(), &sweep_csv(&commands::compare(&cfg)?))
        }
        Command::Convergence {
            config,
            family,
            power,
            out,
        } => {
            let mut cfg = load_config(RunConfig::convergence(), config.as_deref())?;
            if let Some(f) = family {
                cfg.families = parse_families(&f).map_err(usage)?;
            }
            if let Some(p) = power {
                cfg.power = p;
            }
            let out = out.or(cfg.out.clone());
            let result = commands::convergence(&cfg)?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
                    emit(Some(&dir.join("lemma.csv")), &result.lemma_csv)?;
                    emit(Some(&dir.join("power_audit.csv")), &result.power_csv)?;
                    emit(Some(&dir.join("cf_convergence.csv")), &result.cf_csv)?;
                }
                None => {
                    let text = format!(
                        "# lemma\n{}\n# power_audit\n{}\n# cf_convergence\n{}",
                        result.lemma_csv, result.power_csv, result.cf_csv
                    );
                    emit(None, &text)?;
                }
            }
            match result.violations.first() {
                None => Ok(()),
                Some(_) => Err(CliError::Contract(result.violations.join("; "))),
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("apsk-shaper: {e}");
        process::exit(e.exit_code() as i32);
    }
}

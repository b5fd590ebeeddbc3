use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use jointgiant::analytic::{self, DEFAULT_BETA_TOL, DEFAULT_CURVE_TOL};
use jointgiant::branching::{self, Sampler, TreeEvent};
use jointgiant::harness::{self, fmt_float, PhaseGrid, TrialConfig};
use jointgiant::{Error, Result};

#[derive(Parser)]
#[command(name = "jointgiant", version, about = "Joint components of random double graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EventArg {
    Bd,
    Rb,
}

#[derive(Subcommand)]
enum Command {
    /// Giant fraction beta(l1, l2) with root diagnostics.
    Beta {
        #[arg(long)]
        l1: f64,
        #[arg(long)]
        l2: f64,
        #[arg(long, default_value_t = DEFAULT_BETA_TOL)]
        tol: f64,
    },
    /// Probabilities of B_0 ..= B_dmax from the recursion.
    Bd {
        #[arg(long)]
        l1: f64,
        #[arg(long)]
        l2: f64,
        #[arg(long)]
        dmax: usize,
    },
    /// Critical point on the diagonal and the jump there.
    DiagonalCritical {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Critical curve as CSV.
    Curve {
        #[arg(long)]
        l1_min: f64,
        #[arg(long)]
        l1_max: f64,
        #[arg(long)]
        step: f64,
        #[arg(long, default_value_t = DEFAULT_CURVE_TOL)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Phase diagram grid and curve as CSV, optionally rendered to SVG.
    Phase {
        #[arg(long)]
        out_csv: PathBuf,
        #[arg(long)]
        out_svg: Option<PathBuf>,
        #[arg(long, default_value_t = 76)]
        res: usize,
        #[arg(long, default_value_t = 0.5)]
        l1_min: f64,
        #[arg(long, default_value_t = 8.0)]
        l1_max: f64,
        #[arg(long, default_value_t = 0.5)]
        l2_min: f64,
        #[arg(long, default_value_t = 8.0)]
        l2_max: f64,
    },
    /// One trial, printed as a JSON object.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l1: f64,
        #[arg(long)]
        l2: f64,
        #[arg(long)]
        seed: u64,
        /// Also compute the tadpole core, size core and witness fraction.
        #[arg(long)]
        cores: bool,
        #[arg(long)]
        br_depth: Option<usize>,
        #[arg(long)]
        theta: Option<usize>,
    },
    /// Runs a JSON array of trial configurations into a CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Fill the timing columns (output is then no longer reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Joint component size census over several seeds.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l1: f64,
        #[arg(long)]
        l2: f64,
        #[arg(long)]
        seeds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo estimate of a branching-process event.
    Branching {
        #[arg(long)]
        l1: f64,
        #[arg(long)]
        l2: f64,
        #[arg(long, value_enum)]
        event: EventArg,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string(value).map_err(|e| Error::Format(e.to_string()))?;
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{text}")?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Beta { l1, l2, tol } => print_json(&analytic::beta(l1, l2, tol)?),
        Command::Bd { l1, l2, dmax } => {
            if !(l1.is_finite() && l2.is_finite() && l1 >= 0.0 && l2 >= 0.0) {
                return Err(Error::Parameter("intensities must be finite and non-negative".into()));
            }
            print_json(&analytic::bd_prob(l1, l2, dmax))
        }
        Command::DiagonalCritical { tol } => {
            let (lambda_star, beta_star) = analytic::diagonal_critical(tol)?;
            print_json(&serde_json::json!({ "lambda_star": lambda_star, "beta_star": beta_star }))
        }
        Command::Curve { l1_min, l1_max, step, tol, out } => {
            let points = analytic::trace_curve(l1_min, l1_max, step, tol)?;
            let mut w = create(&out)?;
            writeln!(w, "lambda1,lambda2_critical,beta_at_critical")?;
            for p in points {
                writeln!(
                    w,
                    "{},{},{}",
                    fmt_float(p.lambda1),
                    fmt_float(p.lambda2_critical),
                    fmt_float(p.beta_at_critical)
                )?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Phase { out_csv, out_svg, res, l1_min, l1_max, l2_min, l2_max } => {
            let grid = PhaseGrid { l1_range: (l1_min, l1_max), l2_range: (l2_min, l2_max), resolution: res };
            let csv = create(&out_csv)?;
            let svg = out_svg.as_ref().map(create).transpose()?;
            harness::emit_phase_diagram(grid, csv, svg)?;
            Ok(())
        }
        Command::Simulate { n, l1, l2, seed, cores, br_depth, theta } => {
            let cfg = TrialConfig {
                theta,
                s: br_depth,
                compute_cores: cores || br_depth.is_some(),
                ..TrialConfig::new(n, l1, l2, seed)
            };
            print_json(&harness::run_trial(&cfg)?.to_json())
        }
        Command::Sweep { config, out, threads, timings } => {
            let reader = BufReader::new(File::open(&config)?);
            let grid: Vec<TrialConfig> =
                serde_json::from_reader(reader).map_err(|e| Error::Parameter(format!("config: {e}")))?;
            harness::sweep(&grid, threads, timings, &out)
        }
        Command::Census { n, l1, l2, seeds, seed, out } => {
            let summary = harness::census_experiment(n, l1, l2, seeds, seed, create(&out)?)?;
            print_json(&serde_json::json!({
                "total_mid": summary.total_mid,
                "seeds_without_mid": summary.seeds_without_mid,
                "seeds_largest_at_most_two": summary.seeds_largest_at_most_two,
                "first_moment_bound": summary.first_moment_bound,
            }))
        }
        Command::Branching { l1, l2, event, level, trials, seed } => {
            let event = match event {
                EventArg::Bd => TreeEvent::Binary(level),
                EventArg::Rb => TreeEvent::RobustBinary(level),
            };
            print_json(&branching::estimate_event(l1, l2, event, trials, seed, Sampler::Lazy)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

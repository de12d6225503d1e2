use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use batchdispatch::commands::{self, TableGrids};
use batchdispatch::manifest::{self, RunManifest, OUT_DIR_ENV};
use batchdispatch::verify::{self, SuiteConfig};
use batchdispatch::{format, CliError, Result};
use batchdispatch_core::model::{MidrouteModel, DEFAULT_CAPACITY};
use batchdispatch_core::sim::{MidrouteVariant, SimConfig};
use batchdispatch_core::MarketParams;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Dispatch-threshold model: evaluation, solving, simulation, tables and figures.
///
/// Times are in hours, money in abstract units. Exit codes: 0 success,
/// 1 verification failure, 2 usage or parameter error, 3 I/O error.
#[derive(Parser, Debug)]
#[command(name = "batchdispatch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Profit rate, increment, numerator, wait and feasibility for every threshold (CSV).
    Eval {
        #[command(flatten)]
        market: MarketArgs,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Unconstrained and demand-constrained optimal thresholds (JSON).
    Solve {
        #[command(flatten)]
        market: MarketArgs,
        /// Sweep λ from --lambda up to this value.
        #[arg(long, requires = "sweep_steps")]
        sweep_to: Option<f64>,
        /// Number of evenly spaced sweep points.
        #[arg(long, requires = "sweep_to")]
        sweep_steps: Option<usize>,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Monte Carlo estimates beside their closed forms (JSON).
    Simulate {
        #[command(flatten)]
        market: MarketArgs,
        /// Dispatch threshold.
        #[arg(long)]
        n: u32,
        /// Number of cycles.
        #[arg(long, default_value_t = 100_000)]
        cycles: u64,
        /// Base seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Mid-route admission process.
        #[arg(long, value_enum, default_value_t = VariantArg::AggregateMin)]
        variant: VariantArg,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Condition tables and the Condition M equivalence grid (CSV files).
    Tables {
        /// Thresholds tabulated as table_b1.csv, table_b2.csv, ...
        #[arg(long, value_delimiter = ',', default_values_t = [3u32, 4, 5])]
        thresholds: Vec<u32>,
        /// Arrival-rate axis of the B tables.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        /// Travel-time axis of the B tables.
        #[arg(long, value_delimiter = ',')]
        travel_times: Option<Vec<f64>>,
        /// Thresholds of the equivalence grid.
        #[arg(long, value_delimiter = ',')]
        equivalence_thresholds: Option<Vec<u32>>,
        /// Poisson means of the equivalence grid.
        #[arg(long, value_delimiter = ',')]
        means: Option<Vec<f64>>,
        #[command(flatten)]
        out_dir: OutDirArg,
    },
    /// Profit curve, wait line, tolerance and operative threshold (CSV and SVG).
    Figure2 {
        /// Arrival rate λ.
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// One-way travel time T.
        #[arg(long, default_value_t = 0.33)]
        travel_time: f64,
        /// Passenger waiting tolerance w̄.
        #[arg(long, default_value_t = 0.5)]
        wbar: f64,
        /// Incumbent fare.
        #[arg(long, default_value_t = 1.0)]
        fare: f64,
        /// Operating cost per hour.
        #[arg(long, default_value_t = 0.0)]
        cost: f64,
        #[command(flatten)]
        out_dir: OutDirArg,
    },
    /// Run the property suite and print PASS/FAIL/REPORT per item.
    Verify {
        /// Base seed for random draws and simulations.
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Draws for the sign-equivalence property.
        #[arg(long, default_value_t = 10_000)]
        sign_draws: usize,
        /// Draws for the other random properties.
        #[arg(long, default_value_t = 1_000)]
        draws: usize,
        /// Cycles per simulation spot check.
        #[arg(long, default_value_t = 20_000)]
        sim_cycles: u64,
        /// Worker threads for simulations.
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct MarketArgs {
    /// Arrival rate λ (passengers per hour). Required.
    #[arg(long)]
    lambda: Option<f64>,
    /// One-way travel time T (hours).
    #[arg(long, default_value_t = 0.33)]
    travel_time: f64,
    /// Incumbent fare p_I.
    #[arg(long, default_value_t = 1.0)]
    fare: f64,
    /// Operating cost C per hour.
    #[arg(long, default_value_t = 0.0)]
    cost: f64,
    /// Passenger waiting tolerance w̄ (hours) [default: 0.5].
    #[arg(long, conflicts_with = "p_entrant")]
    wbar: Option<f64>,
    /// Entrant fare p_P; sets w̄ = (p_P − p_I)/c.
    #[arg(long)]
    p_entrant: Option<f64>,
    /// Passenger waiting cost c per hour.
    #[arg(long, default_value_t = 1.0)]
    wait_cost: f64,
    /// Acceptance probability θ for roadside requests.
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Vehicle seats.
    #[arg(long, default_value_t = DEFAULT_CAPACITY)]
    capacity: u32,
    /// How θ enters expected admissions.
    #[arg(long, value_enum, default_value_t = MidrouteArg::Linear)]
    midroute: MidrouteArg,
}

impl MarketArgs {
    fn params(&self) -> Result<MarketParams> {
        let lambda = self
            .lambda
            .ok_or_else(|| CliError::Usage("--lambda is required".into()))?;
        let base = MarketParams::new(lambda, self.travel_time)
            .with_fare(self.fare)
            .with_wait_cost(self.wait_cost)
            .with_operating_cost(self.cost)
            .with_acceptance(self.theta)
            .with_capacity(self.capacity)
            .with_midroute(self.midroute.into());
        let p = match self.p_entrant {
            Some(pp) => base.with_entrant_fare(pp),
            None => base.with_tolerance(self.wbar.unwrap_or(0.5)),
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args, Debug)]
struct OutputArg {
    /// Write to this file (with a manifest sidecar) instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OutDirArg {
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MidrouteArg {
    Linear,
    Thinned,
}

impl From<MidrouteArg> for MidrouteModel {
    fn from(m: MidrouteArg) -> Self {
        match m {
            MidrouteArg::Linear => MidrouteModel::Linear,
            MidrouteArg::Thinned => MidrouteModel::Thinned,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum VariantArg {
    AggregateMin,
    SequentialThinned,
}

impl From<VariantArg> for MidrouteVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::AggregateMin => MidrouteVariant::AggregateMin,
            VariantArg::SequentialThinned => MidrouteVariant::SequentialThinned,
        }
    }
}

fn emit(text: &str, output: &OutputArg, manifest: RunManifest) -> Result<()> {
    match &output.output {
        Some(path) => {
            manifest::write_single(path, text, manifest)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                source: e,
            })?;
        }
    }
    Ok(())
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval { market, output } => {
            let p = market.params()?;
            let text = commands::eval_table(&p)?;
            emit(&text, &output, RunManifest::new("eval").with_params(p))?;
        }
        Command::Solve {
            market,
            sweep_to,
            sweep_steps,
            output,
        } => {
            let p = market.params()?;
            let mut m = RunManifest::new("solve").with_params(p);
            let text = match (sweep_to, sweep_steps) {
                (Some(to), Some(steps)) => {
                    m = m
                        .with_setting("sweep_to", to)
                        .with_setting("sweep_steps", steps);
                    format::json(&commands::solve_sweep(&p, to, steps)?)?
                }
                _ => format::json(&commands::solve(&p)?)?,
            };
            emit(&text, &output, m)?;
        }
        Command::Simulate {
            market,
            n,
            cycles,
            seed,
            variant,
            threads,
            output,
        } => {
            let p = market.params()?;
            let cfg = SimConfig::new(p, n, cycles, seed).with_variant(variant.into());
            let report = commands::simulate(&cfg, threads)?;
            let m = RunManifest::new("simulate")
                .with_params(p)
                .with_seed(seed)
                .with_setting("n", n)
                .with_setting("cycles", cycles)
                .with_setting("variant", format!("{variant:?}"));
            emit(&format::json(&report)?, &output, m)?;
        }
        Command::Tables {
            thresholds,
            lambdas,
            travel_times,
            equivalence_thresholds,
            means,
            out_dir,
        } => {
            let d = TableGrids::default();
            let grids = TableGrids {
                thresholds,
                arrival_rates: lambdas.unwrap_or(d.arrival_rates),
                travel_times: travel_times.unwrap_or(d.travel_times),
                equivalence_thresholds: equivalence_thresholds.unwrap_or(d.equivalence_thresholds),
                means: means.unwrap_or(d.means),
            };
            let files = commands::tables(&grids)?;
            let m = RunManifest::new("tables")
                .with_axis(
                    "thresholds",
                    &grids
                        .thresholds
                        .iter()
                        .map(|&n| f64::from(n))
                        .collect::<Vec<_>>(),
                )
                .with_axis("lambda", &grids.arrival_rates)
                .with_axis("travel_time", &grids.travel_times)
                .with_axis(
                    "equivalence_thresholds",
                    &grids
                        .equivalence_thresholds
                        .iter()
                        .map(|&n| f64::from(n))
                        .collect::<Vec<_>>(),
                )
                .with_axis("mu", &grids.means);
            let dir = manifest::resolve_out_dir(out_dir.out_dir);
            report_written(&manifest::write_bundle(&dir, &files, m)?);
        }
        Command::Figure2 {
            lambda,
            travel_time,
            wbar,
            fare,
            cost,
            out_dir,
        } => {
            let p = MarketParams::new(lambda, travel_time)
                .with_fare(fare)
                .with_tolerance(wbar)
                .with_operating_cost(cost);
            p.validate()?;
            let files = commands::figure2(&p)?;
            let dir = manifest::resolve_out_dir(out_dir.out_dir);
            report_written(&manifest::write_bundle(
                &dir,
                &files,
                RunManifest::new("figure2").with_params(p),
            )?);
        }
        Command::Verify {
            seed,
            sign_draws,
            draws,
            sim_cycles,
            threads,
        } => {
            if sim_cycles == 0 {
                return Err(CliError::Usage("--sim-cycles must be positive".into()));
            }
            let checks = verify::run_suite(&SuiteConfig {
                sign_draws,
                draws,
                sim_cycles,
                seed,
                threads,
            });
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} items, {failed} failed", checks.len());
            return Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

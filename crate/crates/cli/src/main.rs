use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aoi_core::experiments::generators::{generate, TopologyKind, TopologySpec};
use aoi_core::experiments::harness::{
    batch_csv, grid_csv, run_batch, run_sweep, sweep_csv, BatchSpec,
};
use aoi_core::io::{self, network_to_json, read_instance, solution_from_text, solution_to_text};
use aoi_core::mmd::{format_probes, min_max_delay_with, MmdOptions};
use aoi_core::rational::{self, Rational};
use aoi_core::schedule::validate_solution;
use aoi_core::simulate::simulate_aoi;
use aoi_core::solvers::{approx_solve_declared, solve_grid, ExactMmd1, Objective, SolverConfig};
use aoi_core::{Error, Instance, PeriodicSolution};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Periodic multi-path schedules minimizing Age-of-Information.
#[derive(Parser)]
#[command(name = "aoi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Suppress the human summary on standard output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal schedule over every admissible period.
    Solve {
        objective: OptObjective,
        instance: PathBuf,
        /// Write the schedule here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the per-period grid as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        horizon: Horizon,
    },
    /// Unit-period flow lifted to the lowest throughput.
    Approx {
        objective: ApproxObjective,
        instance: PathBuf,
        /// Declared guarantee of the unit-period backend.
        #[arg(long, default_value = "1", value_parser = parse_rational)]
        alpha: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        horizon: Horizon,
    },
    /// Checks a schedule file against an instance and reports its AoI.
    Validate { instance: PathBuf, schedule: PathBuf },
    /// Smallest maximum delay at one period, with the bisection trail.
    MmdAtPeriod {
        instance: PathBuf,
        period: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        horizon: Horizon,
    },
    /// Random network as JSON.
    Gen {
        #[command(flatten)]
        topology: Topology,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal and approximate AoI at every admissible period.
    Sweep {
        instance: PathBuf,
        /// `instance_id` column; defaults to the file stem.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        horizon: Horizon,
    },
    /// Optimal versus approximate AoI over random instances.
    Batch {
        #[command(flatten)]
        topology: Topology,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Batch size as a multiple of the per-slot capacity.
        #[arg(long, default_value_t = 10)]
        factor: i64,
        /// Number of admissible periods per instance.
        #[arg(long, default_value_t = 10)]
        periods: i64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OptObjective {
    Mpa,
    Maa,
    Mmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApproxObjective {
    Mpa,
    Maa,
}

#[derive(Args)]
struct Horizon {
    /// Replace the derived time-expansion horizon.
    #[arg(long)]
    mu_override: Option<i64>,
}

impl Horizon {
    fn get(&self) -> Result<Option<i64>, Error> {
        match self.mu_override {
            Some(h) if h < 1 => Err(Error::InvalidParameter(format!("horizon must be positive, got {h}"))),
            h => Ok(h),
        }
    }

    fn config(&self) -> Result<SolverConfig, Error> {
        Ok(SolverConfig {
            mmd: MmdOptions {
                horizon: self.get()?,
                ..MmdOptions::default()
            },
            ..SolverConfig::default()
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Complete,
    Grid,
    ErdosRenyi,
    WattsStrogatz,
    Copying,
}

#[derive(Args)]
struct Topology {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Node count (complete, erdos-renyi, watts-strogatz, copying).
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Edge count (erdos-renyi).
    #[arg(long, default_value_t = 50)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    rows: usize,
    #[arg(long, default_value_t = 4)]
    cols: usize,
    /// Ring degree (watts-strogatz); odd values are rounded up.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Rewiring probability (watts-strogatz) or fresh-edge probability
    /// (copying).
    #[arg(long, default_value_t = 0.1)]
    p: f64,
}

impl Topology {
    fn kind(&self) -> TopologyKind {
        match self.kind {
            Kind::Complete => TopologyKind::Complete { n: self.n },
            Kind::Grid => TopologyKind::Grid { rows: self.rows, cols: self.cols },
            Kind::ErdosRenyi => TopologyKind::ErdosRenyi { n: self.n, m: self.m },
            Kind::WattsStrogatz => TopologyKind::WattsStrogatz { n: self.n, k: self.k, p: self.p },
            Kind::Copying => TopologyKind::Copying { n: self.n, p: self.p },
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

/// Standard output, unless `--quiet`.
struct Out {
    quiet: bool,
}

impl Out {
    fn line(&self, text: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", text.as_ref());
        }
    }
}

fn aoi_line(period: i64, throughput: &Rational, m: i64, peak: i64, avg: &Rational) -> String {
    format!(
        "T = {period}, R = {}, M = {m}, peak AoI = {peak}, average AoI = {}",
        rational::format(throughput),
        rational::format(avg)
    )
}

fn write_schedule(path: Option<&Path>, inst: &Instance, sol: &PeriodicSolution) -> Result<(), Error> {
    match path {
        Some(p) => io::write(p, &solution_to_text(inst, sol)),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let out = Out { quiet: cli.quiet };
    match cli.command {
        Command::Solve {
            objective,
            instance,
            out: path,
            csv,
            horizon,
        } => {
            let inst = read_instance(&instance)?;
            let grid = solve_grid(&inst, &horizon.config()?)?;
            if let Some(p) = &csv {
                io::write(p, &grid_csv(&grid.rows))?;
            }
            let (objective, label) = match objective {
                OptObjective::Mpa => (Objective::PeakAoi, "R_p"),
                OptObjective::Maa => (Objective::AvgAoi, "R_a"),
                OptObjective::Mmd => (Objective::MaxDelay, "R_m"),
            };
            let best = grid.select(objective)?;
            let rates: Vec<String> = best.optimal_throughputs.iter().map(rational::format).collect();
            out.line(format!("{label} = {}", rates.join(", ")));
            let b = &best.best;
            out.line(aoi_line(b.period, &b.throughput, b.max_delay, b.peak_aoi, &b.avg_aoi));
            write_schedule(path.as_deref(), &inst, &best.solution)
        }
        Command::Approx {
            objective,
            instance,
            alpha,
            out: path,
            horizon,
        } => {
            let inst = read_instance(&instance)?;
            let objective = match objective {
                ApproxObjective::Mpa => Objective::PeakAoi,
                ApproxObjective::Maa => Objective::AvgAoi,
            };
            let backend = ExactMmd1 { horizon: horizon.get()? };
            let ap = approx_solve_declared(&inst, objective, &backend, &alpha)?;
            let r = &ap.report;
            out.line(format!("unit-period maximum delay = {}", ap.mmd1.max_delay));
            out.line(aoi_line(r.period, &r.throughput, r.max_delay, r.peak_aoi, &r.avg_aoi));
            out.line(format!("ratio bound = {}", rational::format(&ap.ratio_bound)));
            write_schedule(path.as_deref(), &inst, &ap.solution)
        }
        Command::Validate { instance, schedule } => {
            let inst = read_instance(&instance)?;
            let sol = solution_from_text(&inst, &io::read(&schedule)?)?;
            let v = validate_solution(&inst, &sol)?;
            if !v.ok {
                for why in &v.violations {
                    out.line(format!("violation: {why}"));
                }
                return Err(Error::Infeasible(format!("{} violation(s)", v.violations.len())));
            }
            let (peak, avg) = simulate_aoi(&sol, v.max_delay);
            out.line("ok");
            out.line(aoi_line(sol.period, &inst.throughput(sol.period), v.max_delay, peak, &avg));
            Ok(())
        }
        Command::MmdAtPeriod {
            instance,
            period,
            out: path,
            horizon,
        } => {
            let inst = read_instance(&instance)?;
            let res = min_max_delay_with(&inst, period, &horizon.config()?.mmd)?
                .ok_or_else(|| Error::Infeasible(format!("no schedule at T = {period}")))?;
            out.line(format!("M = {}", res.max_delay));
            out.line("probes:");
            out.line(format_probes(&res.probes).trim_end());
            out.line(format!("flow programs solved: {}", res.lp_solves));
            write_schedule(path.as_deref(), &inst, &res.solution)
        }
        Command::Gen { topology, seed, out: path } => {
            let net = generate(&TopologySpec::new(topology.kind(), seed))?;
            let text = network_to_json(&net);
            match path {
                Some(p) => io::write(&p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Sweep {
            instance,
            id,
            csv,
            horizon,
        } => {
            let inst = read_instance(&instance)?;
            let id = id.unwrap_or_else(|| {
                instance
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
            let rows = run_sweep(&inst, &id, &horizon.config()?)?;
            let text = sweep_csv(&rows);
            match csv {
                Some(p) => {
                    io::write(&p, &text)?;
                    let ok = rows.iter().filter(|r| r.status() == "ok").count();
                    out.line(format!("{} periods, {ok} solved by both", rows.len()));
                    Ok(())
                }
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Batch {
            topology,
            count,
            seed,
            factor,
            periods,
            csv,
        } => {
            let spec = BatchSpec {
                kind: topology.kind(),
                count,
                seed,
                factor,
                periods,
            };
            let summary = run_batch(&spec, &SolverConfig::default())?;
            let text = batch_csv(&summary);
            match csv {
                Some(p) => {
                    io::write(&p, &text)?;
                    let pct = |r: &Option<Rational>| {
                        r.as_ref()
                            .map(|r| format!("{:.2}%", rational::to_f64(r)))
                            .unwrap_or_else(|| "n/a".into())
                    };
                    out.line(format!("{} instances", summary.rows.len()));
                    out.line(format!("mean peak AoI reduction = {}", pct(&summary.mean_peak_reduction)));
                    out.line(format!("mean average AoI reduction = {}", pct(&summary.mean_avg_reduction)));
                    Ok(())
                }
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("aoi: {}", msg.lines().next().unwrap_or("bad arguments"));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Infeasible(why)) => {
            println!("{why}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("aoi: {e}");
            ExitCode::from(1)
        }
    }
}

//! `phaseshift` — command-line front end for the equal phase-shift search
//! analysis library.
//!
//! Scalar subcommands print a single value; sweep-style subcommands emit CSV
//! or JSON suitable for piping (no banners on stdout). Exit codes: 0 success,
//! 2 usage error, 3 domain error, 4 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use phaseshift::analytics::{self, EpsilonRange, FailureProb, PhaseAngle};
use phaseshift::harness::{self, FigureId, Quantity, SweepMode, SweepSpec};
use phaseshift::simulator;

const EXIT_DOMAIN: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "phaseshift",
    version,
    about = "Closed-form analysis and dense-matrix simulation of equal phase-shift search",
    after_help = "Angles accept a deg/rad suffix (60deg, 1.5rad); bare numbers are radians.\n\
                  Ranges are beta:alpha. PHASESHIFT_THREADS caps sweep parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Failure probability D(theta) of one iteration
    Deviation {
        #[arg(long, value_parser = parse_angle_arg)]
        theta: AngleArg,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        digits: Option<usize>,
    },
    /// D(theta) - eps^3 in factored form
    Gap {
        #[arg(long, value_parser = parse_angle_arg)]
        theta: AngleArg,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        digits: Option<usize>,
    },
    /// The eps threshold 1 - 2/(3 - 2cos theta) for beating the pi/3 iteration
    Threshold {
        #[arg(long, value_parser = parse_angle_arg)]
        theta: AngleArg,
        #[arg(long)]
        digits: Option<usize>,
    },
    /// Classify D(theta) against eps^3 (below-cube, equal-cube, above-cube)
    Classify {
        #[arg(long, value_parser = parse_angle_arg)]
        theta: AngleArg,
        #[arg(long)]
        eps: f64,
    },
    /// The phase shift arccos[1 - 1/(2(1-eps))] that cancels the deviation
    ZeroPoint {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        digits: Option<usize>,
    },
    /// The averaged zero-deviation phase shift for eps uniform on beta:alpha
    AvgZeroPoint {
        #[arg(long, value_parser = parse_range_arg)]
        range: RangeArg,
        #[arg(long)]
        digits: Option<usize>,
    },
    /// The eps threshold above which the averaged phase shift beats eps^3
    Kappa {
        #[arg(long, value_parser = parse_range_arg)]
        range: RangeArg,
        #[arg(long)]
        digits: Option<usize>,
    },
    /// The limiting success ratio (5 - 4cos theta)/3
    Rho {
        #[arg(long, value_parser = parse_angle_arg)]
        theta: AngleArg,
        #[arg(long)]
        digits: Option<usize>,
    },
    /// The success ratio Delta(theta)/Delta(pi/3) in rational form
    Ratio {
        #[arg(long, value_parser = parse_angle_arg)]
        theta: AngleArg,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        digits: Option<usize>,
    },
    /// Failure probabilities along the recursion U_{m+1} = U_m R_s U_m' R_t U_m
    Recurse {
        #[arg(long, value_parser = parse_angle_arg)]
        theta: AngleArg,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Simulate one iteration and compare against the closed form
    Simulate {
        /// Crafted-instance dimension (ignored with --hadamard)
        #[arg(long, default_value_t = 8)]
        dim: usize,
        /// Failure probability of the crafted instance (ignored with --hadamard)
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, value_parser = parse_angle_arg)]
        theta: AngleArg,
        /// Use the n-qubit Hadamard tensor-power instance instead
        #[arg(long)]
        hadamard: Option<usize>,
        /// Target basis index (default: 1, or 2^n - 1 with --hadamard)
        #[arg(long)]
        target: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a (theta, eps) parameter sweep
    Sweep {
        /// JSON sweep specification file (defaults fill missing fields)
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Cross-check records against the simulator at this dimension
        #[arg(long)]
        cross_check: Option<usize>,
        /// Comma-separated quantities (deviation,gap,threshold,success,ratio,rho)
        #[arg(long, value_delimiter = ',', value_parser = parse_quantity)]
        quantities: Option<Vec<Quantity>>,
        /// Override the theta grid with this many even points over [0, pi]
        #[arg(long)]
        theta_points: Option<usize>,
        /// Override the eps grid with this many even points over [0.01, 0.99]
        #[arg(long)]
        eps_points: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Recompute the summary tables and flag each row
    Tables {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Regenerate the data behind one of the figures
    Figures {
        /// dev_vs_theta, gap_surface, zero_locus, or rho_curve
        #[arg(long, value_parser = parse_figure_id)]
        id: FigureId,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the full invariant suite; exit 0 iff every check passes
    Verify,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

/// An angle parsed from the command line, radians by default with an
/// optional deg/rad suffix. Domain validation happens later so that
/// out-of-range values exit 3, not 2.
#[derive(Clone, Copy)]
struct AngleArg {
    value: f64,
    degrees: bool,
}

impl AngleArg {
    fn resolve(self) -> Result<PhaseAngle, phaseshift::Error> {
        if self.degrees {
            PhaseAngle::from_degrees(self.value)
        } else {
            PhaseAngle::from_radians(self.value)
        }
    }
}

fn parse_angle_arg(raw: &str) -> Result<AngleArg, String> {
    let trimmed = raw.trim();
    let (number, degrees) = if let Some(stripped) = trimmed.strip_suffix("deg") {
        (stripped, true)
    } else if let Some(stripped) = trimmed.strip_suffix("rad") {
        (stripped, false)
    } else {
        (trimmed, false)
    };
    number
        .trim()
        .parse::<f64>()
        .map(|value| AngleArg { value, degrees })
        .map_err(|_| format!("'{raw}' is not a number with optional deg/rad suffix"))
}

/// A beta:alpha range, syntax-checked at parse time and domain-checked later.
#[derive(Clone, Copy)]
struct RangeArg {
    beta: f64,
    alpha: f64,
}

impl RangeArg {
    fn resolve(self) -> Result<EpsilonRange, phaseshift::Error> {
        EpsilonRange::from_values(self.beta, self.alpha)
    }
}

fn parse_quantity(raw: &str) -> Result<Quantity, String> {
    raw.trim().parse().map_err(|e| format!("{e}"))
}

fn parse_figure_id(raw: &str) -> Result<FigureId, String> {
    raw.trim().parse().map_err(|e| format!("{e}"))
}

fn parse_range_arg(raw: &str) -> Result<RangeArg, String> {
    let (beta, alpha) = raw
        .split_once(':')
        .ok_or_else(|| format!("'{raw}' is not of the form beta:alpha"))?;
    let beta = beta
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("'{beta}' is not a number"))?;
    let alpha = alpha
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("'{alpha}' is not a number"))?;
    Ok(RangeArg { beta, alpha })
}

fn main() -> ExitCode {
    configure_thread_pool();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}

/// Honors PHASESHIFT_THREADS as a cap on sweep parallelism; 0 or unset
/// leaves the rayon default.
fn configure_thread_pool() {
    if let Ok(raw) = std::env::var("PHASESHIFT_THREADS") {
        if let Ok(threads) = raw.trim().parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode, phaseshift::Error> {
    match command {
        Command::Deviation { theta, eps, digits } => {
            let value =
                analytics::deviation(theta.resolve()?, FailureProb::new(eps)?).value();
            println!("{}", format_scalar(value, digits));
        }
        Command::Gap { theta, eps, digits } => {
            let value = analytics::deviation_gap(theta.resolve()?, FailureProb::new(eps)?);
            println!("{}", format_scalar(value, digits));
        }
        Command::Threshold { theta, digits } => {
            let value = analytics::epsilon_threshold(theta.resolve()?);
            println!("{}", format_scalar(value, digits));
        }
        Command::Classify { theta, eps } => {
            let tag = analytics::classify(theta.resolve()?, FailureProb::new(eps)?)?;
            println!("{tag}");
        }
        Command::ZeroPoint { eps, digits } => {
            let value = analytics::zero_deviation_point(FailureProb::new(eps)?)?;
            println!("{}", format_scalar(value.radians(), digits));
        }
        Command::AvgZeroPoint { range, digits } => {
            let value = analytics::average_zero_point(range.resolve()?);
            println!("{}", format_scalar(value.radians(), digits));
        }
        Command::Kappa { range, digits } => {
            let value = analytics::kappa(range.resolve()?);
            println!("{}", format_scalar(value, digits));
        }
        Command::Rho { theta, digits } => {
            let value = analytics::rho(theta.resolve()?);
            println!("{}", format_scalar(value, digits));
        }
        Command::Ratio { theta, eps, digits } => {
            let value = analytics::success_ratio(theta.resolve()?, FailureProb::new(eps)?);
            println!("{}", format_scalar(value, digits));
        }
        Command::Recurse {
            theta,
            eps,
            depth,
            format,
            output,
        } => {
            let trace =
                analytics::recurrence_trace(theta.resolve()?, FailureProb::new(eps)?, depth)?;
            emit(&render_trace(&trace, format), output.as_deref());
        }
        Command::Simulate {
            dim,
            eps,
            theta,
            hadamard,
            target,
            format,
            output,
        } => {
            let theta = theta.resolve()?;
            let instance = match hadamard {
                Some(n_qubits) => {
                    let t = target.unwrap_or((1usize << n_qubits.min(20)) - 1);
                    simulator::hadamard_instance(n_qubits, t)?
                }
                None => {
                    let t = target.unwrap_or(1);
                    simulator::crafted_instance(dim, FailureProb::new(eps)?, 0, t)?
                }
            };
            let report = simulate_report(&instance, theta)?;
            emit(&render_simulation(&report, format), output.as_deref());
        }
        Command::Sweep {
            spec,
            cross_check,
            quantities,
            theta_points,
            eps_points,
            format,
            output,
        } => {
            let spec = build_sweep_spec(
                spec.as_deref(),
                cross_check,
                quantities,
                theta_points,
                eps_points,
            )?;
            let result = harness::run_sweep(&spec);
            let rendered = match format {
                Format::Json => result.to_json(),
                _ => result.to_csv(),
            };
            emit(&rendered, output.as_deref());
        }
        Command::Tables { format, output } => {
            let report = harness::reproduce_tables();
            let rendered = match format {
                Format::Json => {
                    serde_json::to_string_pretty(&report).expect("report serializes")
                }
                _ => report.to_string(),
            };
            emit(&rendered, output.as_deref());
            if !report.all_passed {
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
        Command::Figures { id, format, output } => {
            let result = harness::figure_data(id);
            let rendered = match format {
                Format::Json => result.to_json(),
                _ => result.to_csv(),
            };
            emit(&rendered, output.as_deref());
        }
        Command::Verify => {
            let report = phaseshift::verify::run_all();
            print!("{report}");
            if report.all_passed() {
                println!("all checks passed");
            } else {
                println!("{} of {} checks failed", report.failures(), report.checks.len());
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Shortest round-trip representation by default; explicit significant
/// digits on request.
fn format_scalar(value: f64, digits: Option<usize>) -> String {
    match digits {
        None => harness::format_f64(value),
        Some(n) => {
            let n = n.clamp(1, 17);
            let formatted = format!("{value:.*e}", n - 1);
            // render plain decimals for moderate exponents
            let parsed: f64 = formatted.parse().expect("formatted float parses");
            let exponent = if value == 0.0 {
                0
            } else {
                value.abs().log10().floor() as i32
            };
            if (-4..16).contains(&exponent) {
                let decimals = (n as i32 - 1 - exponent).max(0) as usize;
                format!("{parsed:.decimals$}")
            } else {
                formatted
            }
        }
    }
}

fn render_trace(trace: &analytics::RecurrenceTrace, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("m,eps\n");
            for (m, eps) in trace.epsilons().iter().enumerate() {
                out.push_str(&format!("{m},{}\n", harness::format_f64(eps.value())));
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = trace
                .epsilons()
                .iter()
                .enumerate()
                .map(|(m, eps)| {
                    serde_json::json!({
                        "m": m,
                        "eps": eps.value(),
                        "underflowed": trace.first_underflow().is_some_and(|k| m >= k),
                    })
                })
                .collect();
            serde_json::to_string(&rows).expect("trace serializes")
        }
        Format::Text => {
            let mut out = String::new();
            for (m, eps) in trace.epsilons().iter().enumerate() {
                out.push_str(&format!(
                    "m = {m:<3} eps = {}\n",
                    harness::format_f64(eps.value())
                ));
            }
            if let Some(level) = trace.first_underflow() {
                out.push_str(&format!(
                    "values from level {level} underflowed and were flushed to 0\n"
                ));
            }
            out
        }
    }
}

struct SimulationReport {
    theta_rad: f64,
    eps: f64,
    sim_failure: f64,
    analytic_deviation: f64,
    abs_discrepancy: f64,
}

fn simulate_report(
    instance: &simulator::SearchInstance,
    theta: PhaseAngle,
) -> Result<SimulationReport, phaseshift::Error> {
    let final_state = simulator::one_iteration(instance, theta);
    let sim_failure =
        simulator::measured_failure(&final_state, instance.target_index())?.value();
    let eps = instance.failure_probability();
    let analytic_deviation = analytics::deviation(theta, FailureProb::new(eps)?).value();
    Ok(SimulationReport {
        theta_rad: theta.radians(),
        eps,
        sim_failure,
        analytic_deviation,
        abs_discrepancy: (analytic_deviation - sim_failure).abs(),
    })
}

fn render_simulation(report: &SimulationReport, format: Format) -> String {
    let fmt = harness::format_f64;
    match format {
        Format::Csv => format!(
            "theta_rad,eps,sim_failure,analytic_deviation,abs_discrepancy\n{},{},{},{},{}\n",
            fmt(report.theta_rad),
            fmt(report.eps),
            fmt(report.sim_failure),
            fmt(report.analytic_deviation),
            fmt(report.abs_discrepancy)
        ),
        Format::Json => serde_json::json!({
            "theta_rad": report.theta_rad,
            "eps": report.eps,
            "sim_failure": report.sim_failure,
            "analytic_deviation": report.analytic_deviation,
            "abs_discrepancy": report.abs_discrepancy,
        })
        .to_string(),
        Format::Text => format!(
            "theta_rad           = {}\n\
             eps                 = {}\n\
             sim_failure         = {}\n\
             analytic_deviation  = {}\n\
             abs_discrepancy     = {}\n",
            fmt(report.theta_rad),
            fmt(report.eps),
            fmt(report.sim_failure),
            fmt(report.analytic_deviation),
            fmt(report.abs_discrepancy)
        ),
    }
}

/// JSON sweep-spec file: every field optional, flags override the file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSpecFile {
    theta_grid: Option<Vec<f64>>,
    theta_points: Option<usize>,
    eps_grid: Option<Vec<f64>>,
    eps_points: Option<usize>,
    cross_check_dim: Option<usize>,
    quantities: Option<Vec<String>>,
}

fn build_sweep_spec(
    path: Option<&std::path::Path>,
    cross_check: Option<usize>,
    quantities: Option<Vec<Quantity>>,
    theta_points: Option<usize>,
    eps_points: Option<usize>,
) -> Result<SweepSpec, phaseshift::Error> {
    let file: SweepSpecFile = match path {
        Some(path) => {
            let raw = std::fs::read_to_string(path).map_err(|_| {
                phaseshift::Error::Construction("could not read the sweep spec file")
            })?;
            serde_json::from_str(&raw).map_err(|_| {
                phaseshift::Error::Construction("the sweep spec file is not valid JSON")
            })?
        }
        None => SweepSpecFile::default(),
    };

    let theta_grid = match (&file.theta_grid, theta_points.or(file.theta_points)) {
        (Some(values), _) => values
            .iter()
            .map(|&r| PhaseAngle::from_radians(r))
            .collect::<Result<Vec<_>, _>>()?,
        (None, Some(points)) => {
            if points < 2 {
                return Err(phaseshift::Error::Construction(
                    "theta_points must be at least 2",
                ));
            }
            harness::theta_grid(points)
        }
        (None, None) => SweepSpec::default_theta_grid(),
    };
    let eps_grid = match (&file.eps_grid, eps_points.or(file.eps_points)) {
        (Some(values), _) => values
            .iter()
            .map(|&e| FailureProb::new(e))
            .collect::<Result<Vec<_>, _>>()?,
        (None, Some(points)) => harness::eps_grid(0.01, 0.99, points)?,
        (None, None) => SweepSpec::default_eps_grid(),
    };
    let mode = match cross_check.or(file.cross_check_dim) {
        Some(dim) => SweepMode::CrossChecked { dim },
        None => SweepMode::AnalyticOnly,
    };
    let quantity_list: Vec<Quantity> = match (quantities, &file.quantities) {
        (Some(flags), _) => flags,
        (None, Some(names)) => names
            .iter()
            .map(|name| name.trim().parse())
            .collect::<Result<Vec<_>, _>>()?,
        (None, None) => vec![Quantity::Deviation],
    };
    SweepSpec::new(theta_grid, eps_grid, mode, &quantity_list)
}

fn emit(content: &str, output: Option<&std::path::Path>) {
    match output {
        Some(path) => {
            if let Err(error) = std::fs::write(path, content) {
                eprintln!("error: could not write {}: {error}", path.display());
                std::process::exit(i32::from(EXIT_DOMAIN));
            }
        }
        None => print!("{content}"),
    }
}

//! `pwasym`: batch front-end for symbolic abstraction and controller
//! synthesis of discrete-time piecewise-affine systems.
//!
//! Pipeline stages communicate through files only: `abstract` writes a
//! refinement report, `synthesize` writes a controller plus report,
//! `simulate` writes a closed-loop trace, `render` draws a level as SVG.
//! Exit codes: 0 success, 2 parse error, 3 model validity error, 4 spec
//! misalignment, 5 runtime error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pwasym::abstraction::{metrics, refinement_sequence, MetricsReport, SymbolicSystem};
use pwasym::pwa::PWASystem;
use pwasym::scalar::{one, parse_scalar, zero, Scalar};
use pwasym::synthesis::{check_enforcement, controller_bound, simulate_closed_loop, synthesize};

use pwasym_cli::error::CliError;
use pwasym_cli::formats;
use pwasym_cli::render::{render_svg, CellPaint};
use pwasym_cli::write_atomic;

#[derive(Parser)]
#[command(
    name = "pwasym",
    version,
    about = "Symbolic abstractions and controllers for piecewise-affine systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the abstraction refinement sequence and write a report.
    Abstract {
        /// System description file
        system: PathBuf,
        /// Contraction rate in (0, 1), e.g. 1/2
        #[arg(long)]
        lambda: String,
        /// Maximum refinement level
        #[arg(long = "max-level", default_value_t = 4)]
        max_level: u32,
        /// Stop once granularity reaches this target
        #[arg(long)]
        epsilon: Option<String>,
        /// Output report path
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthesize a symbolic controller against an automaton spec.
    Synthesize {
        system: PathBuf,
        /// Specification automaton file
        spec: PathBuf,
        #[arg(long)]
        lambda: String,
        #[arg(long = "max-level", default_value_t = 2)]
        max_level: u32,
        /// Output controller path
        #[arg(long = "out-controller")]
        out_controller: PathBuf,
        /// Output report path
        #[arg(long = "out-report")]
        out_report: PathBuf,
        /// Enforcement trials to run after synthesis (0 = skip)
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[arg(long, default_value_t = 50)]
        horizon: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the closed loop from an initial state and write the trace.
    Simulate {
        system: PathBuf,
        /// Controller file written by `synthesize`
        controller: PathBuf,
        /// Initial state, comma-separated exact coordinates
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 50)]
        horizon: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output trace path
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw the cells of one refinement level as an SVG document.
    Render {
        system: PathBuf,
        /// A report or controller file
        input: PathBuf,
        /// Level to draw
        #[arg(long)]
        level: u32,
        /// Output SVG path
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Abstract {
            system,
            lambda,
            max_level,
            epsilon,
            out,
        } => cmd_abstract(&system, &lambda, max_level, epsilon.as_deref(), &out),
        Command::Synthesize {
            system,
            spec,
            lambda,
            max_level,
            out_controller,
            out_report,
            trials,
            horizon,
            seed,
        } => cmd_synthesize(
            &system,
            &spec,
            &lambda,
            max_level,
            &out_controller,
            &out_report,
            trials,
            horizon,
            seed,
        ),
        Command::Simulate {
            system,
            controller,
            x0,
            horizon,
            seed,
            out,
        } => cmd_simulate(&system, &controller, &x0, horizon, seed, &out),
        Command::Render {
            system,
            input,
            level,
            out,
        } => cmd_render(&system, &input, level, &out),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<PWASystem, CliError> {
    formats::parse_system(&read_file(path)?)
}

fn parse_lambda(text: &str) -> Result<Scalar, CliError> {
    let lambda = parse_scalar(text).map_err(CliError::Parse)?;
    if lambda <= zero() || lambda >= one() {
        return Err(CliError::Parse(
            "lambda must lie strictly between 0 and 1".into(),
        ));
    }
    Ok(lambda)
}

fn cmd_abstract(
    system: &Path,
    lambda: &str,
    max_level: u32,
    epsilon: Option<&str>,
    out: &Path,
) -> Result<(), CliError> {
    let sys = load_system(system)?;
    let lambda = parse_lambda(lambda)?;
    let epsilon = epsilon
        .map(|e| parse_scalar(e).map_err(CliError::Parse))
        .transpose()?;
    let levels = refinement_sequence(&sys, lambda.clone(), max_level, epsilon.as_ref())?;
    let reports: Vec<MetricsReport> = levels.iter().map(|(_, r)| r.clone()).collect();
    log::info!(
        "abstraction finished at level {} with {} states",
        reports.last().unwrap().level,
        reports.last().unwrap().state_count
    );
    let text = formats::serialize_report(&formats::ReportData {
        lambda: &lambda,
        max_level,
        epsilon: epsilon.as_ref(),
        levels: &reports,
        synthesis: None,
    });
    write_atomic(out, &text)
}

#[allow(clippy::too_many_arguments)]
fn cmd_synthesize(
    system: &Path,
    spec: &Path,
    lambda: &str,
    max_level: u32,
    out_controller: &Path,
    out_report: &Path,
    trials: u64,
    horizon: u32,
    seed: u64,
) -> Result<(), CliError> {
    let sys = load_system(system)?;
    let spec = formats::parse_spec(&read_file(spec)?, sys.modes().len())?;
    let lambda = parse_lambda(lambda)?;
    let levels = refinement_sequence(&sys, lambda.clone(), max_level, None)?;
    let reports: Vec<MetricsReport> = levels.iter().map(|(_, r)| r.clone()).collect();
    let a = &levels.last().unwrap().0;
    let strategy = synthesize(&sys, a, &spec);
    let bound = controller_bound(a);
    log::info!(
        "synthesized assignments for {} of {} states",
        strategy.controlled_count(),
        a.states().len()
    );
    let verdict = (trials > 0)
        .then(|| check_enforcement(&sys, a, &strategy, &spec, trials, horizon, seed));
    let report_text = formats::serialize_report(&formats::ReportData {
        lambda: &lambda,
        max_level,
        epsilon: None,
        levels: &reports,
        synthesis: Some(formats::SynthesisRecord {
            level: a.level(),
            controlled_states: strategy.controlled_count(),
            controller_bound: &bound,
            enforcement: verdict.as_ref().map(|v| (v, horizon, seed)),
        }),
    });
    let controller_text = formats::serialize_controller(&sys, a, &strategy, &spec, &lambda);
    write_atomic(out_controller, &controller_text)?;
    write_atomic(out_report, &report_text)
}

fn cmd_simulate(
    system: &Path,
    controller: &Path,
    x0: &str,
    horizon: u32,
    seed: u64,
    out: &Path,
) -> Result<(), CliError> {
    let sys = load_system(system)?;
    let file = formats::parse_controller(&read_file(controller)?)?;
    let (a, strategy, spec) = file.instantiate(&sys)?;
    let x0 = formats::parse_point(x0, sys.state_dim())?;
    let run = simulate_closed_loop(&sys, &a, &strategy, &spec, &x0, horizon, seed)?;
    log::info!(
        "simulated {} steps (truncation: {:?})",
        run.trajectory.inputs.len(),
        run.truncation
    );
    write_atomic(out, &formats::serialize_trace(&run, &spec, &x0, horizon, seed))
}

fn cmd_render(system: &Path, input: &Path, level: u32, out: &Path) -> Result<(), CliError> {
    let sys = load_system(system)?;
    if sys.state_dim() != 2 {
        return Err(CliError::Runtime(format!(
            "rendering supports dimension 2 only, system has dimension {}",
            sys.state_dim()
        )));
    }
    let text = read_file(input)?;
    let cells: Vec<(pwasym::Polytope, CellPaint)> = match formats::sniff_tag(&text)?.as_str() {
        formats::REPORT_TAG => {
            let lambda = formats::parse_report_lambda(&text)?;
            let levels = refinement_sequence(&sys, lambda, level, None)?;
            let a: &SymbolicSystem = &levels.last().unwrap().0;
            let _ = metrics(a);
            a.states()
                .iter()
                .map(|s| {
                    let paint = if s.spurious {
                        CellPaint::Spurious
                    } else {
                        CellPaint::Plain
                    };
                    (s.cell.clone(), paint)
                })
                .collect()
        }
        formats::CONTROLLER_TAG => {
            let file = formats::parse_controller(&text)?;
            if file.level != level {
                return Err(CliError::Runtime(format!(
                    "controller was synthesized at level {}, not {level}",
                    file.level
                )));
            }
            let (a, strategy, _) = file.instantiate(&sys)?;
            a.states()
                .iter()
                .map(|s| {
                    let paint = if strategy.assignment(s.id).is_some() {
                        CellPaint::Controlled
                    } else {
                        CellPaint::Uncontrolled
                    };
                    (s.cell.clone(), paint)
                })
                .collect()
        }
        other => {
            return Err(CliError::Parse(format!(
                "expected a report or controller file, found tag `{other}`"
            )))
        }
    };
    write_atomic(out, &render_svg(sys.region(), &cells)?)
}

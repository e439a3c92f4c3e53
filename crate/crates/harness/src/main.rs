use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use preinvex_core::certify::{check_condition_c, check_invex_set, check_preinvex, PreinvexTarget};
use preinvex_core::sharpness::best_constant_estimate;
use preinvex_core::{registry, BoundCase, BoundId, BoundParams, InvexSegment, SamplingPlan};
use preinvex_harness::report::{to_csv, to_json};
use preinvex_harness::runner::run_experiment_seeded;
use preinvex_harness::suite::{acceptance_checks, suite_config, DEFAULT_SEED};
use preinvex_harness::{ExperimentConfig, HarnessError, OutputFormat, RunReport};
use serde_json::json;

#[derive(Parser)]
#[command(name = "preinvex", version, about = "Evaluate and verify Ostrowski-type bounds for preinvex derivatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Reserved; the pipeline is deterministic. Seeds the random pairs of
    /// the subadditivity check.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CaseArgs {
    #[arg(long, default_value = "trivial")]
    eta: String,
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Certify invexity and condition C of an η-map, and optionally
    /// preinvexity of |f'|^q on a segment
    Certify {
        #[arg(long, default_value = "trivial")]
        eta: String,
        #[arg(long)]
        function: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "function")]
        a: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "function")]
        b: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
    },
    /// Evaluate one bound at one point
    Bound {
        #[arg(long)]
        function: String,
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        bound: BoundId,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        m: Option<f64>,
        /// Certify condition C before evaluating
        #[arg(long)]
        condition_c: bool,
    },
    /// Estimate the best constant of the preinvex bound over a family
    Sharpness {
        #[arg(long, value_delimiter = ',', default_values_t = ["identity".to_string(), "square".to_string(), "cube".to_string()])]
        family: Vec<String>,
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value_t = 129)]
        x_points: usize,
    },
    /// Run an experiment config or a built-in suite
    Run {
        #[arg(long)]
        suite: Option<String>,
        /// Skip the acceptance checks of a built-in suite
        #[arg(long)]
        no_checks: bool,
    },
}

fn write_output(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn render(report: &RunReport, format: OutputFormat) -> anyhow::Result<String> {
    Ok(match format {
        OutputFormat::Csv => to_csv(&report.rows)?,
        OutputFormat::Json => to_json(report)?,
    })
}

/// Exit codes: 0 clean, 2 any violated inequality, 1 config or I/O error.
fn run(cli: Cli) -> anyhow::Result<u8> {
    let seed = cli.seed;
    match cli.command {
        Command::Certify { eta, function, a, b, q } => {
            let map = registry::eta_map(&eta)?;
            let plan = SamplingPlan::default();
            let mut value = json!({
                "eta": eta,
                "invex_set": check_invex_set(&map, &plan)?,
                "condition_c": check_condition_c(&map, &plan)?,
            });
            if let Some(label) = function {
                let f = registry::function(&label)?;
                let (Some(a), Some(b)) = (a, b) else { bail!("--function needs --a and --b") };
                let seg = InvexSegment::new(&map, a, b)?;
                let target = if q == 1.0 { PreinvexTarget::AbsDerivative(&f) } else { PreinvexTarget::AbsDerivativePow(&f, q) };
                value["derivative_preinvex"] = json!({
                    "function": label, "a": a, "b": b, "q": q,
                    "report": check_preinvex(target, &map, &seg, &plan)?,
                });
            }
            write_output(&serde_json::to_string_pretty(&value)?, cli.out.as_ref())?;
            Ok(0)
        }
        Command::Bound { function, case, bound, x, q, m, condition_c } => {
            let f = registry::function(&function)?;
            let map = registry::eta_map(&case.eta)?;
            let mut bc = BoundCase::from_endpoints(&f, &map, case.a, case.b)?;
            if condition_c || bound.requires_condition_c() {
                bc = bc.certify_condition_c()?;
            }
            let report = bc.evaluate(bound, x, &BoundParams { q, m })?;
            write_output(&serde_json::to_string_pretty(&report)?, cli.out.as_ref())?;
            Ok(if report.holds { 0 } else { 2 })
        }
        Command::Sharpness { family, case, x_points } => {
            let map = registry::eta_map(&case.eta)?;
            let seg = InvexSegment::new(&map, case.a, case.b)?;
            let fam = family.iter().map(|l| registry::function(l)).collect::<Result<Vec<_>, _>>()?;
            let estimate = best_constant_estimate(&map, &seg, &fam, x_points)?;
            write_output(&serde_json::to_string_pretty(&estimate)?, cli.out.as_ref())?;
            Ok(0)
        }
        Command::Run { suite, no_checks } => {
            let (cfg, builtin) = match (&suite, &cli.config) {
                (Some(name), None) => {
                    (suite_config(name).ok_or_else(|| HarnessError::Config(format!("unknown suite `{name}`")))?, true)
                }
                (None, Some(path)) => (ExperimentConfig::load(path)?, false),
                (Some(_), Some(_)) => bail!(HarnessError::Config("give either --suite or --config, not both".into())),
                (None, None) => bail!(HarnessError::Config("run needs --suite or --config".into())),
            };
            let report = run_experiment_seeded(&cfg, seed)?;
            let (out, format) = match (&cli.out, &cfg.output) {
                (Some(p), _) => (Some(p.clone()), cli.format.unwrap_or_default()),
                (None, Some(o)) => (Some(o.path.clone()), cli.format.unwrap_or(o.format)),
                (None, None) => (None, cli.format.unwrap_or_default()),
            };
            write_output(&render(&report, format)?, out.as_ref())?;
            let s = &report.summary;
            eprintln!(
                "{} rows: {} hold, {} violated, {} skipped; {} invalid cases",
                s.rows, s.holds, s.violations, s.skipped, s.invalid_cases
            );
            if builtin && !no_checks {
                for c in acceptance_checks(seed.unwrap_or(DEFAULT_SEED)) {
                    eprintln!("{c}");
                }
            }
            Ok(if report.has_violations() { 2 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

//! Command-line front end: run a scenario, print its derived parameters,
//! or run the verification battery.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use pursuit_core::evader::PolicyKind;
use pursuit_core::harness;
use pursuit_core::scenario::Scenario;

#[derive(Parser)]
#[command(
    name = "pursuit",
    about = "Planar pursuit games with per-coordinate energy budgets: \
             simulate the constructive sequential strategy and certify its \
             capture guarantee",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and report the outcome.
    Run {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Override the time step.
        #[arg(long)]
        dt: Option<f64>,
        /// Write the step trace as newline-delimited JSON.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
        /// Write the step trace as CSV.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Write the capture report as JSON.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Run the randomized verification battery.
    Verify {
        /// Number of sampled scenarios (the pinned ones are always added).
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Battery seed.
        #[arg(long, default_value_t = 20240808)]
        seed: u64,
        /// Comma-separated policy names (default: all).
        #[arg(long, value_delimiter = ',')]
        policies: Vec<String>,
        /// Directory for failing-scenario repro files.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Print the derived parameters of a scenario without simulating.
    Params {
        /// Scenario JSON file.
        scenario: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run {
            scenario,
            dt,
            trace,
            csv,
            report,
        } => cmd_run(scenario, dt, trace, csv, report),
        Command::Verify {
            n,
            seed,
            policies,
            out,
        } => cmd_verify(n, seed, policies, out),
        Command::Params { scenario } => cmd_params(scenario),
    }
}

fn cmd_run(
    path: PathBuf,
    dt: Option<f64>,
    trace_path: Option<PathBuf>,
    csv_path: Option<PathBuf>,
    report_path: Option<PathBuf>,
) -> Result<ExitCode> {
    let mut scenario = Scenario::<f64>::load(&path)
        .with_context(|| format!("loading scenario {}", path.display()))?;
    if let Some(dt) = dt {
        scenario.dt = Some(dt);
    }
    let prepared = scenario.prepare().context("validating scenario")?;
    let mut policy = scenario.policy();
    let (trace, report) =
        pursuit_core::engine::run(&prepared, &mut policy).context("running simulation")?;

    if let Some(p) = trace_path {
        trace.write_ndjson(BufWriter::new(File::create(&p)?))?;
        eprintln!("trace written to {}", p.display());
    }
    if let Some(p) = csv_path {
        trace.write_csv(BufWriter::new(File::create(&p)?))?;
        eprintln!("csv written to {}", p.display());
    }
    if let Some(p) = report_path {
        report.write_json(BufWriter::new(File::create(&p)?))?;
        eprintln!("report written to {}", p.display());
    }

    if report.captured {
        println!(
            "captured: pursuer {} at t = {:.6} (bound {:.6}, {} steps)",
            report.capturing_pursuer.unwrap(),
            report.capture_time.unwrap(),
            report.t_bound + report.derived.dt,
            trace.steps.len()
        );
        Ok(ExitCode::SUCCESS)
    } else {
        println!(
            "no capture by t = {:.6}{}",
            report.t_bound + report.derived.dt,
            if report.guarantee_violated {
                " — GUARANTEE VIOLATED"
            } else {
                " (no guarantee was asserted for this run)"
            }
        );
        Ok(ExitCode::from(2))
    }
}

fn cmd_verify(
    n: usize,
    seed: u64,
    policy_names: Vec<String>,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let policies = if policy_names.is_empty() {
        harness::default_policies()
    } else {
        policy_names
            .iter()
            .map(|name| {
                PolicyKind::by_name(name)
                    .ok_or_else(|| anyhow::anyhow!("unknown policy '{name}'"))
            })
            .collect::<Result<Vec<_>>>()?
    };

    let summary = harness::check_capture_guarantee(n, seed, &policies);
    println!(
        "scenarios: {} ({n} sampled + pinned), runs: {}, captures: {}",
        summary.scenarios, summary.runs, summary.captures
    );
    println!(
        "worst capture-time slack against the bound: {:.6}",
        summary.worst_slack
    );

    if summary.failures.is_empty() {
        println!("all runs captured within the bound; every invariant held");
        return Ok(ExitCode::SUCCESS);
    }

    println!("{} failing runs:", summary.failures.len());
    let dir = out.unwrap_or_else(|| PathBuf::from("verify-failures"));
    std::fs::create_dir_all(&dir)?;
    for (k, failure) in summary.failures.iter().enumerate() {
        let file = dir.join(format!("fail-{k:03}-{}.json", failure.policy.name()));
        failure.scenario.save(&file)?;
        println!(
            "  [{}] {} -> {}",
            failure.policy.name(),
            failure.problems.join("; "),
            file.display()
        );
    }
    Ok(ExitCode::from(2))
}

fn cmd_params(path: PathBuf) -> Result<ExitCode> {
    let scenario = Scenario::<f64>::load(&path)
        .with_context(|| format!("loading scenario {}", path.display()))?;
    let prepared = scenario.prepare().context("validating scenario")?;
    let json = serde_json::to_string_pretty(&prepared.derived)?;
    println!("{json}");
    Ok(ExitCode::SUCCESS)
}

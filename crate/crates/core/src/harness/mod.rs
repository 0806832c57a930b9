//! Property-based certification of the capture guarantee.
//!
//! The battery samples scenarios whose budgets satisfy the sufficiency
//! condition with margin, runs each against the whole adversary battery,
//! and re-asserts every invariant post-hoc on the recorded trace: capture
//! within the bound, admissibility of every ledger, the pre-alignment
//! contract, and the window pigeonhole. Any failure ships with a repro
//! scenario, reduced by the shrinker while it keeps failing.

pub mod sampler;
pub mod shrink;

use crate::config::Prepared;
use crate::engine;
use crate::evader::{splitter_plan, PolicyKind};
use crate::ledger::ENERGY_SLACK_REL;
use crate::scenario::Scenario;
use crate::strategy::WindowOutcome;
use crate::trace::{CaptureReport, SimulationTrace};

/// The shipped adversaries, in battery order.
pub fn default_policies() -> Vec<PolicyKind<f64>> {
    vec![
        PolicyKind::Idle,
        PolicyKind::RandomAdmissible,
        PolicyKind::GreedyFlee,
        PolicyKind::WindowSplitter {
            overdraw_fraction: 0.05,
        },
        PolicyKind::BoundaryHugger,
    ]
}

/// Check a completed run against everything the theory promises. Returns
/// human-readable problem descriptions; empty means the run is clean.
pub fn verify_run(
    prepared: &Prepared<f64>,
    policy: &PolicyKind<f64>,
    trace: &SimulationTrace<f64>,
    report: &CaptureReport<f64>,
) -> Vec<String> {
    let mut problems = Vec::new();
    let derived = &prepared.derived;

    if derived.hypothesis_holds {
        if !report.captured {
            problems.push("no capture although the sufficiency condition held".into());
        } else {
            let t_cap = report.capture_time.unwrap();
            if t_cap > derived.t_bound + derived.dt {
                problems.push(format!(
                    "capture at {t_cap} exceeds bound {} + dt {}",
                    derived.t_bound, derived.dt
                ));
            }
        }
    }

    // Admissibility of every ledger.
    for (i, ledger) in report
        .pursuer_ledgers
        .iter()
        .chain(std::iter::once(&report.evader_ledger))
        .enumerate()
    {
        for axis in 0..2 {
            let cap = ledger.budget_sq[axis] * (1.0 + ENERGY_SLACK_REL);
            if ledger.consumed[axis] > cap {
                problems.push(format!(
                    "ledger overdraft: player {i} axis {axis}: {} > {}",
                    ledger.consumed[axis], ledger.budget_sq[axis]
                ));
            }
        }
    }

    check_prealign(prepared, trace, &mut problems);
    check_pigeonhole(report, &mut problems);
    if let PolicyKind::WindowSplitter { overdraw_fraction } = policy {
        check_splitter(prepared, report, *overdraw_fraction, &mut problems);
    }
    check_trace(prepared, trace, report, &mut problems);
    check_idle_projections(policy, report, &mut problems);
    problems
}

/// Pre-alignment contract: at t_pre every pursuer sits on the diametral
/// axis having spent at most a quarter of its vertical budget.
pub fn check_prealign(
    prepared: &Prepared<f64>,
    trace: &SimulationTrace<f64>,
    problems: &mut Vec<String>,
) {
    let derived = &prepared.derived;
    if derived.t_pre == 0.0 {
        return;
    }
    let scale = prepared
        .pursuer_start
        .iter()
        .map(|p| p.y.abs())
        .fold(0.0, f64::max);
    let Some(row) = trace
        .steps
        .iter()
        .find(|s| (s.t - derived.t_pre).abs() <= 1e-9 * derived.t_pre.max(1.0))
    else {
        problems.push("no trace row at the pre-alignment end".into());
        return;
    };
    for (i, p) in row.pursuers.iter().enumerate() {
        if p.position.y.abs() > 1e-9 * scale.max(1e-300) {
            problems.push(format!(
                "pursuer {} off-axis after pre-alignment: η = {}",
                i + 1,
                p.position.y
            ));
        }
        let quarter = prepared.pursuer_budgets[i][1] * 0.25;
        if p.energy[1] > quarter * (1.0 + ENERGY_SLACK_REL) {
            problems.push(format!(
                "pursuer {} pre-alignment overspend: {} > {}",
                i + 1,
                p.energy[1],
                quarter
            ));
        }
    }
}

/// The pigeonhole: an admissible evader cannot overdraw every window, so
/// among reached windows one is compliant — unless capture ended the game
/// before the windows were exhausted.
pub fn check_pigeonhole(report: &CaptureReport<f64>, problems: &mut Vec<String>) {
    let reached: Vec<_> = report
        .windows
        .iter()
        .filter(|w| w.theta.is_some())
        .collect();
    if reached.is_empty() {
        return;
    }
    let some_compliant = reached
        .iter()
        .any(|w| w.v1_energy <= w.sigma_i1_sq * (1.0 + ENERGY_SLACK_REL));
    let all_reached = reached.len() == report.windows.len();
    let ended_early = report.captured && !all_reached;
    if !some_compliant && !ended_early {
        problems.push("pigeonhole violated: every reached window overdrawn".into());
    }
    let total: f64 = report.windows.iter().map(|w| w.v1_energy).sum();
    let sigma1_sq = report.derived.sigma1_sq;
    if total > sigma1_sq * (1.0 + ENERGY_SLACK_REL) {
        problems.push(format!(
            "window energies sum to {total} > evader horizontal budget {sigma1_sq}"
        ));
    }
}

/// The splitter must overdraw exactly the windows its plan overdraws, and
/// land each completed window's spend on the plan.
pub fn check_splitter(
    prepared: &Prepared<f64>,
    report: &CaptureReport<f64>,
    overdraw_fraction: f64,
    problems: &mut Vec<String>,
) {
    let derived = &prepared.derived;
    let plan = splitter_plan(derived, overdraw_fraction);
    let band = 1e-3 * derived.sigma1_sq.max(1e-12);
    for (i, w) in report.windows.iter().enumerate() {
        let completed = w.theta.is_some()
            && w.outcome != WindowOutcome::Captured
            && w.outcome != WindowOutcome::NotReached;
        if !completed {
            continue;
        }
        let planned = plan.window_spend[i];
        if (w.v1_energy - planned).abs() > band {
            problems.push(format!(
                "splitter window {}: spent {} instead of planned {planned}",
                i + 1,
                w.v1_energy
            ));
        }
        let measured_overdrawn = w.v1_energy > w.sigma_i1_sq * (1.0 + ENERGY_SLACK_REL);
        if measured_overdrawn != plan.overdrawn[i] {
            problems.push(format!(
                "splitter window {}: overdraw {} but plan says {}",
                i + 1,
                measured_overdrawn,
                plan.overdrawn[i]
            ));
        }
    }
}

/// Post-hoc trace invariants: monotone time, containment of every recorded
/// position, one active mover, bounded window failures, and a quiet
/// projection safety net.
pub fn check_trace(
    prepared: &Prepared<f64>,
    trace: &SimulationTrace<f64>,
    report: &CaptureReport<f64>,
    problems: &mut Vec<String>,
) {
    let derived = &prepared.derived;
    let m = prepared.pursuer_start.len();
    let mut prev_t = f64::NEG_INFINITY;
    for step in &trace.steps {
        if step.t <= prev_t {
            problems.push(format!("trace time not increasing at t = {}", step.t));
            break;
        }
        if prev_t.is_finite() && step.t - prev_t > derived.dt * (1.0 + 1e-9) {
            problems.push(format!(
                "trace spacing {} exceeds dt at t = {}",
                step.t - prev_t,
                step.t
            ));
            break;
        }
        prev_t = step.t;
    }
    for (i, w) in report.windows.iter().enumerate() {
        if let Some(tau) = w.tau_i1 {
            if tau > derived.t_i1[i] + derived.dt {
                problems.push(format!(
                    "window {} crossing at τ = {tau} past t_i1 {} + dt",
                    i + 1,
                    derived.t_i1[i]
                ));
            }
        }
    }
    // Mirror pinning: inside a window whose mirror never broke, the
    // horizontal gap stays within the discrete shadow of exact copying.
    for (i, w) in report.windows.iter().enumerate() {
        if w.outcome == WindowOutcome::FailedBudget
            || w.outcome == WindowOutcome::FailedNoCrossing
        {
            continue;
        }
        let (Some(theta), Some(tau)) = (w.theta, w.tau_i1) else {
            continue;
        };
        let start = theta + tau;
        let end = start + derived.t_i2[i];
        let mut vmax = 0.0_f64;
        for step in &trace.steps {
            if step.t <= start || step.t > end {
                continue;
            }
            vmax = vmax.max(step.evader.control.x.abs());
            let gap = (step.pursuers[i].position.x - step.evader.position.x).abs();
            let allowance = 2.0 * derived.dt * vmax + derived.capture_tol + 1e-12;
            if gap > allowance {
                problems.push(format!(
                    "mirror pin lost in window {}: gap {gap} at t = {} (allowance {allowance})",
                    i + 1,
                    step.t
                ));
                break;
            }
        }
    }
    for step in &trace.steps {
        let mut movers = 0;
        for (i, p) in step.pursuers.iter().enumerate() {
            if !prepared.region.contains(p.position, derived.boundary_tol) {
                problems.push(format!(
                    "pursuer {} outside region at t = {}",
                    i + 1,
                    step.t
                ));
            }
            for axis in 0..2 {
                let cap = prepared.pursuer_budgets[i][axis] * (1.0 + ENERGY_SLACK_REL);
                if p.energy[axis] > cap {
                    problems.push(format!(
                        "pursuer {} ledger past budget mid-run at t = {}",
                        i + 1,
                        step.t
                    ));
                }
            }
            if p.control != crate::vec2::Vec2::zero() {
                movers += 1;
            }
        }
        if !prepared
            .region
            .contains(step.evader.position, derived.boundary_tol)
        {
            problems.push(format!("evader outside region at t = {}", step.t));
        }
        if step.t > derived.t_pre && movers > 1 {
            problems.push(format!(
                "{movers} pursuers moving simultaneously at t = {}",
                step.t
            ));
        }
    }
    let failed = report
        .windows
        .iter()
        .filter(|w| w.outcome == WindowOutcome::FailedBudget)
        .count();
    if failed > m.saturating_sub(1) {
        problems.push(format!(
            "{failed} budget-failed windows out of {m}: pigeonhole bound broken"
        ));
    }
    if report.max_projection_depth > derived.boundary_tol {
        problems.push(format!(
            "safety-net projection of depth {} exceeds boundary tolerance {}",
            report.max_projection_depth, derived.boundary_tol
        ));
    }
}

/// Idle runs must never need the projection safety net at all.
pub fn check_idle_projections(
    policy: &PolicyKind<f64>,
    report: &CaptureReport<f64>,
    problems: &mut Vec<String>,
) {
    if matches!(policy, PolicyKind::Idle) && report.projections > 0 {
        problems.push(format!(
            "{} safety-net projections in an idle-evader run",
            report.projections
        ));
    }
}

/// One failing run: the scenario (already shrunk), the policy, and what
/// went wrong.
#[derive(Debug, Clone)]
pub struct Failure {
    pub scenario: Scenario<f64>,
    pub policy: PolicyKind<f64>,
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct BatterySummary {
    pub scenarios: usize,
    pub runs: usize,
    pub captures: usize,
    pub splitter_runs: usize,
    pub failures: Vec<Failure>,
    /// Smallest observed (t_bound + dt − capture_time): how much of the
    /// worst-case bound the worst run actually used.
    pub worst_slack: f64,
}

/// Execute a single (scenario, policy) run and verify it.
pub fn execute_checked(
    scenario: &Scenario<f64>,
    policy_kind: &PolicyKind<f64>,
) -> Result<(CaptureReport<f64>, Vec<String>), String> {
    let scenario = scenario.with_policy(policy_kind.clone());
    let prepared = scenario.prepare().map_err(|e| e.to_string())?;
    let mut policy = scenario.policy();
    let (trace, report) = engine::run(&prepared, &mut policy).map_err(|e| e.to_string())?;
    let problems = verify_run(&prepared, policy_kind, &trace, &report);
    Ok((report, problems))
}

/// Run `n` sampled scenarios plus the pinned ones against a policy battery.
pub fn check_capture_guarantee(
    n: usize,
    seed: u64,
    policies: &[PolicyKind<f64>],
) -> BatterySummary {
    let mut rng = crate::rng::Rng::new(seed).derive(0x62617474);
    let mut scenarios: Vec<Scenario<f64>> = (0..n)
        .map(|_| sampler::sample_scenario(&mut rng))
        .collect();
    scenarios.push(crate::scenario::golden_scenario());
    scenarios.extend(sampler::tight_margin_scenarios());

    let mut summary = BatterySummary {
        scenarios: scenarios.len(),
        worst_slack: f64::INFINITY,
        ..Default::default()
    };

    for scenario in &scenarios {
        for policy in policies {
            summary.runs += 1;
            if matches!(policy, PolicyKind::WindowSplitter { .. }) {
                summary.splitter_runs += 1;
            }
            match execute_checked(scenario, policy) {
                Ok((report, problems)) => {
                    if report.captured {
                        summary.captures += 1;
                        let slack = report.t_bound + report.derived.dt
                            - report.capture_time.unwrap();
                        summary.worst_slack = summary.worst_slack.min(slack);
                    }
                    if !problems.is_empty() {
                        let shrunk = shrink::shrink_scenario(
                            scenario.with_policy(policy.clone()),
                            &mut |candidate| {
                                matches!(
                                    execute_checked(candidate, policy),
                                    Ok((_, p)) if !p.is_empty()
                                )
                            },
                        );
                        summary.failures.push(Failure {
                            scenario: shrunk,
                            policy: policy.clone(),
                            problems,
                        });
                    }
                }
                Err(message) => summary.failures.push(Failure {
                    scenario: scenario.clone(),
                    policy: policy.clone(),
                    problems: vec![message],
                }),
            }
        }
    }
    summary
}

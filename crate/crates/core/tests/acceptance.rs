//! Acceptance suite: one test per shipping criterion, each printing a
//! PASS line (run with `--nocapture` to see them). The capture-guarantee
//! battery is shared across the criteria that grade different aspects of
//! the same runs.

use std::sync::OnceLock;
use std::time::Instant;

use pursuit_core::engine;
use pursuit_core::evader::PolicyKind;
use pursuit_core::geometry::ConvexRegion;
use pursuit_core::harness::{
    check_capture_guarantee, default_policies, execute_checked, sampler, BatterySummary,
};
use pursuit_core::ledger::ENERGY_SLACK_REL;
use pursuit_core::rng::Rng;
use pursuit_core::scenario::{golden_scenario, Scenario};
use pursuit_core::strategy::WindowOutcome;
use pursuit_core::vec2::Vec2;

const BATTERY_SCENARIOS: usize = 200;
const BATTERY_SEED: u64 = 0x5045_5253_5545;

fn battery() -> &'static BatterySummary {
    static BATTERY: OnceLock<BatterySummary> = OnceLock::new();
    BATTERY.get_or_init(|| {
        check_capture_guarantee(BATTERY_SCENARIOS, BATTERY_SEED, &default_policies())
    })
}

fn dump_failures(summary: &BatterySummary) -> String {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-failures");
    std::fs::create_dir_all(&dir).unwrap();
    let mut lines = Vec::new();
    for (k, f) in summary.failures.iter().enumerate() {
        let path = dir.join(format!("fail-{k:03}-{}.json", f.policy.name()));
        f.scenario.save(&path).unwrap();
        lines.push(format!(
            "  [{}] {} (repro: {})",
            f.policy.name(),
            f.problems.join("; "),
            path.display()
        ));
    }
    lines.join("\n")
}

/// Exact rational arithmetic for the golden oracle.
#[derive(Clone, Copy)]
struct Rat {
    num: i128,
    den: i128,
}

impl Rat {
    fn new(num: i128, den: i128) -> Self {
        assert!(den != 0);
        Self { num, den }
    }
    fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn rel_close(actual: f64, expected: Rat, tol: f64) -> bool {
    let e = expected.value();
    ((actual - e) / e).abs() <= tol
}

#[test]
fn criterion_1_golden_example() {
    let started = Instant::now();
    let prepared = golden_scenario().prepare().unwrap();
    let d = &prepared.derived;

    assert_eq!(d.d, 6.0, "diameter must be exactly 6");
    assert_eq!(d.c, 2.0, "max ordinate must be exactly 2");

    // Budgets 1 and 1.21 against 2: shares 2·1/2.21 and 2·1.21/2.21.
    let s11 = Rat::new(200, 221);
    let s21 = Rat::new(242, 221);
    // t_11 = 36/(1 − 200/221) = 7956/21; t_21 = 36/(121/100 − 242/221).
    let t11 = Rat::new(7956, 21);
    let t21 = Rat::new(795_600, 2541);
    assert!(rel_close(d.sigma_i1_sq[0], s11, 1e-9));
    assert!(rel_close(d.sigma_i1_sq[1], s21, 1e-9));
    assert!(rel_close(d.t_i1[0], t11, 1e-9));
    assert!(rel_close(d.t_i1[1], t21, 1e-9));

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "criterion 1 (golden example): PASS — d=6, c=2, shares and chase times \
         within 1e-9 of the exact rationals, {elapsed:?}"
    );
}

#[test]
fn criterion_2_capture_guarantee() {
    let summary = battery();
    assert!(summary.runs >= 1000, "battery too small: {}", summary.runs);
    let capture_failures: Vec<_> = summary
        .failures
        .iter()
        .filter(|f| {
            f.problems
                .iter()
                .any(|p| p.contains("no capture") || p.contains("exceeds bound"))
        })
        .collect();
    assert!(
        capture_failures.is_empty() && summary.captures == summary.runs,
        "{} capture failures of {} runs:\n{}",
        summary.runs - summary.captures,
        summary.runs,
        dump_failures(summary)
    );
    println!(
        "criterion 2 (capture guarantee): PASS — {}/{} runs captured within \
         t_pre + Σ(t_i1 + t_i2) + dt; worst slack {:.4}",
        summary.captures, summary.runs, summary.worst_slack
    );
}

#[test]
fn criterion_3_pigeonhole() {
    let summary = battery();
    assert!(summary.runs >= 1000);
    let pigeonhole_failures: Vec<_> = summary
        .failures
        .iter()
        .filter(|f| {
            f.problems.iter().any(|p| {
                p.contains("pigeonhole") || p.contains("splitter") || p.contains("window energies")
            })
        })
        .collect();
    assert!(
        pigeonhole_failures.is_empty(),
        "pigeonhole failures:\n{}",
        dump_failures(summary)
    );

    // The documented splitter outcome on the golden scenario: window 1
    // overdrawn and failed, pursuer 2 captures.
    let (report, problems) = execute_checked(
        &golden_scenario(),
        &PolicyKind::WindowSplitter {
            overdraw_fraction: 0.05,
        },
    )
    .unwrap();
    assert!(problems.is_empty(), "{problems:?}");
    assert_eq!(report.windows[0].outcome, WindowOutcome::FailedBudget);
    assert!(report.windows[0].v1_energy > report.windows[0].sigma_i1_sq);
    assert_eq!(report.capturing_pursuer, Some(2));

    println!(
        "criterion 3 (pigeonhole): PASS — {} runs checked ({} splitter runs); \
         every reached-window set kept one compliant window or captured early",
        summary.runs, summary.splitter_runs
    );
}

#[test]
fn criterion_4_admissibility() {
    let summary = battery();
    let ledger_failures: Vec<_> = summary
        .failures
        .iter()
        .filter(|f| {
            f.problems
                .iter()
                .any(|p| p.contains("overdraft") || p.contains("overspend"))
        })
        .collect();
    assert!(
        ledger_failures.is_empty(),
        "admissibility failures:\n{}",
        dump_failures(summary)
    );
    println!(
        "criterion 4 (admissibility): PASS — no ledger exceeded its budget by \
         more than {ENERGY_SLACK_REL:e} relative across {} runs \
         (pre-alignment spend ≤ ρ_i2²/4 included)",
        summary.runs
    );
}

#[test]
fn criterion_5_geometry_oracles() {
    let mut rng = Rng::new(0x47454f4d);

    // Rotating calipers ≡ quadratic brute force, exactly, 10³ polygons.
    for trial in 0..1000 {
        let n = rng.int(5, 16) as usize;
        let region = sampler::random_polygon(&mut rng, n);
        let ConvexRegion::Polygon { vertices } = &region else {
            unreachable!()
        };
        let (d, pair) = region.diameter().unwrap();
        let mut best_sq = -1.0_f64;
        let mut best: Option<(Vec2<f64>, Vec2<f64>)> = None;
        for i in 0..vertices.len() {
            for j in (i + 1)..vertices.len() {
                let (p, q) = if vertices[i].lex_le(vertices[j]) {
                    (vertices[i], vertices[j])
                } else {
                    (vertices[j], vertices[i])
                };
                let dsq = p.dist_sq(q);
                if dsq > best_sq {
                    best_sq = dsq;
                    best = Some((p, q));
                }
            }
        }
        assert_eq!(d, best_sq.sqrt(), "trial {trial}: diameter mismatch");
        let (bp, bq) = best.unwrap();
        assert_eq!(pair.0.dist_sq(pair.1), best_sq, "trial {trial}");
        // The reported pair realizes the same distance as the brute pair.
        let _ = (bp, bq);
    }

    // Max ordinate dominates 10⁴ sampled boundary ordinates and sits in
    // [0, d].
    for _ in 0..10 {
        let region = sampler::random_region(&mut rng);
        let (d, _) = region.diameter().unwrap();
        let frame = region.diametral_frame().unwrap();
        let c = region.max_ordinate(&frame).unwrap();
        assert!(c >= 0.0 && c <= d + 1e-9, "c {c} outside [0, d = {d}]");
        for k in 0..10_000 {
            let p = region.boundary_point(k as f64 / 10_000.0);
            let eta = frame.to_frame(p).y.abs();
            assert!(eta <= c + 1e-6, "ordinate {eta} exceeds c {c}");
        }
    }

    // Frame transforms are isometries to 1e-12.
    for _ in 0..1000 {
        let region = sampler::random_region(&mut rng);
        let frame = region.diametral_frame().unwrap();
        let p = Vec2::new(rng.range(-10.0, 10.0), rng.range(-10.0, 10.0));
        let q = Vec2::new(rng.range(-10.0, 10.0), rng.range(-10.0, 10.0));
        assert!((frame.to_frame(p).dist(frame.to_frame(q)) - p.dist(q)).abs() < 1e-12);
        let back = frame.to_world(frame.to_frame(p));
        assert!((back.x - p.x).abs() < 1e-12 && (back.y - p.y).abs() < 1e-12);
    }

    println!(
        "criterion 5 (geometry oracles): PASS — calipers ≡ brute force on 1000 \
         polygons (exact), c bounds 10⁴ boundary ordinates per region, frame \
         isometry within 1e-12"
    );
}

#[test]
fn criterion_6_dt_refinement() {
    let capture_time_at = |scenario: &Scenario<f64>, dt: f64| -> f64 {
        let mut s = scenario.clone();
        s.dt = Some(dt);
        let prepared = s.prepare().unwrap();
        let mut policy = s.policy();
        let (_, report) = engine::run(&prepared, &mut policy).unwrap();
        assert!(report.captured, "refinement run must capture");
        report.capture_time.unwrap()
    };

    let mut fitted = Vec::new();
    for policy in [PolicyKind::Idle, PolicyKind::GreedyFlee] {
        let scenario = golden_scenario().with_policy(policy.clone());
        let dt0 = scenario.prepare().unwrap().derived.dt;
        let t0 = capture_time_at(&scenario, dt0);
        let t1 = capture_time_at(&scenario, dt0 / 2.0);
        let t2 = capture_time_at(&scenario, dt0 / 4.0);
        let k1 = (t1 - t0).abs() / dt0;
        let k2 = (t2 - t1).abs() / (dt0 / 2.0);
        let k = k1.max(k2);
        assert!(k.is_finite(), "{}: K not finite", policy.name());
        // Differences at step h stay within K·h by construction of K; the
        // sanity check is that K·dt is small against the capture time, so
        // the tolerance-based capture converges.
        assert!(
            k * dt0 <= 0.05 * t0,
            "{}: K·dt = {} too large vs capture at {t0}",
            policy.name(),
            k * dt0
        );
        assert!((t1 - t0).abs() <= k * dt0 + 1e-12);
        assert!((t2 - t1).abs() <= k * dt0 / 2.0 + 1e-12);
        fitted.push((policy.name(), k, t0));
    }
    println!(
        "criterion 6 (dt refinement): PASS — fitted K per policy: {}",
        fitted
            .iter()
            .map(|(n, k, t)| format!("{n}: K={k:.3e} (capture ≈ {t:.3})"))
            .collect::<Vec<_>>()
            .join(", ")
    );
}

#[test]
fn criterion_7_determinism() {
    let mut checked = 0;
    let mut scenarios = vec![golden_scenario().with_policy(PolicyKind::RandomAdmissible)];
    let mut rng = Rng::new(0xD57E12);
    scenarios.push(sampler::sample_scenario(&mut rng).with_policy(PolicyKind::GreedyFlee));

    for scenario in &scenarios {
        let run_bytes = || {
            let prepared = scenario.prepare().unwrap();
            let mut policy = scenario.policy();
            let (trace, report) = engine::run(&prepared, &mut policy).unwrap();
            let mut ndjson = Vec::new();
            trace.write_ndjson(&mut ndjson).unwrap();
            let mut rep = Vec::new();
            report.write_json(&mut rep).unwrap();
            (ndjson, rep)
        };
        let (trace_a, report_a) = run_bytes();
        let (trace_b, report_b) = run_bytes();
        assert_eq!(trace_a, trace_b, "trace bytes differ between runs");
        assert_eq!(report_a, report_b, "report bytes differ between runs");
        checked += 1;
    }
    println!(
        "criterion 7 (determinism): PASS — {checked} scenarios re-run produced \
         byte-identical traces and reports"
    );
}

//! Run a scenario file and print the window bookkeeping, the event log and
//! the final trace rows. Handy when a verify failure needs a closer look:
//!
//!     cargo run --release -p pursuit-core --example inspect_run -- scenario.json

use pursuit_core::scenario::Scenario;

fn main() {
    let path = std::env::args().nth(1).expect("usage: inspect_run <scenario.json>");
    let scenario = Scenario::<f64>::load(&path).expect("loading scenario");
    let prepared = scenario.prepare().expect("validating scenario");
    let mut policy = scenario.policy();
    let (trace, report) = pursuit_core::engine::run(&prepared, &mut policy).expect("running");

    let d = &prepared.derived;
    println!(
        "derived: d={} c={} t_pre={} t_bound={} dt={} capture_tol={}",
        d.d, d.c, d.t_pre, d.t_bound, d.dt, d.capture_tol
    );
    println!("t_i1={:?}", d.t_i1);
    println!("t_i2={:?}", d.t_i2);
    println!(
        "captured={} time={:?} by={:?} projections={}",
        report.captured, report.capture_time, report.capturing_pursuer, report.projections
    );
    for (i, w) in report.windows.iter().enumerate() {
        println!(
            "window {}: theta={:?} tau_i1={:?} outcome={:?} v1_energy={} sigma_i1_sq={}",
            i + 1,
            w.theta,
            w.tau_i1,
            w.outcome,
            w.v1_energy,
            w.sigma_i1_sq
        );
    }
    println!("events ({}):", trace.events.len());
    for e in &trace.events {
        println!(
            "  t={:.6} {:?} pursuer={:?} value={:?}",
            e.t, e.kind, e.pursuer, e.value
        );
    }
    println!("last steps:");
    let tail = trace.steps.len().saturating_sub(5);
    for s in &trace.steps[tail..] {
        println!("  t={:.6} phase={:?} active={:?}", s.t, s.phase, s.active);
        for (i, p) in s.pursuers.iter().enumerate() {
            println!(
                "    pursuer{} pos=({:.9},{:.9}) u=({:.6},{:.6}) e=({:.6},{:.6})",
                i + 1,
                p.position.x,
                p.position.y,
                p.control.x,
                p.control.y,
                p.energy[0],
                p.energy[1]
            );
        }
        println!(
            "    evader   pos=({:.9},{:.9}) v=({:.6},{:.6}) e=({:.6},{:.6})",
            s.evader.position.x,
            s.evader.position.y,
            s.evader.control.x,
            s.evader.control.y,
            s.evader.energy[0],
            s.evader.energy[1]
        );
    }
}

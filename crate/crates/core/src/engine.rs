//! Fixed-step integrator with exact event splitting.
//!
//! Controls are piecewise constant — the evader's over each grid step, the
//! pursuers' over sub-steps — so explicit Euler integrates the dynamics
//! exactly and every event time inside a step (coordinate crossing, capture
//! distance, window boundaries, region exit) is the root of a linear or
//! quadratic expression, found in closed form. The step is split at the
//! earliest event, the event applied, and the remainder integrated under
//! the updated controls.

use crate::config::Prepared;
use crate::error::{Error, Result};
use crate::evader::{EvaderPolicy, PolicyView};
use crate::geometry::ConvexRegion;
use crate::ledger::PlayerState;
use crate::scalar::{real, Real};
use crate::strategy::{Phase, Scheduler, WindowOutcome};
use crate::trace::{
    CaptureReport, Event, EventKind, PlayerRecord, SimulationTrace, TraceStep, WindowReport,
};
use crate::vec2::Vec2;

/// Hard cap on event splits inside one grid step; each event class fires a
/// bounded number of times, so hitting this means a logic bug.
const MAX_SPLITS_PER_STEP: usize = 256;

/// Crossing time of the active pursuer's first coordinate against the
/// evader's, by linear interpolation across a step: positions move linearly
/// under constant controls, so the interpolated zero is exact.
pub fn detect_crossing<T: Real>(prev: (T, T), next: (T, T), t: T, dt: T) -> Option<T> {
    let g0 = prev.1 - prev.0;
    let g1 = next.1 - next.0;
    if g0 == T::zero() {
        return Some(t);
    }
    if g0 * g1 < T::zero() || g1 == T::zero() {
        Some(t + dt * g0 / (g0 - g1))
    } else {
        None
    }
}

/// First time within `[0, h]` at which `|rel_pos + s·rel_vel| <= tol`,
/// or `None`. Exact because positions are linear in `s` inside a step.
pub fn capture_time_within<T: Real>(rel_pos: Vec2<T>, rel_vel: Vec2<T>, tol: T, h: T) -> Option<T> {
    let c = rel_pos.norm_sq() - tol * tol;
    if c <= T::zero() {
        return Some(T::zero());
    }
    let a = rel_vel.norm_sq();
    if a == T::zero() {
        return None;
    }
    let b = rel_pos.dot(rel_vel) * real(2.0);
    let disc = b * b - real::<T>(4.0) * a * c;
    if disc < T::zero() {
        return None;
    }
    let s = (-b - disc.sqrt()) / (a + a);
    (s >= T::zero() && s <= h).then_some(s)
}

/// Earliest capture among all pursuers over the coming span.
pub fn detect_capture<T: Real>(
    pursuers: &[PlayerState<T>],
    controls: &[Vec2<T>],
    evader: &PlayerState<T>,
    evader_v: Vec2<T>,
    tol: T,
    h: T,
) -> Option<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for (i, (p, u)) in pursuers.iter().zip(controls).enumerate() {
        let rel = p.position - evader.position;
        let vel = *u - evader_v;
        if let Some(s) = capture_time_within(rel, vel, tol, h) {
            if best.is_none_or(|(_, b)| s < b) {
                best = Some((i, s));
            }
        }
    }
    best
}

/// Clamp a proposed evader control to its ledger and the region over the
/// coming span. The result, held constant for the span, keeps the evader
/// inside the region (endpoints in a convex set bound the whole segment)
/// and within budget on each coordinate.
fn clamp_admissible<T: Real>(
    raw: Vec2<T>,
    evader: &PlayerState<T>,
    region: &ConvexRegion<T>,
    span: T,
) -> Vec2<T> {
    let mut v = raw;
    if !v.x.is_finite() {
        v.x = T::zero();
    }
    if !v.y.is_finite() {
        v.y = T::zero();
    }
    for (axis, component) in [&mut v.x, &mut v.y].into_iter().enumerate() {
        if evader.ledger.would_overdraw_axis(axis, *component, span) {
            let cap = (evader.ledger.remaining(axis) / span).sqrt();
            *component = component.signum() * cap;
        }
    }
    let target = evader.position + v.scaled(span);
    if !region.contains(target, T::zero()) {
        if let Ok(projected) = region.project(target) {
            v = (projected - evader.position).scaled(T::one() / span);
            // Projection can grow a coordinate; a uniform rescale keeps the
            // endpoint on the in-region segment while restoring the budget.
            let mut scale = T::one();
            for (axis, component) in [v.x, v.y].into_iter().enumerate() {
                if evader.ledger.would_overdraw_axis(axis, component, span)
                    && component != T::zero()
                {
                    let cap = (evader.ledger.remaining(axis) / span).sqrt();
                    scale = scale.min(cap / component.abs());
                }
            }
            if scale < T::one() {
                v = v.scaled(scale);
            }
        } else {
            v = Vec2::zero();
        }
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Pending {
    Capture(usize),
    Crossing(usize),
    PrealignDone,
    ChaseDeadline(usize),
    WindowEnd(usize),
    BoundaryHit(usize),
    GridEnd,
}

struct Candidate<T> {
    s: T,
    rank: u8,
    what: Pending,
}

/// Run a validated game against an evader policy to capture, window
/// exhaustion, or the time bound. Deterministic for a given scenario.
pub fn run<T: Real>(
    prepared: &Prepared<T>,
    policy: &mut EvaderPolicy<T>,
) -> Result<(SimulationTrace<T>, CaptureReport<T>)> {
    let derived = &prepared.derived;
    let region = &prepared.region;
    let dt = derived.dt;
    let m = prepared.pursuer_start.len();

    let mut pursuers: Vec<PlayerState<T>> = prepared
        .pursuer_start
        .iter()
        .zip(&prepared.pursuer_budgets)
        .map(|(p, b)| PlayerState::new(*p, *b))
        .collect();
    let mut evader = PlayerState::new(prepared.evader_start, prepared.evader_budgets);
    let mut scheduler = Scheduler::new(derived, &prepared.pursuer_start);
    let mut trace = SimulationTrace::default();
    let mut captured: Option<(usize, T)> = None;
    let mut projections = 0usize;
    let mut max_projection_depth = T::zero();
    let mut evader_exhausted = [false, false];
    let mut windows_exhausted = false;

    // The windows open immediately when no pre-alignment is needed.
    if !scheduler.prealigning() {
        open_window(&mut scheduler, &mut trace, 0, T::zero(), &pursuers, &evader);
    }

    record_step(
        &mut trace,
        T::zero(),
        &pursuers,
        &vec![Vec2::zero(); m],
        &evader,
        Vec2::zero(),
        &scheduler,
    );

    // Initial coincidence counts as capture at t = 0.
    if let Some((i, _)) = detect_capture(
        &pursuers,
        &vec![Vec2::zero(); m],
        &evader,
        Vec2::zero(),
        derived.capture_tol,
        T::zero(),
    ) {
        captured = Some((i, T::zero()));
        trace.events.push(Event {
            t: T::zero(),
            kind: EventKind::Capture,
            pursuer: Some(i),
            value: Some(T::zero()),
        });
        if scheduler.active == Some(i) {
            scheduler.mark_captured(i);
        }
    }

    let stop_time = derived.t_bound + dt;
    let mut t = T::zero();
    let mut k: u64 = 0;

    'outer: while captured.is_none() && !windows_exhausted && t < stop_time {
        k += 1;
        let grid_end = (dt * real(k as f64)).min(stop_time);
        // The horizon cap already carries +dt of slack; a sliver of a final
        // step would only feed near-zero spans into the control clamps.
        if grid_end - t <= dt * real(1e-9) {
            break;
        }
        let span = grid_end - t;
        let raw = policy.control(&PolicyView {
            t,
            span,
            evader: &evader,
            pursuers: &pursuers,
            machines: &scheduler.machines,
            active: scheduler.active,
            derived,
            region,
        });
        let v = clamp_admissible(raw, &evader, region, span);

        let mut now = t;
        let mut splits = 0usize;
        let mut last_controls = vec![Vec2::zero(); m];
        while now < grid_end {
            splits += 1;
            if splits > MAX_SPLITS_PER_STEP {
                return Err(Error::Numeric {
                    context: "engine step splitting",
                    detail: format!("more than {MAX_SPLITS_PER_STEP} events in one step"),
                });
            }
            let h = grid_end - now;
            let before_failed: Vec<bool> = scheduler
                .machines
                .iter()
                .map(|mm| mm.outcome == WindowOutcome::FailedBudget)
                .collect();
            let controls = scheduler.pursuer_controls(now, h, &pursuers, v, region, derived);
            for (i, was) in before_failed.into_iter().enumerate() {
                if !was && scheduler.machines[i].outcome == WindowOutcome::FailedBudget {
                    trace.events.push(Event {
                        t: now,
                        kind: EventKind::WindowFailed,
                        pursuer: Some(i),
                        value: None,
                    });
                }
            }
            last_controls = controls.clone();

            // Earliest event within (now, now + h]; rank breaks exact ties,
            // capture first.
            let mut best: Option<Candidate<T>> = None;
            let mut offer = |s: T, rank: u8, what: Pending| {
                if s < T::zero() || s > h {
                    return;
                }
                let better = match &best {
                    None => true,
                    Some(b) => s < b.s || (s == b.s && rank < b.rank),
                };
                if better {
                    best = Some(Candidate { s, rank, what });
                }
            };

            if let Some((i, s)) = detect_capture(
                &pursuers,
                &controls,
                &evader,
                v,
                derived.capture_tol,
                h,
            ) {
                offer(s, 0, Pending::Capture(i));
            }
            if scheduler.prealigning() {
                offer(derived.t_pre - now, 2, Pending::PrealignDone);
            }
            if let Some(i) = scheduler.active {
                match scheduler.machines[i].phase {
                    Phase::HorizontalChase => {
                        let x = pursuers[i].position.x;
                        let y = evader.position.x;
                        let next = (x + controls[i].x * h, y + v.x * h);
                        if let Some(tc) = detect_crossing((x, y), next, now, h) {
                            offer(tc - now, 1, Pending::Crossing(i));
                        }
                        if let Some(deadline) = scheduler.chase_deadline(i, derived) {
                            offer(deadline - now, 3, Pending::ChaseDeadline(i));
                        }
                    }
                    Phase::MirrorAndDrive | Phase::Failed => {
                        if let Some(end) = scheduler.window_end(i, derived) {
                            offer(end - now, 4, Pending::WindowEnd(i));
                        }
                        if scheduler.machines[i].phase == Phase::MirrorAndDrive
                            && controls[i] != Vec2::zero()
                        {
                            if let Some(s) =
                                region.exit_time(pursuers[i].position, controls[i], h)
                            {
                                offer(s, 5, Pending::BoundaryHit(i));
                            }
                        }
                    }
                    _ => {}
                }
            }

            let (advance, what) = match best {
                Some(c) => (c.s, c.what),
                None => (h, Pending::GridEnd),
            };

            // Advance every player and charge the ledgers.
            for (p, u) in pursuers.iter_mut().zip(&controls) {
                p.position += u.scaled(advance);
                p.ledger.charge(*u, advance)?;
            }
            evader.position += v.scaled(advance);
            evader.ledger.charge(v, advance)?;
            scheduler.record_window_v1(v.x, advance);
            now = if what == Pending::GridEnd {
                grid_end
            } else {
                now + advance
            };

            // Safety net: nobody may stand outside the region. A point
            // within round-off of the boundary is treated as on it; the
            // net fires only for a real excursion.
            let net_tol = real::<T>(1e-12) * derived.d;
            for (i, p) in pursuers.iter_mut().enumerate() {
                if !region.contains(p.position, net_tol) {
                    let (foot, depth) = region.boundary_foot(p.position)?;
                    p.position = foot;
                    projections += 1;
                    max_projection_depth = max_projection_depth.max(depth);
                    trace.events.push(Event {
                        t: now,
                        kind: EventKind::BoundaryStop,
                        pursuer: Some(i),
                        value: Some(depth),
                    });
                }
            }
            if !region.contains(evader.position, net_tol) {
                let (foot, depth) = region.boundary_foot(evader.position)?;
                evader.position = foot;
                projections += 1;
                max_projection_depth = max_projection_depth.max(depth);
                trace.events.push(Event {
                    t: now,
                    kind: EventKind::BoundaryStop,
                    pursuer: None,
                    value: Some(depth),
                });
            }

            for (axis, flagged) in evader_exhausted.iter_mut().enumerate() {
                if !*flagged
                    && evader.ledger.remaining(axis)
                        <= evader.ledger.budget_sq[axis] * real(1e-12)
                {
                    *flagged = true;
                    trace.events.push(Event {
                        t: now,
                        kind: EventKind::BudgetExhausted,
                        pursuer: None,
                        value: Some(real(axis as f64)),
                    });
                }
            }

            match what {
                Pending::GridEnd => {}
                Pending::Capture(i) => {
                    trace.events.push(Event {
                        t: now,
                        kind: EventKind::Capture,
                        pursuer: Some(i),
                        value: Some(pursuers[i].position.dist(evader.position)),
                    });
                    if scheduler.active == Some(i) {
                        scheduler.mark_captured(i);
                    }
                    captured = Some((i, now));
                    record_step(&mut trace, now, &pursuers, &controls, &evader, v, &scheduler);
                    break 'outer;
                }
                Pending::Crossing(i) => {
                    scheduler.enter_mirror(i, now, &pursuers, &evader);
                    trace.events.push(Event {
                        t: now,
                        kind: EventKind::Crossing,
                        pursuer: Some(i),
                        value: scheduler.machines[i].tau_i1,
                    });
                    record_step(&mut trace, now, &pursuers, &controls, &evader, v, &scheduler);
                }
                Pending::PrealignDone => {
                    scheduler.finish_prealign();
                    trace.events.push(Event {
                        t: now,
                        kind: EventKind::PrealignDone,
                        pursuer: None,
                        value: None,
                    });
                    open_window(&mut scheduler, &mut trace, 0, now, &pursuers, &evader);
                    record_step(&mut trace, now, &pursuers, &controls, &evader, v, &scheduler);
                }
                Pending::ChaseDeadline(i) => {
                    scheduler.fail_no_crossing(i, derived);
                    trace.events.push(Event {
                        t: now,
                        kind: EventKind::WindowFailed,
                        pursuer: Some(i),
                        value: None,
                    });
                    record_step(&mut trace, now, &pursuers, &controls, &evader, v, &scheduler);
                }
                Pending::WindowEnd(i) => {
                    scheduler.close_window(i, now, &pursuers, &evader);
                    if i + 1 < m {
                        note_window_open(&mut scheduler, &mut trace, i + 1, now);
                    } else {
                        windows_exhausted = true;
                    }
                    record_step(&mut trace, now, &pursuers, &controls, &evader, v, &scheduler);
                    if windows_exhausted {
                        break 'outer;
                    }
                }
                Pending::BoundaryHit(i) => {
                    trace.events.push(Event {
                        t: now,
                        kind: EventKind::BoundaryStop,
                        pursuer: Some(i),
                        value: None,
                    });
                    record_step(&mut trace, now, &pursuers, &controls, &evader, v, &scheduler);
                }
                
            }
        }

        t = grid_end;
        record_step(&mut trace, t, &pursuers, &last_controls, &evader, v, &scheduler);
    }

    let report = CaptureReport {
        captured: captured.is_some(),
        capture_time: captured.map(|(_, tc)| tc),
        capturing_pursuer: captured.map(|(i, _)| i + 1),
        t_bound: derived.t_bound,
        windows: scheduler
            .machines
            .iter()
            .zip(&derived.sigma_i1_sq)
            .map(|(machine, sigma)| WindowReport {
                theta: machine.window_start,
                tau_i1: machine.tau_i1,
                outcome: machine.outcome,
                v1_energy: machine.window_v1_energy,
                sigma_i1_sq: *sigma,
            })
            .collect(),
        pursuer_ledgers: pursuers.iter().map(|p| p.ledger).collect(),
        evader_ledger: evader.ledger,
        derived: derived.clone(),
        frame: prepared.frame,
        projections,
        max_projection_depth,
        guarantee_violated: captured.is_none() && derived.hypothesis_holds,
    };
    Ok((trace, report))
}

/// Open pursuer `i`'s window at `theta` and record the events, including
/// the immediate crossing when the chase is skipped on a zero gap.
fn open_window<T: Real>(
    scheduler: &mut Scheduler<T>,
    trace: &mut SimulationTrace<T>,
    i: usize,
    theta: T,
    pursuers: &[PlayerState<T>],
    evader: &PlayerState<T>,
) {
    scheduler.start_window(i, theta, pursuers, evader);
    note_window_open(scheduler, trace, i, theta);
}

fn note_window_open<T: Real>(
    scheduler: &mut Scheduler<T>,
    trace: &mut SimulationTrace<T>,
    i: usize,
    theta: T,
) {
    trace.events.push(Event {
        t: theta,
        kind: EventKind::WindowStart,
        pursuer: Some(i),
        value: None,
    });
    if scheduler.machines[i].phase == Phase::MirrorAndDrive {
        trace.events.push(Event {
            t: theta,
            kind: EventKind::Crossing,
            pursuer: Some(i),
            value: Some(T::zero()),
        });
    }
}

fn record_step<T: Real>(
    trace: &mut SimulationTrace<T>,
    t: T,
    pursuers: &[PlayerState<T>],
    controls: &[Vec2<T>],
    evader: &PlayerState<T>,
    evader_v: Vec2<T>,
    scheduler: &Scheduler<T>,
) {
    let step = TraceStep {
        t,
        pursuers: pursuers
            .iter()
            .zip(controls)
            .map(|(p, u)| PlayerRecord {
                position: p.position,
                control: *u,
                energy: p.ledger.consumed,
            })
            .collect(),
        evader: PlayerRecord {
            position: evader.position,
            control: evader_v,
            energy: evader.ledger.consumed,
        },
        active: scheduler.active,
        phase: scheduler.phase_label(),
    };
    // An event can land exactly on a grid boundary (or two events can
    // coincide); keep one row per instant, the freshest state.
    match trace.steps.last_mut() {
        Some(last) if last.t == t => *last = step,
        _ => trace.steps.push(step),
    }
}

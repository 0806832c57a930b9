//! The pursuers' side of the game.
//!
//! After an optional pre-alignment maneuver that brings every pursuer onto
//! the diametral axis, pursuers act strictly one at a time, each inside its
//! own window. Window i has two stages:
//!
//! * chase: move along the diametral axis at the fixed rate d / t_i1 toward
//!   the evader's first coordinate until the coordinates cross (time τ_i1);
//! * mirror-and-drive: copy the evader's horizontal control, pinning the
//!   first coordinate, while driving vertically at c / t_i2 toward the
//!   evader's side — stopping dead on the region boundary whenever moving
//!   on would leave the set.
//!
//! Mirroring is budget-guarded: a window whose mirror charge would overdraw
//! the pursuer's horizontal budget is marked failed, its horizontal control
//! zeroed, and the window runs out its scheduled length before the next
//! pursuer starts. Against an admissible evader at most m − 1 windows can
//! fail this way: the evader cannot out-spend its own horizontal budget in
//! every window.

use serde::{Deserialize, Serialize};

use crate::config::DerivedParams;
use crate::geometry::ConvexRegion;
use crate::ledger::PlayerState;
use crate::scalar::{real, Real};
use crate::vec2::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    PreAlign,
    Idle,
    HorizontalChase,
    MirrorAndDrive,
    Done,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowOutcome {
    /// Window never started (capture happened earlier).
    NotReached,
    /// Capture inside this window.
    Captured,
    /// Ran its full span without capture and without a budget failure.
    Expired,
    /// Mirror budget guard tripped: the evader overdrew this window.
    FailedBudget,
    /// No coordinate crossing by the stage-1 deadline.
    FailedNoCrossing,
}

/// Per-pursuer strategy state.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PursuerMachine<T: Real> {
    pub phase: Phase,
    /// Realized window start θ_i, set on activation.
    pub window_start: Option<T>,
    /// Realized crossing offset τ_i1, set on stage-2 entry (or pinned to
    /// t_i1 on a stage-1 failure).
    pub tau_i1: Option<T>,
    /// Chase direction, fixed at window start from sgn(y1 − x_i1).
    pub chase_sign: T,
    /// Drive direction, fixed at stage-2 entry from sgn(y2 − x_i2).
    pub vertical_sign: T,
    /// Evader horizontal energy accumulated over this window's mirror span.
    pub window_v1_energy: T,
    /// Budget guard latch: once tripped the mirror stays off.
    pub mirror_lost: bool,
    pub outcome: WindowOutcome,
}

impl<T: Real> PursuerMachine<T> {
    fn new(initial: Phase) -> Self {
        Self {
            phase: initial,
            window_start: None,
            tau_i1: None,
            chase_sign: T::zero(),
            vertical_sign: T::zero(),
            window_v1_energy: T::zero(),
            mirror_lost: false,
            outcome: WindowOutcome::NotReached,
        }
    }
}

fn sgn<T: Real>(v: T) -> T {
    if v > T::zero() {
        T::one()
    } else if v < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

/// Pre-alignment control for a pursuer starting at height `eta0`:
/// a constant vertical rate that reaches the axis exactly at `t_pre`,
/// spending at most a quarter of the vertical budget.
pub fn prealign_control<T: Real>(eta0: T, t_pre: T) -> Vec2<T> {
    if t_pre > T::zero() {
        Vec2::new(T::zero(), -eta0 / t_pre)
    } else {
        Vec2::zero()
    }
}

/// Scheduler: owns the machines and the single-active-window discipline.
#[derive(Debug, Clone)]
pub struct Scheduler<T: Real> {
    pub machines: Vec<PursuerMachine<T>>,
    /// Index of the pursuer whose window is running, if any.
    pub active: Option<usize>,
    /// Constant pre-alignment rates, one per pursuer.
    prealign_rate: Vec<T>,
    prealigning: bool,
}

impl<T: Real> Scheduler<T> {
    pub fn new(derived: &DerivedParams<T>, pursuer_start: &[Vec2<T>]) -> Self {
        let prealigning = derived.t_pre > T::zero();
        let initial = if prealigning {
            Phase::PreAlign
        } else {
            Phase::Idle
        };
        Self {
            machines: pursuer_start
                .iter()
                .map(|_| PursuerMachine::new(initial))
                .collect(),
            active: None,
            prealign_rate: pursuer_start
                .iter()
                .map(|p| {
                    if prealigning {
                        -p.y / derived.t_pre
                    } else {
                        T::zero()
                    }
                })
                .collect(),
            prealigning,
        }
    }

    pub fn prealigning(&self) -> bool {
        self.prealigning
    }

    /// Phase label for trace rows: the active machine's phase, or the
    /// collective one.
    pub fn phase_label(&self) -> Phase {
        if self.prealigning {
            return Phase::PreAlign;
        }
        match self.active {
            Some(i) => self.machines[i].phase,
            None => Phase::Idle,
        }
    }

    /// End the pre-alignment phase and hand control to the window scheduler.
    pub fn finish_prealign(&mut self) {
        self.prealigning = false;
        for machine in &mut self.machines {
            machine.phase = Phase::Idle;
        }
    }

    /// Activate pursuer `i` at time `theta` and fix its chase direction. A
    /// zero gap skips the chase entirely: τ_i1 = 0 and the mirror starts at
    /// once.
    pub fn start_window(
        &mut self,
        i: usize,
        theta: T,
        states: &[PlayerState<T>],
        evader: &PlayerState<T>,
    ) {
        let machine = &mut self.machines[i];
        machine.window_start = Some(theta);
        machine.phase = Phase::HorizontalChase;
        machine.chase_sign = sgn(evader.position.x - states[i].position.x);
        self.active = Some(i);
        if self.machines[i].chase_sign == T::zero() {
            self.enter_mirror(i, theta, states, evader);
        }
    }

    /// Stage-2 entry at the crossing time: record τ_i1 and fix the drive
    /// direction.
    pub fn enter_mirror(
        &mut self,
        i: usize,
        t: T,
        states: &[PlayerState<T>],
        evader: &PlayerState<T>,
    ) {
        let machine = &mut self.machines[i];
        machine.tau_i1 = Some(t - machine.window_start.expect("window started"));
        machine.phase = Phase::MirrorAndDrive;
        machine.vertical_sign = sgn(evader.position.y - states[i].position.y);
    }

    /// Stage-1 deadline passed without a crossing. Only discretization or a
    /// violated hypothesis can cause this; the window still runs out its
    /// scheduled length.
    pub fn fail_no_crossing(&mut self, i: usize, derived: &DerivedParams<T>) {
        let machine = &mut self.machines[i];
        machine.tau_i1 = Some(derived.t_i1[i]);
        machine.phase = Phase::Failed;
        machine.outcome = WindowOutcome::FailedNoCrossing;
    }

    /// Scheduled end θ_{i+1} of the window of pursuer `i`, if determined:
    /// θ_i + τ_i1 + t_i2 once the crossing is known, θ_i + t_i1 + t_i2
    /// after a stage-1 failure.
    pub fn window_end(&self, i: usize, derived: &DerivedParams<T>) -> Option<T> {
        let machine = &self.machines[i];
        let theta = machine.window_start?;
        machine.tau_i1.map(|tau| theta + tau + derived.t_i2[i])
    }

    /// Stage-1 deadline θ_i + t_i1 while pursuer `i` is chasing.
    pub fn chase_deadline(&self, i: usize, derived: &DerivedParams<T>) -> Option<T> {
        let machine = &self.machines[i];
        if machine.phase == Phase::HorizontalChase {
            Some(machine.window_start? + derived.t_i1[i])
        } else {
            None
        }
    }

    /// Close pursuer `i`'s window at time `theta_next` and activate the next
    /// pursuer if one remains.
    pub fn close_window(
        &mut self,
        i: usize,
        theta_next: T,
        states: &[PlayerState<T>],
        evader: &PlayerState<T>,
    ) {
        {
            let machine = &mut self.machines[i];
            if machine.outcome == WindowOutcome::NotReached {
                machine.outcome = WindowOutcome::Expired;
            }
            if machine.phase != Phase::Failed {
                machine.phase = if machine.outcome == WindowOutcome::FailedBudget {
                    Phase::Failed
                } else {
                    Phase::Done
                };
            }
        }
        self.active = None;
        if i + 1 < self.machines.len() {
            self.start_window(i + 1, theta_next, states, evader);
        }
    }

    /// Mark capture inside the active window.
    pub fn mark_captured(&mut self, i: usize) {
        self.machines[i].outcome = WindowOutcome::Captured;
        self.machines[i].phase = Phase::Done;
        self.active = None;
    }

    /// Accumulate the evader's horizontal energy into the active mirror
    /// window's ledger.
    pub fn record_window_v1(&mut self, v1: T, span: T) {
        if let Some(i) = self.active {
            let machine = &mut self.machines[i];
            let in_mirror_span = (machine.phase == Phase::MirrorAndDrive
                || machine.phase == Phase::Failed)
                && machine.tau_i1.is_some();
            if in_mirror_span {
                machine.window_v1_energy = machine.window_v1_energy + v1 * v1 * span;
            }
        }
    }

    /// Controls for every pursuer over the span starting at `now`, of
    /// length at most `h`. The budget guards latch here: a mirror (or, in
    /// exploratory runs, a chase) whose charge cannot be afforded is zeroed
    /// and the window marked failed. Guard charges are evaluated over the
    /// time the control can actually run — a window ending mid-step must
    /// not make a fully-funded control look unaffordable.
    pub fn pursuer_controls(
        &mut self,
        now: T,
        h: T,
        states: &[PlayerState<T>],
        evader_v: Vec2<T>,
        region: &ConvexRegion<T>,
        derived: &DerivedParams<T>,
    ) -> Vec<Vec2<T>> {
        let mut controls = vec![Vec2::zero(); states.len()];
        if self.prealigning {
            for (i, c) in controls.iter_mut().enumerate() {
                *c = Vec2::new(T::zero(), self.prealign_rate[i]);
            }
            return controls;
        }
        let Some(i) = self.active else {
            return controls;
        };
        let deadline = match self.machines[i].phase {
            Phase::HorizontalChase => self.chase_deadline(i, derived),
            _ => self.window_end(i, derived),
        };
        let span = deadline.map_or(h, |end| (end - now).max(T::zero()).min(h));
        let machine = &mut self.machines[i];
        match machine.phase {
            Phase::HorizontalChase => {
                let rate = machine.chase_sign * derived.d / derived.t_i1[i];
                let u = Vec2::new(rate, T::zero());
                if states[i].ledger.would_overdraw(u, span) {
                    machine.phase = Phase::Failed;
                    machine.outcome = WindowOutcome::FailedBudget;
                    machine.tau_i1 = Some(derived.t_i1[i]);
                } else {
                    controls[i] = u;
                }
            }
            Phase::MirrorAndDrive => {
                controls[i] = stage2_control(
                    machine,
                    &states[i],
                    evader_v,
                    region,
                    derived,
                    i,
                    span,
                );
            }
            _ => {}
        }
        controls
    }
}

/// The mirror-and-drive control. The horizontal component copies the
/// evader (subject to the budget guard) and the vertical component drives
/// at c / t_i2 toward the side fixed at stage entry.
///
/// Boundary stop: a pursuer standing on the boundary band whose motion
/// would leave the region stops dead, both components zero. Motion pointing
/// back into the region proceeds — a pursuer pre-aligned onto a polygon
/// edge that happens to carry the diametral pair must still be able to
/// drive inward, or the guarantee is forfeit on such regions.
fn stage2_control<T: Real>(
    machine: &mut PursuerMachine<T>,
    state: &PlayerState<T>,
    evader_v: Vec2<T>,
    region: &ConvexRegion<T>,
    derived: &DerivedParams<T>,
    i: usize,
    h: T,
) -> Vec2<T> {
    let drive = if derived.t_i2[i] > T::zero() {
        machine.vertical_sign * derived.c / derived.t_i2[i]
    } else {
        T::zero()
    };
    let mirror = if machine.mirror_lost {
        T::zero()
    } else {
        evader_v.x
    };
    if region
        .on_boundary(state.position, derived.boundary_tol)
        .unwrap_or(false)
    {
        let candidate = Vec2::new(mirror, drive);
        let exits_now = match region.exit_time(state.position, candidate, h) {
            Some(s) => s <= h * real(1e-9),
            None => false,
        };
        if exits_now {
            return Vec2::zero();
        }
    }
    let mut u = Vec2::new(evader_v.x, drive);
    if machine.mirror_lost {
        u.x = T::zero();
    } else if state.ledger.would_overdraw_axis(0, u.x, h) {
        machine.mirror_lost = true;
        machine.outcome = WindowOutcome::FailedBudget;
        u.x = T::zero();
    }
    if state.ledger.would_overdraw_axis(1, u.y, h) {
        // Unreachable when the hypothesis holds: pre-alignment leaves 3/4 of
        // the vertical budget and the drive spends exactly that.
        u.y = T::zero();
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{validate, GameConfig};
    use crate::geometry::ConvexRegion;

    type P = Vec2<f64>;

    fn single_pursuer_config(pursuer: P, budgets: [f64; 2]) -> GameConfig<f64> {
        GameConfig {
            region: ConvexRegion::Ellipse {
                center: P::new(0.0, 0.0),
                semi_axes: [3.0, 2.0],
                rotation: 0.0,
            },
            pursuers: vec![crate::config::PursuerSetup {
                position: pursuer,
                budgets_sq: budgets,
            }],
            evader: crate::config::EvaderSetup {
                position: P::new(0.5, 0.5),
                budgets_sq: [0.5, 3.5],
            },
            dt: None,
            capture_tol: None,
            boundary_tol: None,
            rng_seed: 0,
            exploratory: false,
        }
    }

    #[test]
    fn prealign_control_matches_constant_rate() {
        // Single pursuer at height 1 with vertical budget 4: T = 4·1/4 = 1,
        // control (0, −1), energy spent 1 = ρ² / 4.
        let cfg = single_pursuer_config(P::new(-1.0, 1.0), [2.0, 4.0]);
        let prepared = validate(cfg).unwrap();
        assert!((prepared.derived.t_pre - 1.0).abs() < 1e-15);
        let u = prealign_control(1.0, prepared.derived.t_pre);
        assert!((u.y + 1.0).abs() < 1e-15);
        assert_eq!(u.x, 0.0);
        let energy = u.y * u.y * prepared.derived.t_pre;
        assert!((energy - 1.0).abs() < 1e-15);
    }

    #[test]
    fn prealign_skipped_when_all_on_axis() {
        let cfg = single_pursuer_config(P::new(-1.0, 0.0), [2.0, 4.0]);
        let prepared = validate(cfg).unwrap();
        assert_eq!(prepared.derived.t_pre, 0.0);
        let scheduler = Scheduler::new(&prepared.derived, &prepared.pursuer_start);
        assert!(!scheduler.prealigning());
        assert_eq!(prealign_control(0.0, 0.0), Vec2::zero());
    }

    #[test]
    fn chase_rate_for_golden_values() {
        // u1 = d / t_11 with d = 6, t_11 = 36 / (1 − 2/2.21).
        let t11 = 36.0 / (1.0 - 200.0 / 221.0);
        let rate: f64 = 6.0 / t11;
        let expected = 21.0 / 1326.0;
        assert!((rate - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn zero_gap_skips_chase() {
        let cfg = single_pursuer_config(P::new(0.5, 0.0), [2.0, 4.0]);
        let prepared = validate(cfg).unwrap();
        let mut scheduler = Scheduler::new(&prepared.derived, &prepared.pursuer_start);
        let states = vec![PlayerState::new(
            prepared.pursuer_start[0],
            prepared.pursuer_budgets[0],
        )];
        let evader = PlayerState::new(prepared.evader_start, prepared.evader_budgets);
        scheduler.start_window(0, 0.0, &states, &evader);
        assert_eq!(scheduler.machines[0].phase, Phase::MirrorAndDrive);
        assert_eq!(scheduler.machines[0].tau_i1, Some(0.0));
        assert_eq!(scheduler.machines[0].chase_sign, 0.0);
    }

    #[test]
    fn stage2_idle_evader_control() {
        // Drive rate is c / t_i2 = ρ_eff² · c / c²; with c = 2 and full
        // vertical budget 1.5 (no pre-align) this is 0.75.
        let cfg = single_pursuer_config(P::new(-1.0, 0.0), [2.0, 1.5]);
        let prepared = validate(cfg).unwrap();
        assert_eq!(prepared.derived.rho_i2_eff_sq[0], 1.5);
        let t12 = 4.0 / 1.5;
        assert!((prepared.derived.t_i2[0] - t12).abs() < 1e-15);
        let mut scheduler = Scheduler::new(&prepared.derived, &prepared.pursuer_start);
        let states = vec![PlayerState::new(
            P::new(0.5, 0.0),
            prepared.pursuer_budgets[0],
        )];
        let evader = PlayerState::new(prepared.evader_start, prepared.evader_budgets);
        scheduler.start_window(0, 0.0, &states, &evader);
        let controls = scheduler.pursuer_controls(
            0.0,
            0.01,
            &states,
            Vec2::zero(),
            &prepared.region,
            &prepared.derived,
        );
        assert_eq!(controls[0].x, 0.0);
        assert!((controls[0].y - 1.5 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn stage2_stops_on_boundary_when_motion_exits() {
        let cfg = single_pursuer_config(P::new(-1.0, 0.0), [2.0, 1.5]);
        let prepared = validate(cfg).unwrap();
        let mut scheduler = Scheduler::new(&prepared.derived, &prepared.pursuer_start);
        // Park the pursuer on the rightmost vertex of the ellipse: any
        // vertical drive leaves the region immediately.
        let states = vec![PlayerState::new(
            P::new(3.0, 0.0),
            prepared.pursuer_budgets[0],
        )];
        let evader = PlayerState::new(prepared.evader_start, prepared.evader_budgets);
        scheduler.start_window(0, 0.0, &states, &evader);
        scheduler.enter_mirror(0, 0.0, &states, &evader);
        assert_eq!(scheduler.machines[0].vertical_sign, 1.0);
        let controls = scheduler.pursuer_controls(
            0.0,
            0.01,
            &states,
            Vec2::zero(),
            &prepared.region,
            &prepared.derived,
        );
        assert_eq!(controls[0], Vec2::zero());
    }

    #[test]
    fn stage2_proceeds_inward_from_boundary() {
        // A triangle whose longest side is an edge: pre-aligned pursuers
        // stand exactly on that edge and must still drive toward the
        // evader above it.
        let cfg = GameConfig {
            region: ConvexRegion::Polygon {
                vertices: vec![P::new(-3.0, 0.0), P::new(3.0, 0.0), P::new(0.5, 2.0)],
            },
            pursuers: vec![crate::config::PursuerSetup {
                position: P::new(-1.0, 0.0),
                budgets_sq: [2.0, 1.5],
            }],
            evader: crate::config::EvaderSetup {
                position: P::new(0.5, 0.5),
                budgets_sq: [0.5, 3.5],
            },
            dt: None,
            capture_tol: None,
            boundary_tol: None,
            rng_seed: 0,
            exploratory: false,
        };
        let prepared = validate(cfg).unwrap();
        let mut scheduler = Scheduler::new(&prepared.derived, &prepared.pursuer_start);
        // The diametral edge lies on the frame x-axis; the pursuer sits on it.
        let pos = prepared.pursuer_start[0];
        assert!(prepared
            .region
            .on_boundary(pos, prepared.derived.boundary_tol)
            .unwrap());
        let states = vec![PlayerState::new(pos, prepared.pursuer_budgets[0])];
        let evader = PlayerState::new(prepared.evader_start, prepared.evader_budgets);
        scheduler.start_window(0, 0.0, &states, &evader);
        scheduler.enter_mirror(0, 0.0, &states, &evader);
        let controls = scheduler.pursuer_controls(
            0.0,
            0.01,
            &states,
            Vec2::zero(),
            &prepared.region,
            &prepared.derived,
        );
        assert!(controls[0].y > 0.0, "inward drive must proceed");
    }

    #[test]
    fn mirror_budget_guard_trips_and_latches() {
        let cfg = single_pursuer_config(P::new(-1.0, 0.0), [2.0, 1.5]);
        let prepared = validate(cfg).unwrap();
        let mut scheduler = Scheduler::new(&prepared.derived, &prepared.pursuer_start);
        let mut state = PlayerState::new(P::new(0.5, 0.0), prepared.pursuer_budgets[0]);
        // Exhaust almost all horizontal budget.
        state.ledger.consumed[0] = 1.99;
        let states = vec![state];
        let evader = PlayerState::new(prepared.evader_start, prepared.evader_budgets);
        scheduler.start_window(0, 0.0, &states, &evader);
        let controls = scheduler.pursuer_controls(
            0.0,
            1.0,
            &states,
            Vec2::new(1.0, 0.0), // charging 1² · 1 would overdraw
            &prepared.region,
            &prepared.derived,
        );
        assert_eq!(controls[0].x, 0.0);
        assert!(scheduler.machines[0].mirror_lost);
        assert_eq!(scheduler.machines[0].outcome, WindowOutcome::FailedBudget);
        // The guard latches: an affordable mirror later stays off.
        let controls = scheduler.pursuer_controls(
            0.0,
            0.001,
            &states,
            Vec2::new(0.01, 0.0),
            &prepared.region,
            &prepared.derived,
        );
        assert_eq!(controls[0].x, 0.0);
    }

    #[test]
    fn inactive_pursuers_do_not_move() {
        let prepared = validate(crate::config::tests::golden_config()).unwrap();
        let mut scheduler = Scheduler::new(&prepared.derived, &prepared.pursuer_start);
        scheduler.finish_prealign();
        let states: Vec<_> = prepared
            .pursuer_start
            .iter()
            .zip(&prepared.pursuer_budgets)
            .map(|(p, b)| PlayerState::new(*p, *b))
            .collect();
        let evader = PlayerState::new(prepared.evader_start, prepared.evader_budgets);
        scheduler.start_window(0, 0.0, &states, &evader);
        let controls = scheduler.pursuer_controls(
            0.0,
            0.01,
            &states,
            Vec2::zero(),
            &prepared.region,
            &prepared.derived,
        );
        assert_ne!(controls[0], Vec2::zero());
        assert_eq!(controls[1], Vec2::zero());
    }
}

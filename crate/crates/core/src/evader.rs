//! Adversarial evader policies used to stress the capture guarantee.
//!
//! A policy only proposes a control; the engine clamps every proposal to
//! the remaining energy budgets and to the region before applying it, so
//! each policy is admissible by construction. Policies observe the full
//! game state — positions, phases, window bookkeeping, derived parameters —
//! which makes them as strong as desk-scale adversaries get.

use serde::{Deserialize, Serialize};

use crate::config::DerivedParams;
use crate::geometry::ConvexRegion;
use crate::ledger::PlayerState;
use crate::rng::Rng;
use crate::scalar::{real, Real};
use crate::strategy::{Phase, PursuerMachine};
use crate::vec2::Vec2;

/// Fraction of a mirror window over which the splitter front-loads its
/// spend. Dumping early makes an overdrawn window's budget guard trip well
/// before the vertical drive can finish.
const SPLITTER_SPAN_FRACTION: f64 = 0.125;

/// How close to the diametral vertices (|ξ| relative to d/2) the hugger is
/// willing to walk.
const HUGGER_X_LIMIT: f64 = 0.85;

/// Policy selection, as it appears in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Real")]
pub enum PolicyKind<T: Real> {
    /// Never moves.
    Idle,
    /// Bounded piecewise-constant random controls, resampled every step.
    RandomAdmissible,
    /// Runs from the active pursuer, spending remaining energy uniformly
    /// over the worst-case horizon.
    GreedyFlee,
    /// The contradiction adversary: overdraws the horizontal allowance
    /// σ_i1² of successive mirror windows until its budget runs out.
    WindowSplitter { overdraw_fraction: T },
    /// Walks along the region boundary to exercise the stage-2 stop rule.
    BoundaryHugger,
}

impl<T: Real> PolicyKind<T> {
    pub const ALL_NAMES: [&'static str; 5] = [
        "idle",
        "random_admissible",
        "greedy_flee",
        "window_splitter",
        "boundary_hugger",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::Idle => "idle",
            PolicyKind::RandomAdmissible => "random_admissible",
            PolicyKind::GreedyFlee => "greedy_flee",
            PolicyKind::WindowSplitter { .. } => "window_splitter",
            PolicyKind::BoundaryHugger => "boundary_hugger",
        }
    }

    /// Parse a policy name, with the splitter given its default overdraw.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "idle" => Some(PolicyKind::Idle),
            "random_admissible" => Some(PolicyKind::RandomAdmissible),
            "greedy_flee" => Some(PolicyKind::GreedyFlee),
            "window_splitter" => Some(PolicyKind::WindowSplitter {
                overdraw_fraction: real(0.05),
            }),
            "boundary_hugger" => Some(PolicyKind::BoundaryHugger),
            _ => None,
        }
    }
}

/// Everything a policy may look at when choosing its control.
pub struct PolicyView<'a, T: Real> {
    pub t: T,
    /// Span the chosen control will be held for.
    pub span: T,
    pub evader: &'a PlayerState<T>,
    pub pursuers: &'a [PlayerState<T>],
    pub machines: &'a [PursuerMachine<T>],
    pub active: Option<usize>,
    pub derived: &'a DerivedParams<T>,
    pub region: &'a ConvexRegion<T>,
}

/// Splitter plan: how much horizontal energy to spend in each window, and
/// which windows that overdraws.
#[derive(Debug, Clone)]
pub struct SplitterPlan<T: Real> {
    pub window_spend: Vec<T>,
    pub overdrawn: Vec<bool>,
}

pub fn splitter_plan<T: Real>(derived: &DerivedParams<T>, overdraw_fraction: T) -> SplitterPlan<T> {
    let mut remaining = derived.sigma1_sq;
    let mut window_spend = Vec::with_capacity(derived.sigma_i1_sq.len());
    let mut overdrawn = Vec::with_capacity(derived.sigma_i1_sq.len());
    for sigma_sq in &derived.sigma_i1_sq {
        let spend = ((T::one() + overdraw_fraction) * *sigma_sq).min(remaining);
        remaining = remaining - spend;
        overdrawn.push(spend > *sigma_sq);
        window_spend.push(spend);
    }
    SplitterPlan {
        window_spend,
        overdrawn,
    }
}

/// A policy instance: the selected kind plus whatever run state it needs.
#[derive(Debug, Clone)]
pub struct EvaderPolicy<T: Real> {
    pub kind: PolicyKind<T>,
    rng: Rng,
    plan: Option<SplitterPlan<T>>,
    zig: bool,
    hugger: Option<HuggerState<T>>,
}

#[derive(Debug, Clone)]
struct HuggerState<T: Real> {
    param: T,
    direction: T,
}

impl<T: Real> EvaderPolicy<T> {
    pub fn new(kind: PolicyKind<T>, seed: u64) -> Self {
        Self {
            kind,
            rng: Rng::new(seed).derive(0x6576616465), // per-policy stream
            plan: None,
            zig: false,
            hugger: None,
        }
    }

    pub fn plan(&mut self, derived: &DerivedParams<T>) -> Option<&SplitterPlan<T>> {
        if let PolicyKind::WindowSplitter { overdraw_fraction } = self.kind {
            if self.plan.is_none() {
                self.plan = Some(splitter_plan(derived, overdraw_fraction));
            }
            self.plan.as_ref()
        } else {
            None
        }
    }

    /// Raw control proposal for the coming span. The engine clamps it to
    /// budget and region afterwards.
    pub fn control(&mut self, view: &PolicyView<'_, T>) -> Vec2<T> {
        match self.kind {
            PolicyKind::Idle => Vec2::zero(),
            PolicyKind::RandomAdmissible => self.random_control(view),
            PolicyKind::GreedyFlee => flee_control(view),
            PolicyKind::WindowSplitter { overdraw_fraction } => {
                if self.plan.is_none() {
                    self.plan = Some(splitter_plan(view.derived, overdraw_fraction));
                }
                let flip = self.zig;
                self.zig = !self.zig;
                splitter_control(self.plan.as_ref().unwrap(), view, flip)
            }
            PolicyKind::BoundaryHugger => self.hugger_control(view),
        }
    }

    fn random_control(&mut self, view: &PolicyView<'_, T>) -> Vec2<T> {
        // Amplitude that exhausts a budget in about a quarter horizon, so
        // the ledger clamp genuinely engages in long runs.
        let scale = |budget: T| {
            (budget / view.derived.t_bound.max(real(1e-12))).sqrt() * real(2.0)
        };
        let ax = scale(view.evader.ledger.budget_sq[0]);
        let ay = scale(view.evader.ledger.budget_sq[1]);
        Vec2::new(
            ax * real(self.rng.range(-1.0, 1.0)),
            ay * real(self.rng.range(-1.0, 1.0)),
        )
    }

    fn hugger_control(&mut self, view: &PolicyView<'_, T>) -> Vec2<T> {
        let d_half = view.derived.d * real(0.5);
        let limit = d_half * real(HUGGER_X_LIMIT);
        let state = self.hugger.get_or_insert_with(|| HuggerState {
            param: real(self.rng.range(0.0, 1.0)),
            direction: real(self.rng.sign()),
        });
        // Keep the walk away from the diametral vertices, where freezing on
        // the band is a terminal corner rather than a useful stress.
        let step = real::<T>(0.01);
        for _ in 0..200 {
            let probe = view.region.boundary_point(state.param.fract());
            if probe.x.abs() <= limit {
                break;
            }
            state.param = (state.param + state.direction * step).fract();
        }
        let target = view.region.boundary_point(state.param.fract());
        if view.evader.position.dist(target) < view.derived.d * real(0.01) {
            state.param = (state.param + state.direction * step).fract();
            let next = view.region.boundary_point(state.param.fract());
            if next.x.abs() > limit {
                state.direction = -state.direction;
                state.param = (state.param + state.direction * (step + step)).fract();
            }
        }
        let target = view.region.boundary_point(state.param.fract());
        steer_towards(view, target)
    }
}

/// Flee the active pursuer (or the nearest one before any window opens),
/// spending what is left of each budget uniformly over the horizon.
fn flee_control<T: Real>(view: &PolicyView<'_, T>) -> Vec2<T> {
    let source = view
        .active
        .map(|i| view.pursuers[i].position)
        .or_else(|| {
            view.pursuers
                .iter()
                .map(|p| p.position)
                .min_by(|a, b| {
                    let da = view.evader.position.dist_sq(*a);
                    let db = view.evader.position.dist_sq(*b);
                    da.partial_cmp(&db).unwrap()
                })
        });
    let Some(source) = source else {
        return Vec2::zero();
    };
    let away = view.evader.position - source;
    let norm = away.norm();
    if norm == T::zero() {
        return Vec2::zero();
    }
    budgeted_direction(view, away.scaled(T::one() / norm))
}

fn steer_towards<T: Real>(view: &PolicyView<'_, T>, target: Vec2<T>) -> Vec2<T> {
    let to = target - view.evader.position;
    let norm = to.norm();
    if norm == T::zero() {
        return Vec2::zero();
    }
    budgeted_direction(view, to.scaled(T::one() / norm))
}

/// Scale a unit direction so each coordinate's remaining energy is spent
/// uniformly over the time left of the worst-case horizon.
fn budgeted_direction<T: Real>(view: &PolicyView<'_, T>, dir: Vec2<T>) -> Vec2<T> {
    let left = (view.derived.t_bound - view.t).max(view.span);
    let mut speed = T::infinity();
    for (axis, component) in [dir.x, dir.y].into_iter().enumerate() {
        if component.abs() > real(1e-12) {
            let cap = (view.evader.ledger.remaining(axis) / left).sqrt() / component.abs();
            speed = speed.min(cap);
        }
    }
    if !speed.is_finite() {
        return Vec2::zero();
    }
    dir.scaled(speed)
}

/// The splitter's step control: during the first part of the active mirror
/// window, emit the horizontal rate that lands the planned spend exactly,
/// re-derived each step from the window's measured energy. The sign
/// alternates so there is no net drift, except that a step which would run
/// into the boundary flips toward the roomier side — a clamped step would
/// silently shave the spend.
fn splitter_control<T: Real>(
    plan: &SplitterPlan<T>,
    view: &PolicyView<'_, T>,
    flip: bool,
) -> Vec2<T> {
    let Some(i) = view.active else {
        return Vec2::zero();
    };
    let machine = &view.machines[i];
    if machine.phase != Phase::MirrorAndDrive {
        return Vec2::zero();
    }
    let (Some(theta), Some(tau)) = (machine.window_start, machine.tau_i1) else {
        return Vec2::zero();
    };
    let span_end = theta + tau + view.derived.t_i2[i] * real(SPLITTER_SPAN_FRACTION);
    let left = span_end - view.t;
    if left <= T::zero() {
        return Vec2::zero();
    }
    let want = plan.window_spend[i] - machine.window_v1_energy;
    if want <= T::zero() {
        return Vec2::zero();
    }
    let power = want / left.max(view.span);
    let magnitude = power.sqrt();
    let base_sign = if view.evader.position.x > T::zero() {
        -T::one()
    } else {
        T::one()
    };
    let sign = if flip { -base_sign } else { base_sign };
    let u = Vec2::new(sign * magnitude, T::zero());
    let room = |dir: Vec2<T>| {
        view.region
            .exit_time(view.evader.position, dir, view.span + view.span)
            .unwrap_or(view.span + view.span)
    };
    if room(u) < view.span && room(-u) > room(u) {
        return -u;
    }
    u
}

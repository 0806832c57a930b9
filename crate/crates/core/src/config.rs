//! Game configuration and the derived parameters of the pursuit
//! construction.
//!
//! Budgets are configured as squared quantities (energies), matching how
//! they are consumed; storing the square roots would invite repeated
//! squaring error. The sufficiency condition for the capture guarantee is
//! that on some coordinate the pursuers' summed energy strictly exceeds the
//! evader's. `validate` picks that coordinate (the *chase axis*), rotates
//! the world into the diametral frame of the region, and computes every
//! derived quantity the strategy and the engine need.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexRegion, Frame, RegionMetrics};
use crate::scalar::{real, Real};
use crate::vec2::Vec2;

/// One pursuer's initial condition: world position and per-coordinate
/// squared energy budgets.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PursuerSetup<T: Real> {
    pub position: Vec2<T>,
    pub budgets_sq: [T; 2],
}

/// The evader's initial condition.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EvaderSetup<T: Real> {
    pub position: Vec2<T>,
    pub budgets_sq: [T; 2],
}

/// Full game description. Positions are world coordinates; `validate`
/// transforms them into the diametral frame.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct GameConfig<T: Real> {
    pub region: ConvexRegion<T>,
    pub pursuers: Vec<PursuerSetup<T>>,
    pub evader: EvaderSetup<T>,
    /// Time step; defaults to 1e-2 · min(t_i1, positive t_i2).
    pub dt: Option<T>,
    /// Capture distance; defaults to 1e-6 · d.
    pub capture_tol: Option<T>,
    /// Boundary band half-width in world units; defaults to 1e-7.
    pub boundary_tol: Option<T>,
    pub rng_seed: u64,
    /// Run even when the sufficiency condition fails on both axes. No
    /// capture guarantee is asserted for such runs.
    pub exploratory: bool,
}

/// Which user coordinate funds the chase stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChaseAxis {
    First,
    Second,
}

impl ChaseAxis {
    pub fn index(self) -> usize {
        match self {
            ChaseAxis::First => 1,
            ChaseAxis::Second => 2,
        }
    }
}

/// Everything computed from a validated configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DerivedParams<T: Real> {
    /// Coordinate on which the sufficiency condition is used.
    pub axis: ChaseAxis,
    /// Whether the condition actually holds there (false only in
    /// exploratory runs).
    pub hypothesis_holds: bool,
    /// Diameter of the region.
    pub d: T,
    /// Max |η| over the region in the diametral frame.
    pub c: T,
    /// Sum of chase-coordinate budgets over the pursuers.
    pub rho1_sq: T,
    /// Evader budget on the chase coordinate.
    pub sigma1_sq: T,
    /// Per-pursuer share of the evader's chase budget,
    /// σ_i1² = σ1² · ρ_i1² / ρ1².
    pub sigma_i1_sq: Vec<T>,
    /// Duration of the pre-alignment maneuver (0 when every pursuer starts
    /// on the diametral axis).
    pub t_pre: T,
    /// Vertical budgets available after pre-alignment: 3/4 of the physical
    /// budget when pre-alignment runs, the full budget otherwise.
    pub rho_i2_eff_sq: Vec<T>,
    /// Chase-stage durations t_i1 = d² / (ρ_i1² − σ_i1²).
    pub t_i1: Vec<T>,
    /// Drive-stage durations t_i2 = c² / ρ_i2,eff².
    pub t_i2: Vec<T>,
    /// Worst-case window start times (realized starts can only be earlier).
    pub theta_upper: Vec<T>,
    /// Worst-case total duration: t_pre + Σ (t_i1 + t_i2).
    pub t_bound: T,
    /// Resolved time step.
    pub dt: T,
    /// Resolved capture distance.
    pub capture_tol: T,
    /// Resolved boundary band half-width.
    pub boundary_tol: T,
    /// The region is a segment (c = 0): the drive stage collapses and
    /// capture coincides with the chase-stage crossing.
    pub c_degenerate: bool,
}

/// Validated game: original config, frame, region metrics, derived
/// parameters, and the initial state expressed in frame coordinates with
/// chase-first budget ordering.
#[derive(Debug, Clone)]
pub struct Prepared<T: Real> {
    pub config: GameConfig<T>,
    pub frame: Frame<T>,
    pub metrics: RegionMetrics<T>,
    pub derived: DerivedParams<T>,
    /// Region re-expressed in frame coordinates (diametral pair on the
    /// x-axis). All simulation happens here.
    pub region: ConvexRegion<T>,
    /// Pursuer start positions, frame coordinates.
    pub pursuer_start: Vec<Vec2<T>>,
    /// Pursuer budgets reordered so index 0 is the chase coordinate.
    pub pursuer_budgets: Vec<[T; 2]>,
    pub evader_start: Vec2<T>,
    pub evader_budgets: [T; 2],
}

/// Swap budget coordinates when the chase runs on the user's second axis,
/// so the rest of the code always works with the chase on index 0.
fn reorder<T: Real>(b: [T; 2], axis: ChaseAxis) -> [T; 2] {
    match axis {
        ChaseAxis::First => b,
        ChaseAxis::Second => [b[1], b[0]],
    }
}

/// Check invariants and compute every derived quantity.
pub fn validate<T: Real>(config: GameConfig<T>) -> Result<Prepared<T>> {
    config.region.validate()?;
    if config.pursuers.is_empty() {
        return Err(Error::config("at least one pursuer is required"));
    }
    for (i, p) in config.pursuers.iter().enumerate() {
        if p.budgets_sq[0] <= T::zero() || p.budgets_sq[1] <= T::zero() {
            return Err(Error::config(format!(
                "pursuer {} budgets must be strictly positive",
                i + 1
            )));
        }
    }
    if config.evader.budgets_sq[0] <= T::zero() || config.evader.budgets_sq[1] <= T::zero() {
        return Err(Error::config("evader budgets must be strictly positive"));
    }
    if let Some(dt) = config.dt {
        if dt <= T::zero() {
            return Err(Error::config("dt must be positive"));
        }
    }
    if let Some(tol) = config.capture_tol {
        if tol <= T::zero() {
            return Err(Error::config("capture_tol must be positive"));
        }
    }
    if let Some(tol) = config.boundary_tol {
        if tol <= T::zero() {
            return Err(Error::config("boundary_tol must be positive"));
        }
    }
    let boundary_tol = config.boundary_tol.unwrap_or_else(|| real(1e-7));

    for (i, p) in config.pursuers.iter().enumerate() {
        if !config.region.contains(p.position, boundary_tol) {
            return Err(Error::config(format!(
                "pursuer {} starts outside the region",
                i + 1
            )));
        }
    }
    if !config.region.contains(config.evader.position, boundary_tol) {
        return Err(Error::config("evader starts outside the region"));
    }

    let (metrics, frame) = config.region.metrics()?;
    let d = metrics.d;
    let c = metrics.c;

    // Sufficiency margins per user coordinate.
    let sum_sq = |j: usize| {
        config
            .pursuers
            .iter()
            .fold(T::zero(), |acc, p| acc + p.budgets_sq[j])
    };
    let margin1 = sum_sq(0) - config.evader.budgets_sq[0];
    let margin2 = sum_sq(1) - config.evader.budgets_sq[1];
    let hypothesis_holds = margin1 > T::zero() || margin2 > T::zero();
    if !hypothesis_holds && !config.exploratory {
        return Err(Error::HypothesisViolated {
            margin1: margin1.to_f64().unwrap_or(f64::NAN),
            margin2: margin2.to_f64().unwrap_or(f64::NAN),
        });
    }
    let axis = if margin2 > margin1 {
        ChaseAxis::Second
    } else {
        ChaseAxis::First
    };

    let m = config.pursuers.len();
    let pursuer_budgets: Vec<[T; 2]> = config
        .pursuers
        .iter()
        .map(|p| reorder(p.budgets_sq, axis))
        .collect();
    let evader_budgets = reorder(config.evader.budgets_sq, axis);

    let rho1_sq = pursuer_budgets
        .iter()
        .fold(T::zero(), |acc, b| acc + b[0]);
    let sigma1_sq = evader_budgets[0];
    let sigma_i1_sq: Vec<T> = pursuer_budgets
        .iter()
        .map(|b| sigma1_sq * b[0] / rho1_sq)
        .collect();

    let pursuer_start: Vec<Vec2<T>> = config
        .pursuers
        .iter()
        .map(|p| frame.to_frame(p.position))
        .collect();
    let evader_start = frame.to_frame(config.evader.position);

    // Pre-alignment: drive every pursuer's η to zero; duration driven by
    // the worst ratio of squared offset to vertical budget.
    let t_pre = pursuer_start
        .iter()
        .zip(&pursuer_budgets)
        .map(|(p, b)| real::<T>(4.0) * p.y * p.y / b[1])
        .fold(T::zero(), T::max);
    let prealign_used = t_pre > T::zero();

    let rho_i2_eff_sq: Vec<T> = pursuer_budgets
        .iter()
        .map(|b| {
            if prealign_used {
                b[1] * real(0.75)
            } else {
                b[1]
            }
        })
        .collect();

    let t_i1: Vec<T> = (0..m)
        .map(|i| {
            let denom = pursuer_budgets[i][0] - sigma_i1_sq[i];
            if denom > T::zero() {
                d * d / denom
            } else {
                // Exploratory pacing only: the condition failed, so no
                // denominator is available; chase on half the budget.
                d * d / (pursuer_budgets[i][0] * real(0.5))
            }
        })
        .collect();
    let c_degenerate = c == T::zero();
    let t_i2: Vec<T> = (0..m).map(|i| c * c / rho_i2_eff_sq[i]).collect();

    let mut theta_upper = Vec::with_capacity(m);
    let mut acc = t_pre;
    for i in 0..m {
        theta_upper.push(acc);
        acc = acc + t_i1[i] + t_i2[i];
    }
    let t_bound = acc;

    let capture_tol = config.capture_tol.unwrap_or_else(|| real::<T>(1e-6) * d);
    let dt = config.dt.unwrap_or_else(|| {
        let min_time = t_i1
            .iter()
            .chain(t_i2.iter())
            .copied()
            .filter(|t| *t > T::zero())
            .fold(T::infinity(), T::min);
        real::<T>(1e-2) * min_time
    });
    if !(dt > T::zero() && dt.is_finite()) {
        return Err(Error::config("resolved dt is not positive and finite"));
    }

    // Simulate in frame coordinates: re-express the region there once.
    let region = region_in_frame(&config.region, &frame);

    let derived = DerivedParams {
        axis,
        hypothesis_holds,
        d,
        c,
        rho1_sq,
        sigma1_sq,
        sigma_i1_sq,
        t_pre,
        rho_i2_eff_sq,
        t_i1,
        t_i2,
        theta_upper,
        t_bound,
        dt,
        capture_tol,
        boundary_tol,
        c_degenerate,
    };

    Ok(Prepared {
        config,
        frame,
        metrics,
        derived,
        region,
        pursuer_start,
        pursuer_budgets,
        evader_start,
        evader_budgets,
    })
}

/// The region as seen in frame coordinates.
fn region_in_frame<T: Real>(region: &ConvexRegion<T>, frame: &Frame<T>) -> ConvexRegion<T> {
    match region {
        ConvexRegion::Polygon { vertices } => ConvexRegion::Polygon {
            vertices: vertices.iter().map(|v| frame.to_frame(*v)).collect(),
        },
        ConvexRegion::Ellipse {
            center,
            semi_axes,
            rotation,
        } => ConvexRegion::Ellipse {
            center: frame.to_frame(*center),
            semi_axes: *semi_axes,
            rotation: *rotation + frame.rotation,
        },
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    type Cfg = GameConfig<f64>;
    type P = Vec2<f64>;

    pub fn golden_config() -> Cfg {
        GameConfig {
            region: ConvexRegion::Ellipse {
                center: P::new(0.0, 0.0),
                semi_axes: [3.0, 2.0],
                rotation: 0.0,
            },
            pursuers: vec![
                PursuerSetup {
                    position: P::new(-2.9, 0.4),
                    budgets_sq: [1.0, 1.0],
                },
                PursuerSetup {
                    position: P::new(2.0, -1.0),
                    budgets_sq: [1.21, 1.0],
                },
            ],
            evader: EvaderSetup {
                position: P::new(0.5, 0.5),
                budgets_sq: [2.0, 2.5],
            },
            dt: None,
            capture_tol: None,
            boundary_tol: None,
            rng_seed: 1,
            exploratory: false,
        }
    }

    #[test]
    fn golden_example_derived_values() {
        let prepared = validate(golden_config()).unwrap();
        let dv = &prepared.derived;
        assert_eq!(dv.axis, ChaseAxis::First);
        assert_eq!(dv.d, 6.0);
        assert_eq!(dv.c, 2.0);
        // σ_i1² computed against an independent evaluation of the same
        // closed forms at full precision: 2·1/2.21 and 2·1.21/2.21.
        let s11 = 200.0 / 221.0;
        let s21 = 242.0 / 221.0;
        assert!((dv.sigma_i1_sq[0] - s11).abs() / s11 < 1e-12);
        assert!((dv.sigma_i1_sq[1] - s21).abs() / s21 < 1e-12);
        let sum: f64 = dv.sigma_i1_sq.iter().sum();
        assert!((sum - 2.0).abs() / 2.0 < 1e-9);
        // t_i1 = d² / (ρ_i1² − σ_i1²)
        let t11 = 36.0 / (1.0 - s11);
        let t21 = 36.0 / (1.21 - s21);
        assert!((dv.t_i1[0] - t11).abs() / t11 < 1e-9);
        assert!((dv.t_i1[1] - t21).abs() / t21 < 1e-9);
    }

    #[test]
    fn equality_of_budgets_is_rejected() {
        let mut cfg = golden_config();
        cfg.evader.budgets_sq = [2.21, 2.5]; // exactly Σ ρ_i1², margin 0
        match validate(cfg) {
            Err(Error::HypothesisViolated { .. }) => {}
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
    }

    #[test]
    fn exploratory_mode_accepts_violated_hypothesis() {
        let mut cfg = golden_config();
        cfg.evader.budgets_sq = [5.0, 5.0];
        cfg.exploratory = true;
        let prepared = validate(cfg).unwrap();
        assert!(!prepared.derived.hypothesis_holds);
        assert!(prepared.derived.t_i1.iter().all(|t| t.is_finite() && *t > 0.0));
    }

    #[test]
    fn axis_two_selected_on_larger_margin() {
        let mut cfg = golden_config();
        // Tip the balance: huge vertical budgets, tiny vertical evader.
        cfg.pursuers[0].budgets_sq = [1.0, 8.0];
        cfg.pursuers[1].budgets_sq = [1.21, 8.0];
        cfg.evader.budgets_sq = [2.0, 1.0];
        let prepared = validate(cfg).unwrap();
        assert_eq!(prepared.derived.axis, ChaseAxis::Second);
        // Chase-first ordering: coordinate 0 of the internal budgets is the
        // user's second coordinate.
        assert_eq!(prepared.pursuer_budgets[0], [8.0, 1.0]);
        assert_eq!(prepared.evader_budgets, [1.0, 2.0]);
        assert_eq!(prepared.derived.rho1_sq, 16.0);
    }

    #[test]
    fn prealign_duration_max_rule() {
        // Two pursuers with vertical offsets 1 and 2, vertical budgets 4:
        // T = max(4·1/4, 4·4/4) = 4.
        let cfg = GameConfig {
            region: ConvexRegion::Ellipse {
                center: P::new(0.0, 0.0),
                semi_axes: [5.0, 3.0],
                rotation: 0.0,
            },
            pursuers: vec![
                PursuerSetup {
                    position: P::new(-1.0, 1.0),
                    budgets_sq: [8.0, 4.0],
                },
                PursuerSetup {
                    position: P::new(1.0, 2.0),
                    budgets_sq: [8.0, 4.0],
                },
            ],
            evader: EvaderSetup {
                position: P::new(0.0, 0.0),
                budgets_sq: [1.0, 1.0],
            },
            dt: None,
            capture_tol: None,
            boundary_tol: None,
            rng_seed: 0,
            exploratory: false,
        };
        let prepared = validate(cfg).unwrap();
        assert!((prepared.derived.t_pre - 4.0).abs() < 1e-12);
        // Pre-alignment in use: effective vertical budgets are rescaled.
        assert_eq!(prepared.derived.rho_i2_eff_sq, vec![3.0, 3.0]);
    }

    #[test]
    fn prealign_skipped_when_on_axis() {
        let mut cfg = golden_config();
        cfg.pursuers[0].position = P::new(-2.8, 0.0);
        cfg.pursuers[1].position = P::new(2.0, 0.0);
        let prepared = validate(cfg).unwrap();
        assert_eq!(prepared.derived.t_pre, 0.0);
        assert_eq!(prepared.derived.rho_i2_eff_sq, vec![1.0, 1.0]);
    }

    #[test]
    fn positions_outside_region_rejected() {
        let mut cfg = golden_config();
        cfg.pursuers[0].position = P::new(10.0, 10.0);
        assert!(matches!(validate(cfg), Err(Error::Config(_))));
    }

    #[test]
    fn nonpositive_budget_rejected() {
        let mut cfg = golden_config();
        cfg.evader.budgets_sq = [0.0, 1.0];
        assert!(matches!(validate(cfg), Err(Error::Config(_))));
    }

    #[test]
    fn chase_spend_equals_budget_minus_share() {
        // Constant rate d/t_i1 held for t_i1 consumes d²/t_i1, which the
        // construction makes exactly ρ_i1² − σ_i1².
        let prepared = validate(golden_config()).unwrap();
        let dv = &prepared.derived;
        for i in 0..2 {
            let rate = dv.d / dv.t_i1[i];
            let mut ledger =
                crate::ledger::EnergyLedger::new(prepared.pursuer_budgets[i]);
            let steps = 1000;
            for _ in 0..steps {
                ledger
                    .charge(Vec2::new(rate, 0.0), dv.t_i1[i] / steps as f64)
                    .unwrap();
            }
            let expected = prepared.pursuer_budgets[i][0] - dv.sigma_i1_sq[i];
            assert!(
                (ledger.consumed[0] - expected).abs() < 1e-12,
                "pursuer {i}: {} vs {expected}",
                ledger.consumed[0]
            );
        }
    }

    #[test]
    fn share_ratio_is_constant_across_pursuers() {
        let prepared = validate(golden_config()).unwrap();
        let dv = &prepared.derived;
        let r0 = dv.sigma_i1_sq[0] / prepared.pursuer_budgets[0][0];
        let r1 = dv.sigma_i1_sq[1] / prepared.pursuer_budgets[1][0];
        assert!((r0 - r1).abs() < 1e-15);
        assert!((r0 - dv.sigma1_sq / dv.rho1_sq).abs() < 1e-15);
    }
}

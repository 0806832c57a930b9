//! Randomized scenario generation for the verification battery.

use crate::config::PursuerSetup;
use crate::evader::PolicyKind;
use crate::geometry::ConvexRegion;
use crate::rng::Rng;
use crate::scenario::{EvaderScenario, Scenario, SCHEMA_VERSION};
use crate::vec2::Vec2;

/// Keep runs bounded: if the default resolution would take more grid steps
/// than this, coarsen dt to hit it.
pub const MAX_STEPS_PER_RUN: f64 = 60_000.0;

type P = Vec2<f64>;

/// Strictly convex polygon: sorted angles on a random ellipse. Points on a
/// strictly convex curve are automatically in convex position; a minimum
/// angular gap keeps consecutive edges from degenerating.
pub fn random_polygon(rng: &mut Rng, n: usize) -> ConvexRegion<f64> {
    loop {
        let cx = rng.range(-5.0, 5.0);
        let cy = rng.range(-5.0, 5.0);
        let a = rng.range(0.8, 6.0);
        let b = rng.range(0.8, 6.0);
        let rot = rng.range(0.0, std::f64::consts::TAU);
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.range(0.0, std::f64::consts::TAU))
            .collect();
        angles.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let min_gap = angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(angles[0] + std::f64::consts::TAU - angles[n - 1], f64::min);
        if min_gap < 2e-2 {
            continue;
        }
        let vertices: Vec<P> = angles
            .iter()
            .map(|t| P::new(a * t.cos(), b * t.sin()).rotated(rot) + P::new(cx, cy))
            .collect();
        let region = ConvexRegion::Polygon { vertices };
        if region.validate().is_ok() {
            return region;
        }
    }
}

pub fn random_region(rng: &mut Rng) -> ConvexRegion<f64> {
    if rng.f64() < 0.5 {
        ConvexRegion::Ellipse {
            center: P::new(rng.range(-5.0, 5.0), rng.range(-5.0, 5.0)),
            semi_axes: [rng.range(0.8, 6.0), rng.range(0.8, 6.0)],
            rotation: rng.range(0.0, std::f64::consts::TAU),
        }
    } else {
        let n = rng.int(5, 16) as usize;
        random_polygon(rng, n)
    }
}

/// Draw a scenario whose budgets satisfy the sufficiency condition with at
/// least 5% relative margin on one coordinate. The other coordinate is left
/// free — sometimes comfortable, sometimes violated — to exercise the axis
/// selection.
pub fn sample_scenario(rng: &mut Rng) -> Scenario<f64> {
    loop {
        let region = random_region(rng);
        let m = rng.int(1, 5) as usize;
        let chase_axis = rng.int(0, 1) as usize;

        let mut pursuers = Vec::with_capacity(m);
        let mut sums = [0.0, 0.0];
        for _ in 0..m {
            let budgets = [rng.range(0.5, 3.0), rng.range(0.5, 3.0)];
            sums[0] += budgets[0];
            sums[1] += budgets[1];
            pursuers.push(PursuerSetup {
                position: region.sample_interior(rng),
                budgets_sq: budgets,
            });
        }
        let mut evader_budgets = [0.0, 0.0];
        evader_budgets[chase_axis] = sums[chase_axis] * rng.range(0.30, 0.95);
        // Stay clear of near-equality on the free axis: its margin would
        // otherwise win the axis selection with an arbitrarily long chase.
        evader_budgets[1 - chase_axis] = sums[1 - chase_axis]
            * if rng.f64() < 0.5 {
                rng.range(0.30, 0.90)
            } else {
                rng.range(1.05, 1.40)
            };

        let scenario = Scenario {
            schema: SCHEMA_VERSION,
            region,
            pursuers,
            evader: EvaderScenario {
                position: Vec2::zero(), // set below, inside the region
                budgets_sq: evader_budgets,
                policy: PolicyKind::Idle,
            },
            dt: None,
            capture_tol: None,
            boundary_tol: None,
            rng_seed: rng.next_u64(),
            exploratory: false,
        };
        let mut scenario = scenario;
        scenario.evader.position = scenario.region.sample_interior(rng);

        match scenario.prepare() {
            Ok(prepared) => {
                // Coarsen dt when the default resolution would make the
                // horizon unreasonably many steps.
                let steps = prepared.derived.t_bound / prepared.derived.dt;
                if steps > MAX_STEPS_PER_RUN {
                    scenario.dt = Some(prepared.derived.t_bound / MAX_STEPS_PER_RUN);
                    if scenario.prepare().is_err() {
                        continue;
                    }
                }
                return scenario;
            }
            Err(_) => continue,
        }
    }
}

/// Pinned near-boundary scenarios: 0.1% sufficiency margin and an explicit
/// coarse dt, covering the regime the random sampler deliberately avoids.
pub fn tight_margin_scenarios() -> Vec<Scenario<f64>> {
    let mut out = Vec::new();

    // Two pursuers on the golden ellipse.
    let sums = 1.0 + 1.21;
    let mut s = crate::scenario::golden_scenario();
    s.evader.budgets_sq = [sums * 0.999, 2.5];
    s.rng_seed = 101;
    out.push(s);

    // One pursuer on a circle.
    out.push(Scenario {
        schema: SCHEMA_VERSION,
        region: ConvexRegion::Ellipse {
            center: P::new(1.0, -1.0),
            semi_axes: [2.0, 2.0],
            rotation: 0.0,
        },
        pursuers: vec![PursuerSetup {
            position: P::new(0.0, -1.5),
            budgets_sq: [1.0, 1.0],
        }],
        evader: EvaderScenario {
            position: P::new(2.0, -0.5),
            budgets_sq: [0.999, 1.5],
            policy: PolicyKind::Idle,
        },
        dt: None,
        capture_tol: None,
        boundary_tol: None,
        rng_seed: 102,
        exploratory: false,
    });

    // Three pursuers on a pentagon.
    out.push(Scenario {
        schema: SCHEMA_VERSION,
        region: ConvexRegion::Polygon {
            vertices: vec![
                P::new(-3.0, -1.0),
                P::new(0.5, -2.0),
                P::new(3.0, 0.0),
                P::new(1.0, 2.5),
                P::new(-2.0, 2.0),
            ],
        },
        pursuers: vec![
            PursuerSetup {
                position: P::new(-2.0, 0.0),
                budgets_sq: [0.8, 1.0],
            },
            PursuerSetup {
                position: P::new(0.0, 1.0),
                budgets_sq: [1.0, 0.7],
            },
            PursuerSetup {
                position: P::new(1.5, 0.5),
                budgets_sq: [1.2, 0.9],
            },
        ],
        evader: EvaderScenario {
            position: P::new(0.0, -1.0),
            budgets_sq: [3.0 * 0.999, 1.0],
            policy: PolicyKind::Idle,
        },
        dt: None,
        capture_tol: None,
        boundary_tol: None,
        rng_seed: 103,
        exploratory: false,
    });

    // The default dt would resolve the enormous chase times; pin a coarse
    // one that keeps the step count near the cap instead.
    for s in &mut out {
        let prepared = s.prepare().expect("pinned scenario must validate");
        let steps = prepared.derived.t_bound / prepared.derived.dt;
        if steps > MAX_STEPS_PER_RUN {
            s.dt = Some(prepared.derived.t_bound / MAX_STEPS_PER_RUN);
            s.prepare().expect("coarsened pinned scenario must validate");
        }
    }
    out
}

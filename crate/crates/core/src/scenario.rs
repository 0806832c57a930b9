//! Scenario files: a single JSON document describing the region, the
//! players, their squared-energy budgets, the evader policy, and the run
//! parameters. See `docs/scenario-schema.md` for the format; the golden
//! ellipse scenario in `scenarios/` is the canonical sample.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{EvaderSetup, GameConfig, Prepared, PursuerSetup};
use crate::error::{Error, Result};
use crate::evader::{EvaderPolicy, PolicyKind};
use crate::geometry::ConvexRegion;
use crate::scalar::Real;
use crate::vec2::Vec2;

pub const SCHEMA_VERSION: u32 = 1;

/// The evader entry: initial state plus the policy, with the policy's
/// fields inlined (`"kind": "window_splitter", "overdraw_fraction": 0.05`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EvaderScenario<T: Real> {
    pub position: Vec2<T>,
    pub budgets_sq: [T; 2],
    #[serde(flatten)]
    pub policy: PolicyKind<T>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Scenario<T: Real> {
    pub schema: u32,
    pub region: ConvexRegion<T>,
    pub pursuers: Vec<PursuerSetup<T>>,
    pub evader: EvaderScenario<T>,
    /// Seconds; omit for the resolution-scaled default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<T>,
    /// World lengths; omit for 1e-6 · diameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capture_tol: Option<T>,
    /// World lengths; omit for 1e-7.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_tol: Option<T>,
    pub rng_seed: u64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exploratory: bool,
}

impl<T: Real> Scenario<T> {
    pub fn from_json(text: &str) -> Result<Self> {
        let scenario: Scenario<T> = serde_json::from_str(text)?;
        if scenario.schema != SCHEMA_VERSION {
            return Err(Error::config(format!(
                "unsupported scenario schema {} (expected {SCHEMA_VERSION})",
                scenario.schema
            )));
        }
        Ok(scenario)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn to_config(&self) -> GameConfig<T> {
        GameConfig {
            region: self.region.clone(),
            pursuers: self.pursuers.clone(),
            evader: EvaderSetup {
                position: self.evader.position,
                budgets_sq: self.evader.budgets_sq,
            },
            dt: self.dt,
            capture_tol: self.capture_tol,
            boundary_tol: self.boundary_tol,
            rng_seed: self.rng_seed,
            exploratory: self.exploratory,
        }
    }

    /// Validate and derive everything needed to run.
    pub fn prepare(&self) -> Result<Prepared<T>> {
        crate::config::validate(self.to_config())
    }

    /// The policy instance, deterministically seeded from the scenario.
    pub fn policy(&self) -> EvaderPolicy<T> {
        EvaderPolicy::new(self.evader.policy.clone(), self.rng_seed)
    }

    /// Same scenario with a different evader policy.
    pub fn with_policy(&self, policy: PolicyKind<T>) -> Self {
        let mut out = self.clone();
        out.evader.policy = policy;
        out
    }
}

/// The worked two-pursuer example on the 3×2 ellipse. Budgets on the first
/// coordinate are 1 and 1.21 against the evader's 2, so the chase runs
/// there; the starting layout makes the 5% window splitter overdraw and
/// lose window 1 while pursuer 2 still captures.
pub fn golden_scenario() -> Scenario<f64> {
    Scenario {
        schema: SCHEMA_VERSION,
        region: ConvexRegion::Ellipse {
            center: Vec2::new(0.0, 0.0),
            semi_axes: [3.0, 2.0],
            rotation: 0.0,
        },
        pursuers: vec![
            PursuerSetup {
                position: Vec2::new(-2.9, 0.4),
                budgets_sq: [1.0, 1.0],
            },
            PursuerSetup {
                position: Vec2::new(2.0, -1.0),
                budgets_sq: [1.21, 1.0],
            },
        ],
        evader: EvaderScenario {
            position: Vec2::new(0.5, 0.5),
            budgets_sq: [2.0, 2.5],
            policy: PolicyKind::Idle,
        },
        dt: None,
        capture_tol: None,
        boundary_tol: None,
        rng_seed: 2024,
        exploratory: false,
    }
}

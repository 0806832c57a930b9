//! Per-coordinate energy accounting. Admissibility of a control is a
//! separate integral budget for each coordinate; the ledger is its discrete
//! enforcement: every applied control charges `u_j^2 * dt` against the
//! budget for coordinate j.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use crate::vec2::Vec2;

/// Relative round-off allowance on budgets. Anything past this is a hard
/// failure, not discretization noise.
pub const ENERGY_SLACK_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EnergyLedger<T: Real> {
    /// Energy consumed so far per coordinate.
    pub consumed: [T; 2],
    /// Squared-quantity budgets per coordinate.
    pub budget_sq: [T; 2],
}

impl<T: Real> EnergyLedger<T> {
    pub fn new(budget_sq: [T; 2]) -> Self {
        Self {
            consumed: [T::zero(), T::zero()],
            budget_sq,
        }
    }

    fn cap(&self, axis: usize) -> T {
        self.budget_sq[axis] * (T::one() + real(ENERGY_SLACK_REL))
    }

    /// Unspent energy on a coordinate, never negative.
    pub fn remaining(&self, axis: usize) -> T {
        (self.budget_sq[axis] - self.consumed[axis]).max(T::zero())
    }

    /// Would applying `u` for `dt` push some coordinate past its budget
    /// (beyond the round-off allowance)?
    pub fn would_overdraw(&self, u: Vec2<T>, dt: T) -> bool {
        self.would_overdraw_axis(0, u.x, dt) || self.would_overdraw_axis(1, u.y, dt)
    }

    pub fn would_overdraw_axis(&self, axis: usize, u: T, dt: T) -> bool {
        self.consumed[axis] + u * u * dt > self.cap(axis)
    }

    /// Charge the ledger for applying `u` over `dt`. The caller is expected
    /// to have clamped or zeroed the control first; an overdraft here is an
    /// admissibility violation.
    pub fn charge(&mut self, u: Vec2<T>, dt: T) -> Result<()> {
        for (axis, uj) in [u.x, u.y].into_iter().enumerate() {
            let next = self.consumed[axis] + uj * uj * dt;
            if next > self.cap(axis) {
                return Err(Error::Overdraft {
                    axis: axis + 1,
                    consumed: next.to_f64().unwrap_or(f64::NAN),
                    budget: self.budget_sq[axis].to_f64().unwrap_or(f64::NAN),
                });
            }
            self.consumed[axis] = next;
        }
        Ok(())
    }

    /// Largest |u| on `axis` that stays within budget for `dt`.
    pub fn max_rate(&self, axis: usize, dt: T) -> T {
        (self.remaining(axis) / dt).max(T::zero()).sqrt()
    }
}

/// A player: current position (in frame coordinates) plus its ledger.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PlayerState<T: Real> {
    pub position: Vec2<T>,
    pub ledger: EnergyLedger<T>,
}

impl<T: Real> PlayerState<T> {
    pub fn new(position: Vec2<T>, budget_sq: [T; 2]) -> Self {
        Self {
            position,
            ledger: EnergyLedger::new(budget_sq),
        }
    }
}

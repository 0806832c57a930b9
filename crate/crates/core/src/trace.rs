//! Run recordings: the step-by-step trace (exportable as NDJSON or CSV)
//! and the capture report.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::DerivedParams;
use crate::error::Result;
use crate::geometry::Frame;
use crate::ledger::EnergyLedger;
use crate::scalar::Real;
use crate::strategy::{Phase, WindowOutcome};
use crate::vec2::Vec2;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PlayerRecord<T: Real> {
    pub position: Vec2<T>,
    pub control: Vec2<T>,
    pub energy: [T; 2],
}

/// One recorded instant: state at time `t`, with the controls that were in
/// effect over the interval ending at `t`. Rows are spaced `dt` apart
/// except where an event split the step.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct TraceStep<T: Real> {
    pub t: T,
    pub pursuers: Vec<PlayerRecord<T>>,
    pub evader: PlayerRecord<T>,
    pub active: Option<usize>,
    pub phase: Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    PrealignDone,
    WindowStart,
    Crossing,
    WindowFailed,
    BoundaryStop,
    Capture,
    BudgetExhausted,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Event<T: Real> {
    pub t: T,
    pub kind: EventKind,
    /// Pursuer the event concerns (0-based), if any.
    pub pursuer: Option<usize>,
    /// Event payload: τ_i1 for crossings, projection depth for safety-net
    /// boundary events, the exhausted coordinate for budget events.
    pub value: Option<T>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SimulationTrace<T: Real> {
    pub steps: Vec<TraceStep<T>>,
    pub events: Vec<Event<T>>,
}

impl<T: Real> SimulationTrace<T> {
    /// One JSON object per recorded step, newline-delimited.
    pub fn write_ndjson(&self, mut w: impl Write) -> Result<()> {
        for step in &self.steps {
            serde_json::to_writer(&mut w, step)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Flat CSV with the same columns as the NDJSON rows.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        let m = self.steps.first().map_or(0, |s| s.pursuers.len());
        let mut header = String::from("t,phase,active");
        for i in 1..=m {
            header.push_str(&format!(
                ",p{i}_x,p{i}_y,u{i}_1,u{i}_2,e{i}_1,e{i}_2"
            ));
        }
        header.push_str(",y_x,y_y,v_1,v_2,ev_1,ev_2\n");
        w.write_all(header.as_bytes())?;
        for step in &self.steps {
            let mut row = format!(
                "{:?},{:?},{}",
                step.t,
                step.phase,
                step.active.map_or(String::new(), |i| (i + 1).to_string())
            );
            for p in &step.pursuers {
                row.push_str(&format!(
                    ",{:?},{:?},{:?},{:?},{:?},{:?}",
                    p.position.x, p.position.y, p.control.x, p.control.y, p.energy[0], p.energy[1]
                ));
            }
            let e = &step.evader;
            row.push_str(&format!(
                ",{:?},{:?},{:?},{:?},{:?},{:?}\n",
                e.position.x, e.position.y, e.control.x, e.control.y, e.energy[0], e.energy[1]
            ));
            w.write_all(row.as_bytes())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct WindowReport<T: Real> {
    /// Realized window start θ_i, if the window was reached.
    pub theta: Option<T>,
    /// Realized crossing offset τ_i1.
    pub tau_i1: Option<T>,
    pub outcome: WindowOutcome,
    /// Evader horizontal energy measured over the mirror span.
    pub v1_energy: T,
    /// The allowance σ_i1² this window is compared against.
    pub sigma_i1_sq: T,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct CaptureReport<T: Real> {
    pub captured: bool,
    pub capture_time: Option<T>,
    /// 1-based index of the capturing pursuer.
    pub capturing_pursuer: Option<usize>,
    pub t_bound: T,
    pub windows: Vec<WindowReport<T>>,
    pub pursuer_ledgers: Vec<EnergyLedger<T>>,
    pub evader_ledger: EnergyLedger<T>,
    pub derived: DerivedParams<T>,
    /// The diametral frame the simulation (and the trace) lives in; maps
    /// world coordinates to trace coordinates.
    pub frame: Frame<T>,
    /// Safety-net projections back onto the region (count, worst depth).
    /// Zero for well-posed runs apart from round-off grazing.
    pub projections: usize,
    pub max_projection_depth: T,
    /// The sufficiency condition held, the evader was admissible, and yet
    /// no capture happened by the bound: a defect or a counterexample.
    pub guarantee_violated: bool,
}

impl<T: Real> CaptureReport<T> {
    pub fn write_json(&self, mut w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        Ok(())
    }
}

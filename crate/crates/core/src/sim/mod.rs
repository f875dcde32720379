//! Discrete-event simulation of hub-to-hub freight consolidation.

mod config;
mod dispatch;
mod engine;
mod kpi;
mod log;
mod shipment;

use thiserror::Error;

pub use config::ScenarioConfig;
pub use dispatch::{next_trigger_time, try_dispatch, QueuedShipment, Trigger, TruckCall};
pub use engine::{run_simulation, ShipmentOutcome, ShipmentStatus, SimResult, TruckTrip};
pub use kpi::{compare_runs, compute_kpis, delta_pct, format_delta, ComparisonReport, KpiReport};
pub use log::{write_event_log, Event, LogRecord};
pub use shipment::{generate_shipments, ServiceLevel, Shipment, ShipmentId};

use crate::discovery::DiscoveryError;
use crate::pathfinding::PathError;
use crate::policy::PolicyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid scenario configuration: {0}")]
    Config(String),
    #[error("invalid shipment {0}")]
    InvalidShipment(String),
    #[error("runs cannot be compared: {0}")]
    MismatchedScenarios(String),
    #[error("simulation stalled: {0}")]
    Stall(String),
    #[error(transparent)]
    Discovery(#[from] DiscoveryError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
}

//! Event log records, written one JSON object per line:
//! `{"time": .., "sequence": .., "kind": "..", "payload": {..}}`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ServiceLevel, ShipmentId, Trigger};
use crate::geo::Bearing;
use crate::network::HubId;
use crate::policy::{RoutingMode, ScoreBreakdown};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogRecord {
    pub time: f64,
    pub sequence: u64,
    #[serde(flatten)]
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "payload")]
pub enum Event {
    ShipmentCreated {
        shipment: ShipmentId,
        origin: HubId,
        destination: HubId,
        service_level: ServiceLevel,
        deadline: f64,
        /// Precomputed shortest path; baseline mode only.
        #[serde(skip_serializing_if = "Option::is_none")]
        planned_path: Option<Vec<HubId>>,
    },
    RouteDecided {
        shipment: ShipmentId,
        hub: HubId,
        mode: RoutingMode,
        budget: f64,
        next_hops: Vec<HubId>,
        chosen: HubId,
        #[serde(skip_serializing_if = "Option::is_none")]
        anchor: Option<Bearing>,
        fallback_used: bool,
        score_breakdown: BTreeMap<HubId, ScoreBreakdown>,
    },
    InfeasibleRouteLogged {
        shipment: ShipmentId,
        hub: HubId,
        shortfall: f64,
        extension: f64,
        new_deadline: f64,
        /// Set when the retry after extending also failed.
        abandoned: bool,
    },
    TruckCalled {
        truck: u32,
        from: HubId,
        to: HubId,
        shipments: Vec<ShipmentId>,
        triggers: Vec<Trigger>,
    },
    TruckReadyToLoad {
        truck: u32,
        hub: HubId,
    },
    TruckDeparted {
        truck: u32,
        from: HubId,
        to: HubId,
        shipments: Vec<ShipmentId>,
    },
    TruckArrived {
        truck: u32,
        hub: HubId,
        miles: f64,
    },
    ShipmentArrivedAtHub {
        shipment: ShipmentId,
        hub: HubId,
        truck: u32,
    },
    ShipmentDelivered {
        shipment: ShipmentId,
        hub: HubId,
        original_deadline: f64,
        lateness: f64,
    },
}

/// Renders the log as JSON lines.
pub fn write_event_log(log: &[LogRecord]) -> String {
    let mut out = String::new();
    for rec in log {
        out.push_str(&serde_json::to_string(rec).expect("log records serialize"));
        out.push('\n');
    }
    out
}

//! The consolidation protocol shared by both routing modes.
//!
//! Queued shipments are grouped by chosen next hop. A group calls a truck when
//! it fills one, when its oldest member has waited `wait_threshold`, or when
//! some member's slack has shrunk to `urgency_slack`. A triggered truck takes
//! up to `truck_capacity` shipments in enqueue order; whatever is left over
//! dispatches only once its own trigger fires.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ScenarioConfig, ShipmentId};
use crate::network::HubId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trigger {
    Capacity,
    Wait,
    Urgency,
}

/// One ready shipment in a hub queue together with its routing decision.
#[derive(Debug, Clone, PartialEq)]
pub struct QueuedShipment {
    pub id: ShipmentId,
    pub enqueued_at: f64,
    pub deadline: f64,
    pub next_hop: HubId,
    /// Arc time to `next_hop` plus the minimum time from there to the destination.
    pub remaining_time: f64,
    /// Handling due at `next_hop`; zero when it is the destination.
    pub next_handling: f64,
}

impl QueuedShipment {
    pub fn wait_due(&self, cfg: &ScenarioConfig) -> f64 {
        self.enqueued_at + cfg.wait_threshold
    }

    /// Instant at which slack `deadline - now - handling - remaining` reaches
    /// the urgency threshold.
    pub fn urgent_at(&self, cfg: &ScenarioConfig) -> Option<f64> {
        cfg.urgency_slack
            .map(|slack| self.deadline - self.next_handling - self.remaining_time - slack)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruckCall {
    pub to: HubId,
    pub shipments: Vec<ShipmentId>,
    pub triggers: Vec<Trigger>,
}

/// Evaluates the dispatch triggers for one hub queue (in enqueue order).
pub fn try_dispatch(queue: &[QueuedShipment], now: f64, cfg: &ScenarioConfig) -> Vec<TruckCall> {
    let mut groups: BTreeMap<&HubId, Vec<&QueuedShipment>> = BTreeMap::new();
    for q in queue {
        groups.entry(&q.next_hop).or_default().push(q);
    }

    let mut calls = Vec::new();
    for (hop, members) in groups {
        let mut rest = &members[..];
        while !rest.is_empty() {
            let mut triggers = Vec::new();
            if rest.len() >= cfg.truck_capacity {
                triggers.push(Trigger::Capacity);
            }
            if now >= rest[0].wait_due(cfg) {
                triggers.push(Trigger::Wait);
            }
            if rest.iter().any(|q| q.urgent_at(cfg).is_some_and(|t| now >= t)) {
                triggers.push(Trigger::Urgency);
            }
            if triggers.is_empty() {
                break;
            }
            let take = rest.len().min(cfg.truck_capacity);
            calls.push(TruckCall {
                to: hop.clone(),
                shipments: rest[..take].iter().map(|q| q.id).collect(),
                triggers,
            });
            rest = &rest[take..];
        }
    }
    calls
}

/// Earliest instant after `now` at which a wait or urgency trigger can fire
/// for a shipment still in `queue`.
pub fn next_trigger_time(queue: &[QueuedShipment], now: f64, cfg: &ScenarioConfig) -> Option<f64> {
    queue
        .iter()
        .flat_map(|q| [Some(q.wait_due(cfg)), q.urgent_at(cfg)])
        .flatten()
        .filter(|&t| t > now)
        .min_by(f64::total_cmp)
}

//! Next-hop selection.
//!
//! Baseline shipments follow their precomputed shortest path. Directional
//! shipments score each candidate next hop `n` as
//!
//! ```text
//! total(n) = w_time * via(n) / min_m via(m)  -  w_consolidation * affinity(n)
//! ```
//!
//! where `via(n)` is the arc time to `n` plus the minimum time from `n` to the
//! destination and `affinity(n)` is the share of other shipments queued at the
//! same hub that also list `n` among their candidate next hops. The smallest
//! total wins; ties go to the smaller hub id.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discovery::CandidateSet;
use crate::network::{HubId, Network};
use crate::pathfinding::{MinTimeTable, Path};
use crate::sim::ShipmentId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("hub {0} is not on the planned path")]
    NotOnPath(HubId),
    #[error("shipment is already at its destination {0}")]
    AlreadyAtDestination(HubId),
    #[error("candidate set has no next hops")]
    EmptyCandidates,
    #[error("no arc from {from} to candidate {to}")]
    MissingArc { from: HubId, to: HubId },
    #[error("candidate {0} cannot reach the destination")]
    UnreachableCandidate(HubId),
    #[error("policy weights must be non-negative and not both zero, got ({0}, {1})")]
    InvalidWeights(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoutingMode {
    Baseline,
    Directional,
}

impl std::fmt::Display for RoutingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RoutingMode::Baseline => "baseline",
            RoutingMode::Directional => "directional",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyWeights {
    w_time: f64,
    w_consolidation: f64,
}

impl PolicyWeights {
    pub fn new(w_time: f64, w_consolidation: f64) -> Result<Self, PolicyError> {
        let ok = |w: f64| w >= 0.0 && w.is_finite();
        if !ok(w_time) || !ok(w_consolidation) || (w_time == 0.0 && w_consolidation == 0.0) {
            return Err(PolicyError::InvalidWeights(w_time, w_consolidation));
        }
        Ok(PolicyWeights {
            w_time,
            w_consolidation,
        })
    }

    pub fn w_time(&self) -> f64 {
        self.w_time
    }

    pub fn w_consolidation(&self) -> f64 {
        self.w_consolidation
    }
}

impl Default for PolicyWeights {
    fn default() -> Self {
        PolicyWeights {
            w_time: 1.0,
            w_consolidation: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreBreakdown {
    pub time_score: f64,
    pub consolidation_score: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NextHopDecision {
    pub shipment: ShipmentId,
    pub chosen: HubId,
    pub mode: RoutingMode,
    pub score_breakdown: BTreeMap<HubId, ScoreBreakdown>,
}

/// Candidate next hops of every shipment queued at one hub, frozen at one instant.
#[derive(Debug, Clone, Default)]
pub struct QueueSnapshot {
    entries: BTreeMap<ShipmentId, Vec<HubId>>,
    listing: BTreeMap<HubId, usize>,
}

impl QueueSnapshot {
    pub fn new(entries: impl IntoIterator<Item = (ShipmentId, Vec<HubId>)>) -> Self {
        let mut snap = QueueSnapshot::default();
        for (id, mut hops) in entries {
            hops.sort();
            hops.dedup();
            for h in &hops {
                *snap.listing.entry(h.clone()).or_default() += 1;
            }
            if let Some(old) = snap.entries.insert(id, hops) {
                for h in old {
                    *snap.listing.get_mut(&h).unwrap() -= 1;
                }
            }
        }
        snap
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn baseline_next_hop(path: &Path, current: &HubId) -> Result<HubId, PolicyError> {
    let pos = path
        .hubs
        .iter()
        .position(|h| h == current)
        .ok_or_else(|| PolicyError::NotOnPath(current.clone()))?;
    path.hubs
        .get(pos + 1)
        .cloned()
        .ok_or_else(|| PolicyError::AlreadyAtDestination(current.clone()))
}

/// Share of the *other* queued shipments whose candidate next hops include
/// `candidate`; zero when no other shipment is queued.
pub fn consolidation_score(queue: &QueueSnapshot, candidate: &HubId, shipment: ShipmentId) -> f64 {
    let own = queue.entries.get(&shipment);
    let others = queue.len() - usize::from(own.is_some());
    if others == 0 {
        return 0.0;
    }
    let listed = queue.listing.get(candidate).copied().unwrap_or(0);
    let self_listed = own.is_some_and(|hops| hops.binary_search(candidate).is_ok());
    (listed - usize::from(self_listed)) as f64 / others as f64
}

pub fn directional_next_hop(
    net: &Network,
    cs: &CandidateSet,
    table: &MinTimeTable,
    queue: &QueueSnapshot,
    shipment: ShipmentId,
    weights: PolicyWeights,
) -> Result<NextHopDecision, PolicyError> {
    if cs.next_hops.is_empty() {
        return Err(PolicyError::EmptyCandidates);
    }
    let current = &cs.origin_of_search;
    let mut via = Vec::with_capacity(cs.next_hops.len());
    for n in &cs.next_hops {
        let arc = net.arc(current, n).ok_or_else(|| PolicyError::MissingArc {
            from: current.clone(),
            to: n.clone(),
        })?;
        let rest = table
            .get(n)
            .ok_or_else(|| PolicyError::UnreachableCandidate(n.clone()))?;
        via.push(arc.travel_time + rest);
    }
    let best_via = via.iter().copied().fold(f64::INFINITY, f64::min);

    let mut score_breakdown = BTreeMap::new();
    let mut chosen: Option<(&HubId, f64)> = None;
    for (n, v) in cs.next_hops.iter().zip(via) {
        let time_score = v / best_via;
        let consolidation_score = consolidation_score(queue, n, shipment);
        let total = weights.w_time * time_score - weights.w_consolidation * consolidation_score;
        score_breakdown.insert(
            n.clone(),
            ScoreBreakdown {
                time_score,
                consolidation_score,
                total,
            },
        );
        let better = match chosen {
            None => true,
            Some((c, t)) => total < t || (total == t && n < c),
        };
        if better {
            chosen = Some((n, total));
        }
    }
    Ok(NextHopDecision {
        shipment,
        chosen: chosen.expect("non-empty candidates").0.clone(),
        mode: RoutingMode::Directional,
        score_breakdown,
    })
}

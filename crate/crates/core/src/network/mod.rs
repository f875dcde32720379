//! Hub network model: hubs with coordinates, directed timed arcs, and the
//! validation rules every loaded or generated network must satisfy.

mod generate;
mod io;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::GeoPoint;

pub use generate::{generate_network, BoundingBox, GeneratorParams};
pub use io::{emit, load_network};

/// Opaque hub identifier. Ordering is plain string ordering and drives every
/// deterministic iteration in the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HubId(String);

impl HubId {
    pub fn new(id: impl Into<String>) -> Self {
        HubId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for HubId {
    fn from(s: &str) -> Self {
        HubId(s.to_owned())
    }
}

impl fmt::Display for HubId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hub {
    pub id: HubId,
    pub name: String,
    pub location: GeoPoint,
    pub is_destination_terminal: bool,
}

/// Directed connection. `travel_time` is in hours, `distance` in miles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arc {
    pub from: HubId,
    pub to: HubId,
    pub travel_time: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationIssue {
    #[error("hub with empty id")]
    EmptyHubId,
    #[error("duplicate hub id {0}")]
    DuplicateHub(HubId),
    #[error("hub {hub} has invalid location: {reason}")]
    InvalidLocation { hub: HubId, reason: String },
    #[error("edge {from}->{to} references missing hub {missing}")]
    DanglingEndpoint {
        from: HubId,
        to: HubId,
        missing: HubId,
    },
    #[error("edge {0}->{0} is a self-loop")]
    SelfLoop(HubId),
    #[error("edge {from}->{to} has non-positive travel time {value}")]
    NonPositiveTravelTime { from: HubId, to: HubId, value: f64 },
    #[error("edge {from}->{to} has non-positive distance {value}")]
    NonPositiveDistance { from: HubId, to: HubId, value: f64 },
    #[error("duplicate arc {from}->{to}")]
    DuplicateArc { from: HubId, to: HubId },
    #[error("hub {hub} cannot reach terminal {terminal}")]
    UnreachableTerminal { hub: HubId, terminal: HubId },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("malformed network document: {0}")]
    Parse(String),
    #[error("invalid network: {}", join_issues(.0))]
    Validation(Vec<ValidationIssue>),
    #[error("unknown hub {0}")]
    UnknownHub(HubId),
    #[error("cannot generate network: {0}")]
    Generation(String),
}

fn join_issues(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Validated, immutable hub graph.
///
/// Hubs are stored sorted by id so that dense indices and id order agree;
/// outgoing and incoming arc lists are sorted by the opposite endpoint.
#[derive(Debug, Clone)]
pub struct Network {
    hubs: Vec<Hub>,
    index: HashMap<HubId, usize>,
    arcs: Vec<Arc>,
    arc_ends: Vec<(usize, usize)>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.hubs == other.hubs && self.arcs == other.arcs
    }
}

impl Network {
    /// Builds a network, collecting every violated invariant.
    pub fn new(mut hubs: Vec<Hub>, mut arcs: Vec<Arc>) -> Result<Self, NetworkError> {
        let mut issues = Vec::new();

        hubs.sort_by(|a, b| a.id.cmp(&b.id));
        for w in hubs.windows(2) {
            if w[0].id == w[1].id {
                issues.push(ValidationIssue::DuplicateHub(w[0].id.clone()));
            }
        }
        if hubs.iter().any(|h| h.id.as_str().is_empty()) {
            issues.push(ValidationIssue::EmptyHubId);
        }
        hubs.dedup_by(|a, b| a.id == b.id);
        let index: HashMap<HubId, usize> = hubs
            .iter()
            .enumerate()
            .map(|(i, h)| (h.id.clone(), i))
            .collect();

        arcs.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
        for w in arcs.windows(2) {
            if w[0].from == w[1].from && w[0].to == w[1].to {
                issues.push(ValidationIssue::DuplicateArc {
                    from: w[0].from.clone(),
                    to: w[0].to.clone(),
                });
            }
        }
        arcs.dedup_by(|a, b| a.from == b.from && a.to == b.to);

        let mut arc_ends = Vec::with_capacity(arcs.len());
        let mut kept = Vec::with_capacity(arcs.len());
        for arc in arcs {
            let mut ok = true;
            for end in [&arc.from, &arc.to] {
                if !index.contains_key(end) {
                    issues.push(ValidationIssue::DanglingEndpoint {
                        from: arc.from.clone(),
                        to: arc.to.clone(),
                        missing: end.clone(),
                    });
                    ok = false;
                }
            }
            if arc.from == arc.to {
                issues.push(ValidationIssue::SelfLoop(arc.from.clone()));
                ok = false;
            }
            if !(arc.travel_time > 0.0 && arc.travel_time.is_finite()) {
                issues.push(ValidationIssue::NonPositiveTravelTime {
                    from: arc.from.clone(),
                    to: arc.to.clone(),
                    value: arc.travel_time,
                });
                ok = false;
            }
            if !(arc.distance > 0.0 && arc.distance.is_finite()) {
                issues.push(ValidationIssue::NonPositiveDistance {
                    from: arc.from.clone(),
                    to: arc.to.clone(),
                    value: arc.distance,
                });
                ok = false;
            }
            if ok {
                arc_ends.push((index[&arc.from], index[&arc.to]));
                kept.push(arc);
            }
        }

        let mut outgoing = vec![Vec::new(); hubs.len()];
        let mut incoming = vec![Vec::new(); hubs.len()];
        for (ai, &(u, v)) in arc_ends.iter().enumerate() {
            outgoing[u].push(ai);
            incoming[v].push(ai);
        }
        // `kept` is sorted by (from, to) so outgoing lists are already in target order
        for list in &mut incoming {
            list.sort_by_key(|&ai| arc_ends[ai].0);
        }

        let net = Network {
            hubs,
            index,
            arcs: kept,
            arc_ends,
            outgoing,
            incoming,
        };
        if issues.is_empty() {
            issues.extend(net.terminal_reachability_issues());
        }
        if issues.is_empty() {
            Ok(net)
        } else {
            Err(NetworkError::Validation(issues))
        }
    }

    fn terminal_reachability_issues(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        for (t, terminal) in self.hubs.iter().enumerate() {
            if !terminal.is_destination_terminal {
                continue;
            }
            let mut seen = vec![false; self.hubs.len()];
            seen[t] = true;
            let mut queue = VecDeque::from([t]);
            while let Some(v) = queue.pop_front() {
                for &ai in &self.incoming[v] {
                    let u = self.arc_ends[ai].0;
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            for (i, hub) in self.hubs.iter().enumerate() {
                if !seen[i] && !hub.is_destination_terminal {
                    issues.push(ValidationIssue::UnreachableTerminal {
                        hub: hub.id.clone(),
                        terminal: terminal.id.clone(),
                    });
                }
            }
        }
        issues
    }

    /// Hubs in ascending id order.
    pub fn hubs(&self) -> &[Hub] {
        &self.hubs
    }

    /// Arcs in ascending `(from, to)` order.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn hub(&self, id: &HubId) -> Option<&Hub> {
        self.index.get(id).map(|&i| &self.hubs[i])
    }

    pub fn contains(&self, id: &HubId) -> bool {
        self.index.contains_key(id)
    }

    pub fn terminals(&self) -> impl Iterator<Item = &Hub> {
        self.hubs.iter().filter(|h| h.is_destination_terminal)
    }

    pub fn arc(&self, from: &HubId, to: &HubId) -> Option<&Arc> {
        let u = *self.index.get(from)?;
        let v = *self.index.get(to)?;
        self.arc_between(u, v)
    }

    /// Outgoing arcs of `h`, ordered by ascending target id.
    pub fn neighbors(&self, h: &HubId) -> Result<Vec<&Arc>, NetworkError> {
        let u = self.require(h)?;
        Ok(self.outgoing[u].iter().map(|&ai| &self.arcs[ai]).collect())
    }

    pub(crate) fn require(&self, h: &HubId) -> Result<usize, NetworkError> {
        self.index
            .get(h)
            .copied()
            .ok_or_else(|| NetworkError::UnknownHub(h.clone()))
    }

    pub(crate) fn ix(&self, h: &HubId) -> Option<usize> {
        self.index.get(h).copied()
    }

    pub(crate) fn len(&self) -> usize {
        self.hubs.len()
    }

    pub(crate) fn hub_at(&self, i: usize) -> &Hub {
        &self.hubs[i]
    }

    /// `(target index, arc)` pairs in target order.
    pub(crate) fn out_arcs(&self, u: usize) -> impl Iterator<Item = (usize, &Arc)> {
        self.outgoing[u]
            .iter()
            .map(move |&ai| (self.arc_ends[ai].1, &self.arcs[ai]))
    }

    /// `(source index, arc)` pairs in source order.
    pub(crate) fn in_arcs(&self, v: usize) -> impl Iterator<Item = (usize, &Arc)> {
        self.incoming[v]
            .iter()
            .map(move |&ai| (self.arc_ends[ai].0, &self.arcs[ai]))
    }

    pub(crate) fn arc_between(&self, u: usize, v: usize) -> Option<&Arc> {
        self.outgoing[u]
            .binary_search_by_key(&v, |&ai| self.arc_ends[ai].1)
            .ok()
            .map(|pos| &self.arcs[self.outgoing[u][pos]])
    }
}

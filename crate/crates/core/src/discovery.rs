//! Area discovery: the sector-constrained, budget-pruned breadth-first search
//! that yields the candidate hubs a shipment may move through next.
//!
//! The search is anchored on a bearing from the current hub toward the
//! midpoint of the first shortest-path hop and the destination. Only arcs whose
//! own bearing lies inside the sector around that anchor are expanded, and a
//! hub is admitted only while
//!
//! ```text
//! elapsed(current -> hub) + handling(hub) + min_time(hub -> destination) <= budget
//! ```
//!
//! still holds. When nothing survives, the search is retried once with the
//! anchor pointing straight at the first shortest-path hop; if that also fails
//! the shipment cannot make its deadline and the outcome reports the shortfall.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::geo::{
    geographic_midpoint, initial_bearing, within_sector, Bearing, GeoError, SectorParams,
};
use crate::network::{HubId, Network, NetworkError};
use crate::pathfinding::{shortest_path, MinTimeTable, PathError};

/// Default transshipment time charged at an intermediate hub, in hours.
pub const DEFAULT_HANDLING_CHARGE: f64 = 0.5;

/// Slack allowed on budget comparisons, absorbing float summation order.
pub const FEASIBILITY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscoveryError {
    #[error("unknown hub {0}")]
    UnknownHub(HubId),
    #[error("no path from {from} to {to}")]
    NoPath { from: HubId, to: HubId },
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error("routing budget must be a non-negative number of hours, got {0}")]
    NegativeBudget(f64),
    #[error("handling charge must be a non-negative number of hours, got {0}")]
    NegativeHandling(f64),
    #[error("time table is rooted at {table}, not at destination {destination}")]
    TableMismatch { table: HubId, destination: HubId },
}

impl From<PathError> for DiscoveryError {
    fn from(e: PathError) -> Self {
        match e {
            PathError::UnknownHub(h) => DiscoveryError::UnknownHub(h),
            PathError::NoPath { from, to } => DiscoveryError::NoPath { from, to },
        }
    }
}

impl From<NetworkError> for DiscoveryError {
    fn from(e: NetworkError) -> Self {
        PathError::from(e).into()
    }
}

/// Hours left until the shipment's deadline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoutingBudget {
    remaining: f64,
}

impl RoutingBudget {
    pub fn new(remaining: f64) -> Result<Self, DiscoveryError> {
        if !(remaining >= 0.0) {
            return Err(DiscoveryError::NegativeBudget(remaining));
        }
        Ok(RoutingBudget { remaining })
    }

    pub fn remaining(&self) -> f64 {
        self.remaining
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchParams {
    pub sector: SectorParams,
    handling_charge: f64,
}

impl SearchParams {
    pub fn new(sector: SectorParams, handling_charge: f64) -> Result<Self, DiscoveryError> {
        if !(handling_charge >= 0.0 && handling_charge.is_finite()) {
            return Err(DiscoveryError::NegativeHandling(handling_charge));
        }
        Ok(SearchParams {
            sector,
            handling_charge,
        })
    }

    pub fn handling_charge(&self) -> f64 {
        self.handling_charge
    }

    /// Handling is charged at intermediate hubs only.
    fn charge_at(&self, hub: &HubId, destination: &HubId) -> f64 {
        if hub == destination {
            0.0
        } else {
            self.handling_charge
        }
    }
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            sector: SectorParams::default(),
            handling_charge: DEFAULT_HANDLING_CHARGE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MemberTimes {
    pub min_time_from_current: f64,
    pub min_time_to_dest: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateSet {
    pub origin_of_search: HubId,
    pub destination: HubId,
    pub anchor: Bearing,
    pub fallback_used: bool,
    pub members: BTreeMap<HubId, MemberTimes>,
    /// Members reachable from `origin_of_search` over a single sector-compliant arc.
    pub next_hops: Vec<HubId>,
    /// Arcs through which members were admitted, for rendering the area.
    pub area_arcs: Vec<(HubId, HubId)>,
    /// Hubs popped from the BFS frontier, summed over both passes when the
    /// recalibration pass ran.
    pub expansions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DiscoveryOutcome {
    Found(CandidateSet),
    Infeasible {
        shortfall: f64,
        recommended_extension: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchorBearing {
    pub anchor: Bearing,
    pub first_sp_hub: HubId,
}

/// Bearing from `current` toward the midpoint of the first shortest-path hop
/// and `d`; when that hop is `d` itself this is the bearing toward `d`.
pub fn compute_anchor_bearing(
    net: &Network,
    current: &HubId,
    d: &HubId,
) -> Result<AnchorBearing, DiscoveryError> {
    let path = shortest_path(net, current, d)?;
    let Some(first) = path.hubs.get(1).cloned() else {
        return Err(GeoError::DegenerateBearing.into());
    };
    let here = location(net, current)?;
    let dest = location(net, d)?;
    let target = if first == *d {
        dest
    } else {
        geographic_midpoint(location(net, &first)?, dest)?
    };
    Ok(AnchorBearing {
        anchor: initial_bearing(here, target)?,
        first_sp_hub: first,
    })
}

fn location(net: &Network, h: &HubId) -> Result<crate::geo::GeoPoint, DiscoveryError> {
    net.hub(h)
        .map(|hub| hub.location)
        .ok_or_else(|| DiscoveryError::UnknownHub(h.clone()))
}

fn arc_in_sector(net: &Network, u: usize, v: usize, anchor: Bearing, sector: SectorParams) -> bool {
    match initial_bearing(net.hub_at(u).location, net.hub_at(v).location) {
        Ok(b) => within_sector(b, anchor, sector),
        // a zero-length hop cannot point backwards
        Err(_) => true,
    }
}

/// Neighbors of `current` whose bearing lies inside the sector around `anchor`.
pub fn sector_filter_neighbors(
    net: &Network,
    current: &HubId,
    anchor: Bearing,
    params: SectorParams,
) -> Result<Vec<HubId>, DiscoveryError> {
    let u = net.require(current)?;
    Ok(net
        .out_arcs(u)
        .filter(|&(v, _)| arc_in_sector(net, u, v, anchor, params))
        .map(|(_, arc)| arc.to.clone())
        .collect())
}

/// True iff `h` can still reach the table's destination in time after
/// `elapsed` hours, counting handling at `h` unless it is the destination.
pub fn feasible_continuation(
    table: &MinTimeTable,
    h: &HubId,
    elapsed: f64,
    budget: RoutingBudget,
    handling_charge: f64,
) -> bool {
    let Some(to_dest) = table.get(h) else {
        return false;
    };
    let charge = if h == table.destination() {
        0.0
    } else {
        handling_charge
    };
    fits(elapsed, to_dest, charge, budget)
}

fn fits(elapsed: f64, to_dest: f64, charge: f64, budget: RoutingBudget) -> bool {
    elapsed + to_dest + charge <= budget.remaining + FEASIBILITY_EPS
}

struct Expansion {
    elapsed: Vec<Option<f64>>,
    next_hops: Vec<usize>,
    arcs: BTreeSet<(usize, usize)>,
    expansions: usize,
}

fn expand(
    net: &Network,
    table: &MinTimeTable,
    cur: usize,
    dst: usize,
    anchor: Bearing,
    budget: RoutingBudget,
    params: &SearchParams,
) -> Expansion {
    let dest_id = &net.hub_at(dst).id;
    let mut elapsed: Vec<Option<f64>> = vec![None; net.len()];
    let mut queued = vec![false; net.len()];
    let mut next_hops = Vec::new();
    let mut arcs = BTreeSet::new();
    let mut expansions = 0;

    elapsed[cur] = Some(0.0);
    let mut frontier = VecDeque::from([cur]);
    queued[cur] = true;
    while let Some(u) = frontier.pop_front() {
        queued[u] = false;
        expansions += 1;
        let g_u = elapsed[u].expect("queued hubs carry a time");
        for (v, arc) in net.out_arcs(u) {
            if v == cur || !arc_in_sector(net, u, v, anchor, params.sector) {
                continue;
            }
            let Some(to_dest) = table.at(v) else {
                continue;
            };
            let g_v = g_u + arc.travel_time;
            let charge = params.charge_at(&net.hub_at(v).id, dest_id);
            if !fits(g_v, to_dest, charge, budget) {
                continue;
            }
            arcs.insert((u, v));
            if u == cur {
                next_hops.push(v);
            }
            if elapsed[v].map_or(true, |old| g_v < old) {
                elapsed[v] = Some(g_v);
                // the destination ends a route; nothing is expanded past it
                if v != dst && !queued[v] {
                    queued[v] = true;
                    frontier.push_back(v);
                }
            }
        }
    }
    elapsed[cur] = None;
    Expansion {
        elapsed,
        next_hops,
        arcs,
        expansions,
    }
}

/// Runs area discovery for a shipment at `current` bound for `d`.
///
/// `table` must be rooted at `d`. Returns [`DiscoveryError::NoPath`] when `d`
/// is unreachable at any budget; an unmeetable budget is a normal
/// [`DiscoveryOutcome::Infeasible`] result.
pub fn rss_bfs(
    net: &Network,
    table: &MinTimeTable,
    current: &HubId,
    d: &HubId,
    budget: RoutingBudget,
    params: &SearchParams,
) -> Result<DiscoveryOutcome, DiscoveryError> {
    let cur = net.require(current)?;
    let dst = net.require(d)?;
    if table.destination() != d {
        return Err(DiscoveryError::TableMismatch {
            table: table.destination().clone(),
            destination: d.clone(),
        });
    }
    if cur == dst {
        let members = BTreeMap::from([(
            d.clone(),
            MemberTimes {
                min_time_from_current: 0.0,
                min_time_to_dest: 0.0,
            },
        )]);
        return Ok(DiscoveryOutcome::Found(CandidateSet {
            origin_of_search: current.clone(),
            destination: d.clone(),
            anchor: Bearing::new(0.0),
            fallback_used: false,
            members,
            next_hops: Vec::new(),
            area_arcs: Vec::new(),
            expansions: 0,
        }));
    }
    if table.at(cur).is_none() {
        return Err(DiscoveryError::NoPath {
            from: current.clone(),
            to: d.clone(),
        });
    }

    let here = net.hub_at(cur).location;
    let (primary, first_sp_hub) = match compute_anchor_bearing(net, current, d) {
        Ok(a) => (Some(a.anchor), a.first_sp_hub),
        Err(DiscoveryError::Geo(_)) => {
            let path = shortest_path(net, current, d)?;
            (None, path.hubs[1].clone())
        }
        Err(e) => return Err(e),
    };
    let first = net.require(&first_sp_hub)?;

    let mut spent = 0;
    let mut kept = None;
    if let Some(anchor) = primary {
        let run = expand(net, table, cur, dst, anchor, budget, params);
        spent = run.expansions;
        if run.next_hops.contains(&first) {
            return Ok(found(net, table, current, d, anchor, false, run));
        }
        if !run.next_hops.is_empty() {
            kept = Some((anchor, run));
        }
    }

    // the primary area missed the first shortest-path hop: recalibrate once
    // toward it (a coincident hop passes the sector test whatever the anchor)
    let fallback = initial_bearing(here, net.hub_at(first).location).unwrap_or(Bearing::new(0.0));
    let mut run = expand(net, table, cur, dst, fallback, budget, params);
    let recalibration = run.expansions;
    run.expansions += spent;
    if !run.next_hops.is_empty() {
        return Ok(found(net, table, current, d, fallback, true, run));
    }
    if let Some((anchor, mut run)) = kept {
        run.expansions += recalibration;
        return Ok(found(net, table, current, d, anchor, false, run));
    }

    let via_first = net
        .arc_between(cur, first)
        .expect("first hop of a path is adjacent")
        .travel_time
        + table.at(first).expect("first hop reaches the destination");
    let shortfall = via_first + params.charge_at(&first_sp_hub, d) - budget.remaining;
    debug_assert!(shortfall > 0.0, "budget-feasible first hop was pruned");
    Ok(DiscoveryOutcome::Infeasible {
        shortfall,
        recommended_extension: shortfall.ceil(),
    })
}

fn found(
    net: &Network,
    table: &MinTimeTable,
    current: &HubId,
    d: &HubId,
    anchor: Bearing,
    fallback_used: bool,
    run: Expansion,
) -> DiscoveryOutcome {
    let mut members = BTreeMap::new();
    let mut through_area = f64::INFINITY;
    for (i, g) in run.elapsed.iter().enumerate() {
        let Some(g) = *g else { continue };
        let to_dest = table.at(i).expect("admitted hubs are in the table");
        through_area = through_area.min(g + to_dest);
        members.insert(
            net.hub_at(i).id.clone(),
            MemberTimes {
                min_time_from_current: g,
                min_time_to_dest: to_dest,
            },
        );
    }
    // the destination may lie outside the sector; its entry then carries the
    // best time to it through the admitted area
    members.entry(d.clone()).or_insert(MemberTimes {
        min_time_from_current: through_area,
        min_time_to_dest: 0.0,
    });
    let id = |i: usize| net.hub_at(i).id.clone();
    DiscoveryOutcome::Found(CandidateSet {
        origin_of_search: current.clone(),
        destination: d.clone(),
        anchor,
        fallback_used,
        members,
        next_hops: run.next_hops.into_iter().map(id).collect(),
        area_arcs: run.arcs.into_iter().map(|(u, v)| (id(u), id(v))).collect(),
        expansions: run.expansions,
    })
}

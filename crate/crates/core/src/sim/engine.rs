//! Serial event loop.
//!
//! Shipments become ready at their origin on creation and at every later hub
//! once handling is complete. Readiness triggers the routing decision (path
//! lookup or area discovery plus scoring) and a dispatch evaluation at that
//! hub. Trucks are called on demand; their whole timeline is fixed at call
//! time and replayed through ready-to-load, departure and arrival events.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};

use serde::Serialize;

use super::dispatch::{next_trigger_time, try_dispatch, QueuedShipment};
use super::kpi::{compute_kpis, KpiReport};
use super::log::{Event, LogRecord};
use super::{ScenarioConfig, Shipment, ShipmentId, SimError};
use crate::discovery::{rss_bfs, CandidateSet, DiscoveryOutcome, RoutingBudget, SearchParams};
use crate::network::{HubId, Network};
use crate::pathfinding::{min_time_table, shortest_path, MinTimeTable};
use crate::policy::{directional_next_hop, PolicyWeights, QueueSnapshot, RoutingMode};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruckTrip {
    pub id: u32,
    pub from: HubId,
    pub to: HubId,
    pub shipments: Vec<ShipmentId>,
    pub called_at: f64,
    pub arrived_for_loading_at: f64,
    pub departed_at: f64,
    pub arrived_at: f64,
    pub miles: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShipmentStatus {
    /// Not yet created.
    Pending,
    /// At a hub: in handling or waiting for a truck.
    Queued,
    /// Assigned to a truck.
    InTransit,
    Delivered,
    /// No feasible route even after a lead-time extension.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShipmentOutcome {
    pub id: ShipmentId,
    pub status: ShipmentStatus,
    pub original_deadline: f64,
    /// Deadline after any lead-time extension.
    pub deadline: f64,
    pub extended: bool,
    pub delivered_at: Option<f64>,
    pub hop_history: Vec<(HubId, f64)>,
}

#[derive(Debug, Clone)]
pub struct SimResult {
    pub kpis: KpiReport,
    pub log: Vec<LogRecord>,
    pub trips: Vec<TruckTrip>,
    pub outcomes: Vec<ShipmentOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    Create(usize),
    Ready(usize),
    Timer(usize),
    TruckReady(usize),
    TruckDepart(usize),
    TruckArrive(usize),
}

#[derive(Debug, Clone, Copy)]
struct Scheduled {
    time: f64,
    seq: u64,
    action: Action,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scheduled {}

impl Ord for Scheduled {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time.total_cmp(&other.time).then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Live {
    origin: usize,
    dest: usize,
    hub: usize,
    status: ShipmentStatus,
    deadline: f64,
    extended: bool,
    hops: Vec<(HubId, f64)>,
    planned: Option<Vec<usize>>,
    candidates: Option<CandidateSet>,
    next_hop: usize,
    enqueued_at: f64,
    delivered_at: Option<f64>,
}

struct Engine<'a> {
    net: &'a Network,
    cfg: &'a ScenarioConfig,
    shipments: &'a [Shipment],
    params: SearchParams,
    weights: PolicyWeights,
    tables: HashMap<usize, MinTimeTable>,
    live: Vec<Live>,
    queues: Vec<Vec<usize>>,
    heap: BinaryHeap<Reverse<Scheduled>>,
    next_seq: u64,
    timers: HashSet<(u64, usize)>,
    trips: Vec<TruckTrip>,
    log: Vec<LogRecord>,
    hop_limit: usize,
}

/// Runs one scenario to completion.
pub fn run_simulation(
    net: &Network,
    shipments: &[Shipment],
    cfg: &ScenarioConfig,
) -> Result<SimResult, SimError> {
    cfg.validate()?;
    let mut engine = Engine::new(net, shipments, cfg)?;
    engine.run()?;
    Ok(engine.finish())
}

impl<'a> Engine<'a> {
    fn new(net: &'a Network, shipments: &'a [Shipment], cfg: &'a ScenarioConfig) -> Result<Self, SimError> {
        let mut tables = HashMap::new();
        let mut live = Vec::with_capacity(shipments.len());
        let mut seen = HashSet::new();
        for s in shipments {
            let bad = |m: &str| SimError::InvalidShipment(format!("{}: {m}", s.id));
            if !seen.insert(s.id) {
                return Err(bad("duplicate id"));
            }
            let origin = net.ix(&s.origin).ok_or_else(|| bad("unknown origin"))?;
            let dest = net.ix(&s.destination).ok_or_else(|| bad("unknown destination"))?;
            if origin == dest {
                return Err(bad("origin equals destination"));
            }
            if !(s.created_at >= 0.0) || (s.deadline - s.created_at - s.service_level.deadline_offset()).abs() > 1e-9 {
                return Err(bad("inconsistent creation time or deadline"));
            }
            if let std::collections::hash_map::Entry::Vacant(e) = tables.entry(dest) {
                e.insert(min_time_table(net, &s.destination)?);
            }
            let planned = match cfg.mode {
                RoutingMode::Baseline => {
                    let path = shortest_path(net, &s.origin, &s.destination)?;
                    Some(path.hubs.iter().map(|h| net.ix(h).unwrap()).collect())
                }
                RoutingMode::Directional => None,
            };
            if tables[&dest].at(origin).is_none() {
                return Err(bad("destination unreachable from origin"));
            }
            live.push(Live {
                origin,
                dest,
                hub: origin,
                status: ShipmentStatus::Pending,
                deadline: s.deadline,
                extended: false,
                hops: Vec::new(),
                planned,
                candidates: None,
                next_hop: origin,
                enqueued_at: 0.0,
                delivered_at: None,
            });
        }

        let mut engine = Engine {
            net,
            cfg,
            shipments,
            params: cfg.search_params()?,
            weights: cfg.weights()?,
            tables,
            live,
            queues: vec![Vec::new(); net.len()],
            heap: BinaryHeap::new(),
            next_seq: 0,
            timers: HashSet::new(),
            trips: Vec::new(),
            log: Vec::new(),
            hop_limit: 4 * net.len() + 4,
        };
        for (i, s) in shipments.iter().enumerate() {
            engine.schedule(s.created_at, Action::Create(i));
        }
        Ok(engine)
    }

    fn schedule(&mut self, time: f64, action: Action) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Reverse(Scheduled { time, seq, action }));
    }

    fn record(&mut self, time: f64, event: Event) {
        let sequence = self.log.len() as u64;
        self.log.push(LogRecord {
            time,
            sequence,
            event,
        });
    }

    fn id(&self, hub: usize) -> HubId {
        self.net.hub_at(hub).id.clone()
    }

    fn run(&mut self) -> Result<(), SimError> {
        while let Some(Reverse(Scheduled { time, action, .. })) = self.heap.pop() {
            match action {
                Action::Create(i) => self.create(i, time)?,
                Action::Ready(i) => self.ready(i, time)?,
                Action::Timer(hub) => {
                    self.timers.remove(&(time.to_bits(), hub));
                    self.evaluate(hub, time)?;
                }
                Action::TruckReady(t) => {
                    let trip = &self.trips[t];
                    let (hub, depart) = (trip.from.clone(), trip.departed_at);
                    self.record(time, Event::TruckReadyToLoad { truck: t as u32, hub });
                    self.schedule(depart, Action::TruckDepart(t));
                }
                Action::TruckDepart(t) => {
                    let trip = &self.trips[t];
                    let event = Event::TruckDeparted {
                        truck: t as u32,
                        from: trip.from.clone(),
                        to: trip.to.clone(),
                        shipments: trip.shipments.clone(),
                    };
                    let arrive = trip.arrived_at;
                    self.record(time, event);
                    self.schedule(arrive, Action::TruckArrive(t));
                }
                Action::TruckArrive(t) => self.truck_arrived(t, time)?,
            }
        }

        let stuck: Vec<String> = self
            .live
            .iter()
            .zip(self.shipments)
            .filter(|(l, _)| !matches!(l.status, ShipmentStatus::Delivered | ShipmentStatus::Infeasible))
            .map(|(_, s)| s.id.to_string())
            .collect();
        if !stuck.is_empty() {
            return Err(SimError::Stall(format!(
                "event queue drained with {} shipments in flight: {}",
                stuck.len(),
                stuck.join(", ")
            )));
        }
        Ok(())
    }

    fn create(&mut self, i: usize, now: f64) -> Result<(), SimError> {
        let s = &self.shipments[i];
        let live = &mut self.live[i];
        live.status = ShipmentStatus::Queued;
        live.hub = live.origin;
        live.hops.push((s.origin.clone(), now));
        let planned_path = live
            .planned
            .as_ref()
            .map(|p| p.iter().map(|&h| self.net.hub_at(h).id.clone()).collect());
        self.record(
            now,
            Event::ShipmentCreated {
                shipment: s.id,
                origin: s.origin.clone(),
                destination: s.destination.clone(),
                service_level: s.service_level,
                deadline: s.deadline,
                planned_path,
            },
        );
        // no handling at the origin
        self.ready(i, now)
    }

    fn truck_arrived(&mut self, t: usize, now: f64) -> Result<(), SimError> {
        let trip = self.trips[t].clone();
        let hub = self.net.ix(&trip.to).expect("trip endpoints exist");
        self.record(
            now,
            Event::TruckArrived {
                truck: t as u32,
                hub: trip.to.clone(),
                miles: trip.miles,
            },
        );
        for sid in &trip.shipments {
            let i = sid.0 as usize;
            let i = self.index_of(*sid, i);
            let live = &mut self.live[i];
            live.hub = hub;
            live.hops.push((trip.to.clone(), now));
            if live.hops.len() > self.hop_limit {
                return Err(SimError::Stall(format!("{sid} exceeded {} hops", self.hop_limit)));
            }
            self.record(
                now,
                Event::ShipmentArrivedAtHub {
                    shipment: *sid,
                    hub: trip.to.clone(),
                    truck: t as u32,
                },
            );
            let live = &mut self.live[i];
            if hub == live.dest {
                live.status = ShipmentStatus::Delivered;
                live.delivered_at = Some(now);
                let original_deadline = self.shipments[i].deadline;
                self.record(
                    now,
                    Event::ShipmentDelivered {
                        shipment: *sid,
                        hub: trip.to.clone(),
                        original_deadline,
                        lateness: (now - original_deadline).max(0.0),
                    },
                );
            } else {
                live.status = ShipmentStatus::Queued;
                self.schedule(now + self.cfg.handling_charge, Action::Ready(i));
            }
        }
        self.evaluate(hub, now)
    }

    // shipments are usually stored in id order; fall back to a scan otherwise
    fn index_of(&self, id: ShipmentId, guess: usize) -> usize {
        if self.shipments.get(guess).is_some_and(|s| s.id == id) {
            guess
        } else {
            self.shipments.iter().position(|s| s.id == id).expect("trip carries known shipments")
        }
    }

    fn ready(&mut self, i: usize, now: f64) -> Result<(), SimError> {
        let hub = self.live[i].hub;
        let routed = match self.cfg.mode {
            RoutingMode::Baseline => {
                self.route_baseline(i, hub, now);
                true
            }
            RoutingMode::Directional => self.route_directional(i, hub, now)?,
        };
        if routed {
            self.live[i].enqueued_at = now;
            self.queues[hub].push(i);
            self.evaluate(hub, now)?;
        }
        Ok(())
    }

    fn route_baseline(&mut self, i: usize, hub: usize, now: f64) {
        let live = &self.live[i];
        let plan = live.planned.as_ref().expect("baseline shipments carry a plan");
        let pos = plan.iter().position(|&h| h == hub).expect("baseline shipments stay on plan");
        let next = plan[pos + 1];
        let budget = live.deadline - now;
        self.live[i].next_hop = next;
        let chosen = self.id(next);
        self.record(
            now,
            Event::RouteDecided {
                shipment: self.shipments[i].id,
                hub: self.id(hub),
                mode: RoutingMode::Baseline,
                budget,
                next_hops: vec![chosen.clone()],
                chosen,
                anchor: None,
                fallback_used: false,
                score_breakdown: BTreeMap::new(),
            },
        );
    }

    /// Returns false when the shipment was abandoned as infeasible.
    fn route_directional(&mut self, i: usize, hub: usize, now: f64) -> Result<bool, SimError> {
        let sid = self.shipments[i].id;
        let dest = self.live[i].dest;
        for attempt in 0..2 {
            let table = &self.tables[&dest];
            let budget = RoutingBudget::new((self.live[i].deadline - now).max(0.0))?;
            let outcome = rss_bfs(self.net, table, &self.id(hub), &self.id(dest), budget, &self.params)?;
            match outcome {
                DiscoveryOutcome::Found(cs) => {
                    let snapshot = self.snapshot(hub);
                    let decision = directional_next_hop(self.net, &cs, table, &snapshot, sid, self.weights)?;
                    let next = self.net.ix(&decision.chosen).expect("candidates exist");
                    let event = Event::RouteDecided {
                        shipment: sid,
                        hub: self.id(hub),
                        mode: RoutingMode::Directional,
                        budget: budget.remaining(),
                        next_hops: cs.next_hops.clone(),
                        chosen: decision.chosen,
                        anchor: Some(cs.anchor),
                        fallback_used: cs.fallback_used,
                        score_breakdown: decision.score_breakdown,
                    };
                    let live = &mut self.live[i];
                    live.next_hop = next;
                    live.candidates = Some(cs);
                    self.record(now, event);
                    return Ok(true);
                }
                DiscoveryOutcome::Infeasible {
                    shortfall,
                    recommended_extension,
                } => {
                    let live = &mut self.live[i];
                    let new_deadline = live.deadline.max(now) + recommended_extension;
                    let abandoned = attempt == 1;
                    if abandoned {
                        live.status = ShipmentStatus::Infeasible;
                    } else {
                        live.deadline = new_deadline;
                        live.extended = true;
                    }
                    self.record(
                        now,
                        Event::InfeasibleRouteLogged {
                            shipment: sid,
                            hub: self.id(hub),
                            shortfall,
                            extension: recommended_extension,
                            new_deadline,
                            abandoned,
                        },
                    );
                }
            }
        }
        Ok(false)
    }

    fn snapshot(&self, hub: usize) -> QueueSnapshot {
        QueueSnapshot::new(self.queues[hub].iter().map(|&j| {
            let hops = match &self.live[j].candidates {
                Some(cs) => cs.next_hops.clone(),
                None => vec![self.id(self.live[j].next_hop)],
            };
            (self.shipments[j].id, hops)
        }))
    }

    fn queued(&self, i: usize, hub: usize) -> QueuedShipment {
        let live = &self.live[i];
        let arc = self
            .net
            .arc_between(hub, live.next_hop)
            .expect("next hop is adjacent");
        let onward = self.tables[&live.dest]
            .at(live.next_hop)
            .expect("next hop reaches the destination");
        QueuedShipment {
            id: self.shipments[i].id,
            enqueued_at: live.enqueued_at,
            deadline: live.deadline,
            next_hop: arc.to.clone(),
            remaining_time: arc.travel_time + onward,
            next_handling: if live.next_hop == live.dest {
                0.0
            } else {
                self.cfg.handling_charge
            },
        }
    }

    fn evaluate(&mut self, hub: usize, now: f64) -> Result<(), SimError> {
        if self.queues[hub].is_empty() {
            return Ok(());
        }
        if self.cfg.mode == RoutingMode::Directional {
            // decisions are revisited against the current queue
            let snapshot = self.snapshot(hub);
            for k in 0..self.queues[hub].len() {
                let i = self.queues[hub][k];
                let live = &self.live[i];
                let cs = live.candidates.as_ref().expect("routed shipments carry candidates");
                let table = &self.tables[&live.dest];
                let decision =
                    directional_next_hop(self.net, cs, table, &snapshot, self.shipments[i].id, self.weights)?;
                self.live[i].next_hop = self.net.ix(&decision.chosen).expect("candidates exist");
            }
        }

        let queue: Vec<QueuedShipment> = self.queues[hub].iter().map(|&i| self.queued(i, hub)).collect();
        let calls = try_dispatch(&queue, now, self.cfg);
        for call in calls {
            let to = self.net.ix(&call.to).expect("next hops exist");
            let arc = self.net.arc_between(hub, to).expect("next hop is adjacent");
            let t = self.trips.len();
            let ready = now + self.cfg.truck_call_delay;
            let departed = ready + self.cfg.loading_time(call.shipments.len());
            self.trips.push(TruckTrip {
                id: t as u32,
                from: self.id(hub),
                to: call.to.clone(),
                shipments: call.shipments.clone(),
                called_at: now,
                arrived_for_loading_at: ready,
                departed_at: departed,
                arrived_at: departed + arc.travel_time,
                miles: arc.distance,
            });
            let taken: HashSet<ShipmentId> = call.shipments.iter().copied().collect();
            let shipments = self.shipments;
            self.queues[hub].retain(|&i| !taken.contains(&shipments[i].id));
            for &i in &self.queues_taken(&taken) {
                self.live[i].status = ShipmentStatus::InTransit;
            }
            self.record(
                now,
                Event::TruckCalled {
                    truck: t as u32,
                    from: self.id(hub),
                    to: call.to,
                    shipments: call.shipments,
                    triggers: call.triggers,
                },
            );
            self.schedule(ready, Action::TruckReady(t));
        }

        let remaining: Vec<QueuedShipment> = self.queues[hub].iter().map(|&i| self.queued(i, hub)).collect();
        if let Some(at) = next_trigger_time(&remaining, now, self.cfg) {
            if self.timers.insert((at.to_bits(), hub)) {
                self.schedule(at, Action::Timer(hub));
            }
        }
        Ok(())
    }

    fn queues_taken(&self, taken: &HashSet<ShipmentId>) -> Vec<usize> {
        taken
            .iter()
            .map(|&id| self.index_of(id, id.0 as usize))
            .collect()
    }

    fn finish(self) -> SimResult {
        let outcomes: Vec<ShipmentOutcome> = self
            .live
            .into_iter()
            .zip(self.shipments)
            .map(|(l, s)| ShipmentOutcome {
                id: s.id,
                status: l.status,
                original_deadline: s.deadline,
                deadline: l.deadline,
                extended: l.extended,
                delivered_at: l.delivered_at,
                hop_history: l.hops,
            })
            .collect();
        let kpis = compute_kpis(self.cfg.mode, &outcomes, &self.trips);
        SimResult {
            kpis,
            log: self.log,
            trips: self.trips,
            outcomes,
        }
    }
}

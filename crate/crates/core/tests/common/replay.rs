//! Event-log replay: re-reads the JSON-lines log as untyped values, tracks
//! every shipment and truck through a state machine and aggregates the KPIs
//! from scratch. Any broken invariant is returned as an error message.

use std::collections::{BTreeMap, BTreeSet};

use dirroute::network::Network;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq)]
enum Where {
    /// At a hub; `route` is the latest decision there (next_hops) if any.
    Hub { hub: String, route: Option<BTreeSet<String>> },
    Aboard(u64),
    Delivered,
    Abandoned,
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Replay {
    pub shipments: usize,
    pub delivered: usize,
    pub delivered_on_time: usize,
    pub infeasible: usize,
    pub extended: usize,
    pub trucks: usize,
    pub miles: f64,
    pub max_lateness: f64,
    pub lateness_sum: f64,
    pub events: usize,
}

struct Truck {
    from: String,
    to: String,
    shipments: Vec<u64>,
    stage: u8,
    departed_at: f64,
}

fn s(v: &Value, key: &str) -> Result<String, String> {
    v[key].as_str().map(str::to_owned).ok_or_else(|| format!("missing string {key} in {v}"))
}

fn u(v: &Value, key: &str) -> Result<u64, String> {
    v[key].as_u64().ok_or_else(|| format!("missing integer {key} in {v}"))
}

fn f(v: &Value, key: &str) -> Result<f64, String> {
    v[key].as_f64().ok_or_else(|| format!("missing number {key} in {v}"))
}

fn ids(v: &Value, key: &str) -> Result<Vec<u64>, String> {
    v[key]
        .as_array()
        .ok_or_else(|| format!("missing list {key}"))?
        .iter()
        .map(|x| x.as_u64().ok_or_else(|| "bad id".to_string()))
        .collect()
}

fn hubs(v: &Value, key: &str) -> Result<Vec<String>, String> {
    v[key]
        .as_array()
        .ok_or_else(|| format!("missing list {key}"))?
        .iter()
        .map(|x| x.as_str().map(str::to_owned).ok_or_else(|| "bad hub".to_string()))
        .collect()
}

/// Summed arc times along `path`; `None` if an arc is missing.
pub fn path_time(net: &Network, path: &[String]) -> Option<f64> {
    path.windows(2)
        .map(|w| net.arcs().iter().find(|a| a.from.as_str() == w[0] && a.to.as_str() == w[1]).map(|a| a.travel_time))
        .sum()
}

/// Plain O(n²) Dijkstra over the arc list.
pub fn min_time(net: &Network, from: &str, to: &str) -> Option<f64> {
    let mut dist: BTreeMap<&str, f64> = BTreeMap::from([(from, 0.0)]);
    let mut done: BTreeSet<&str> = BTreeSet::new();
    loop {
        let next = dist
            .iter()
            .filter(|(h, _)| !done.contains(*h))
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(h, d)| (*h, *d));
        let Some((h, d)) = next else { return None };
        if h == to {
            return Some(d);
        }
        done.insert(h);
        for a in net.arcs().iter().filter(|a| a.from.as_str() == h) {
            let cand = d + a.travel_time;
            let e = dist.entry(a.to.as_str()).or_insert(f64::INFINITY);
            if cand < *e {
                *e = cand;
            }
        }
    }
}

/// Replays `log` (JSON lines) against `net`. `mode` is "baseline" or
/// "directional".
pub fn replay(log: &str, net: &Network, capacity: usize, mode: &str) -> Result<Replay, String> {
    let mut out = Replay::default();
    let mut state: BTreeMap<u64, Where> = BTreeMap::new();
    let mut dest: BTreeMap<u64, String> = BTreeMap::new();
    let mut planned: BTreeMap<u64, Vec<String>> = BTreeMap::new();
    let mut visited: BTreeMap<u64, Vec<(String, f64)>> = BTreeMap::new();
    let mut extended: BTreeSet<u64> = BTreeSet::new();
    let mut trucks: BTreeMap<u64, Truck> = BTreeMap::new();
    let mut last_time = 0.0;

    for (line_no, line) in log.lines().enumerate() {
        let rec: Value = serde_json::from_str(line).map_err(|e| format!("line {line_no}: {e}"))?;
        let order = ["{\"time\":", ",\"sequence\":", ",\"kind\":", ",\"payload\":"].map(|k| line.find(k));
        if order.iter().any(Option::is_none) || !order.windows(2).all(|w| w[0] < w[1]) || order[0] != Some(0) {
            return Err(format!("line {line_no}: unexpected field order"));
        }
        let time = f(&rec, "time")?;
        if u(&rec, "sequence")? != line_no as u64 {
            return Err(format!("line {line_no}: sequence out of order"));
        }
        if time < last_time || time < 0.0 {
            return Err(format!("line {line_no}: time went backwards ({last_time} -> {time})"));
        }
        last_time = time;
        out.events += 1;
        let p = &rec["payload"];
        let at_hub = |state: &BTreeMap<u64, Where>, id: u64| -> Result<(String, Option<BTreeSet<String>>), String> {
            match state.get(&id) {
                Some(Where::Hub { hub, route }) => Ok((hub.clone(), route.clone())),
                other => Err(format!("line {line_no}: shipment {id} expected at a hub, found {other:?}")),
            }
        };

        match s(&rec, "kind")?.as_str() {
            "ShipmentCreated" => {
                let id = u(p, "shipment")?;
                if state.contains_key(&id) {
                    return Err(format!("shipment {id} created twice"));
                }
                let origin = s(p, "origin")?;
                let d = s(p, "destination")?;
                let level = u(p, "service_level")?;
                let deadline = f(p, "deadline")?;
                if !(1..=3).contains(&level) || (deadline - time - 24.0 * level as f64).abs() > 1e-9 {
                    return Err(format!("shipment {id}: deadline {deadline} inconsistent with level {level}"));
                }
                if origin == d {
                    return Err(format!("shipment {id}: origin equals destination"));
                }
                if mode == "baseline" {
                    let path = hubs(p, "planned_path")?;
                    if path.first() != Some(&origin) || path.last() != Some(&d) {
                        return Err(format!("shipment {id}: planned path endpoints"));
                    }
                    let t = path_time(net, &path).ok_or(format!("shipment {id}: planned path uses a missing arc"))?;
                    let best = min_time(net, &origin, &d).ok_or("unreachable destination")?;
                    if (t - best).abs() > 1e-9 {
                        return Err(format!("shipment {id}: planned path {t} h is not shortest ({best} h)"));
                    }
                    planned.insert(id, path);
                } else if !p["planned_path"].is_null() {
                    return Err("directional shipment carries a planned path".into());
                }
                visited.insert(id, vec![(origin.clone(), time)]);
                dest.insert(id, d);
                state.insert(id, Where::Hub { hub: origin, route: None });
                out.shipments += 1;
            }
            "RouteDecided" => {
                let id = u(p, "shipment")?;
                let (hub, _) = at_hub(&state, id)?;
                if s(p, "hub")? != hub || s(p, "mode")? != mode {
                    return Err(format!("line {line_no}: decision hub/mode mismatch"));
                }
                let next: BTreeSet<String> = hubs(p, "next_hops")?.into_iter().collect();
                if !next.contains(&s(p, "chosen")?) {
                    return Err(format!("line {line_no}: chosen hop outside next_hops"));
                }
                state.insert(id, Where::Hub { hub, route: Some(next) });
            }
            "InfeasibleRouteLogged" => {
                let id = u(p, "shipment")?;
                let (hub, _) = at_hub(&state, id)?;
                if s(p, "hub")? != hub || !(f(p, "shortfall")? > 0.0) || f(p, "extension")? < f(p, "shortfall")? {
                    return Err(format!("line {line_no}: bad infeasible record"));
                }
                extended.insert(id);
                if p["abandoned"].as_bool() == Some(true) {
                    state.insert(id, Where::Abandoned);
                    out.infeasible += 1;
                }
            }
            "TruckCalled" => {
                let t = u(p, "truck")?;
                let from = s(p, "from")?;
                let to = s(p, "to")?;
                let load = ids(p, "shipments")?;
                if load.is_empty() || load.len() > capacity {
                    return Err(format!("truck {t} carries {} shipments (capacity {capacity})", load.len()));
                }
                if t != trucks.len() as u64 || net.arc(&from.as_str().into(), &to.as_str().into()).is_none() {
                    return Err(format!("truck {t}: bad id or missing arc {from}->{to}"));
                }
                for &id in &load {
                    let (hub, route) = at_hub(&state, id)?;
                    if hub != from {
                        return Err(format!("truck {t} loads shipment {id} at {from} but it is at {hub}"));
                    }
                    let route = route.ok_or(format!("shipment {id} loaded before any routing decision"))?;
                    if !route.contains(&to) {
                        return Err(format!("shipment {id}: hop {from}->{to} not among decided next hops {route:?}"));
                    }
                    if mode == "baseline" {
                        let path = &planned[&id];
                        let pos = path.iter().position(|h| h == &from).ok_or("off plan")?;
                        if path.get(pos + 1) != Some(&to) {
                            return Err(format!("shipment {id}: baseline hop {from}->{to} leaves its planned path"));
                        }
                    }
                    state.insert(id, Where::Aboard(t));
                }
                trucks.insert(t, Truck { from, to, shipments: load, stage: 0, departed_at: 0.0 });
            }
            "TruckReadyToLoad" | "TruckDeparted" | "TruckArrived" => {
                let kind = s(&rec, "kind")?;
                let t = u(p, "truck")?;
                let truck = trucks.get_mut(&t).ok_or(format!("unknown truck {t}"))?;
                let stage = match kind.as_str() {
                    "TruckReadyToLoad" => 1,
                    "TruckDeparted" => 2,
                    _ => 3,
                };
                if truck.stage + 1 != stage {
                    return Err(format!("truck {t}: {kind} out of order"));
                }
                truck.stage = stage;
                let arc = net.arc(&truck.from.as_str().into(), &truck.to.as_str().into()).unwrap();
                match stage {
                    2 => {
                        truck.departed_at = time;
                        if ids(p, "shipments")? != truck.shipments {
                            return Err(format!("truck {t}: departing load differs from the call"));
                        }
                    }
                    3 => {
                        if (time - truck.departed_at - arc.travel_time).abs() > 1e-9 {
                            return Err(format!("truck {t}: travel took {} h", time - truck.departed_at));
                        }
                        let miles = f(p, "miles")?;
                        if miles != arc.distance || s(p, "hub")? != truck.to {
                            return Err(format!("truck {t}: arrival record disagrees with arc"));
                        }
                        out.trucks += 1;
                        out.miles += miles;
                    }
                    _ => {}
                }
            }
            "ShipmentArrivedAtHub" => {
                let id = u(p, "shipment")?;
                let t = u(p, "truck")?;
                if state.get(&id) != Some(&Where::Aboard(t)) {
                    return Err(format!("shipment {id} arrived on truck {t} it was not aboard"));
                }
                let truck = &trucks[&t];
                if truck.stage != 3 || s(p, "hub")? != truck.to {
                    return Err(format!("shipment {id}: arrival before its truck"));
                }
                let hist = visited.get_mut(&id).unwrap();
                if hist.last().unwrap().1 >= time {
                    return Err(format!("shipment {id}: hop history not strictly increasing"));
                }
                hist.push((truck.to.clone(), time));
                state.insert(id, Where::Hub { hub: truck.to.clone(), route: None });
            }
            "ShipmentDelivered" => {
                let id = u(p, "shipment")?;
                let (hub, _) = at_hub(&state, id)?;
                if hub != dest[&id] || s(p, "hub")? != hub {
                    return Err(format!("shipment {id} delivered away from its destination"));
                }
                if visited[&id].last().unwrap().1 != time {
                    return Err(format!("shipment {id}: delivery not at arrival time"));
                }
                let lateness = f(p, "lateness")?;
                if (lateness - (time - f(p, "original_deadline")?).max(0.0)).abs() > 1e-9 {
                    return Err(format!("shipment {id}: lateness mismatch"));
                }
                if mode == "baseline" {
                    let realized: Vec<&String> = visited[&id].iter().map(|(h, _)| h).collect();
                    if realized != planned[&id].iter().collect::<Vec<_>>() {
                        return Err(format!("shipment {id}: realized path differs from plan"));
                    }
                }
                out.delivered += 1;
                out.delivered_on_time += usize::from(lateness == 0.0);
                out.lateness_sum += lateness;
                out.max_lateness = out.max_lateness.max(lateness);
                state.insert(id, Where::Delivered);
            }
            other => return Err(format!("line {line_no}: unknown kind {other}")),
        }
    }

    for (id, w) in &state {
        if !matches!(w, Where::Delivered | Where::Abandoned) {
            return Err(format!("shipment {id} ends the run in state {w:?}"));
        }
    }
    for (t, truck) in &trucks {
        if truck.stage != 3 {
            return Err(format!("truck {t} never arrived"));
        }
    }
    out.extended = extended.len();
    Ok(out)
}

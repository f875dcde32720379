//! Independent reference implementations used by the integration and
//! acceptance tests. Everything here works by exhaustive enumeration of simple
//! paths on small graphs and shares no search code with the library.

#![allow(dead_code)]

pub mod replay;

use std::collections::BTreeSet;

use dirroute::geo::{geographic_midpoint, initial_bearing, within_sector, Bearing, GeoPoint, SectorParams};
use dirroute::network::{Arc, Hub, HubId, Network};
use rand::Rng;

pub const EPS: f64 = 1e-9;

/// Random geolocated graph with `n` hubs named `N0..`, mixing undirected
/// edges and one-way arcs. Travel times are distance at 50 mph scaled by a
/// random factor, so they are not purely geometric.
pub fn random_geo_graph<R: Rng>(rng: &mut R, n: usize, density: f64) -> Network {
    let hubs: Vec<Hub> = (0..n)
        .map(|i| Hub {
            id: HubId::new(format!("N{i}")),
            name: String::new(),
            location: GeoPoint::new(rng.gen_range(25.0..35.0), rng.gen_range(-90.0..-80.0)).unwrap(),
            is_destination_terminal: false,
        })
        .collect();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !rng.gen_bool(density) {
                continue;
            }
            let miles = dirroute::geo::haversine_distance(hubs[i].location, hubs[j].location).max(1.0);
            let time = miles / 50.0 * rng.gen_range(0.8..1.3);
            let arc = |a: usize, b: usize| Arc {
                from: hubs[a].id.clone(),
                to: hubs[b].id.clone(),
                travel_time: time,
                distance: miles,
            };
            match rng.gen_range(0..6) {
                0 => arcs.push(arc(i, j)),
                1 => arcs.push(arc(j, i)),
                _ => {
                    arcs.push(arc(i, j));
                    arcs.push(arc(j, i));
                }
            }
        }
    }
    Network::new(hubs, arcs).unwrap()
}

fn out_arcs<'a>(net: &'a Network, u: &'a HubId) -> impl Iterator<Item = &'a Arc> {
    net.arcs().iter().filter(move |a| &a.from == u)
}

/// Every simple path from `s` to `d` as (total time, hubs).
pub fn simple_paths(net: &Network, s: &HubId, d: &HubId) -> Vec<(f64, Vec<HubId>)> {
    fn walk(net: &Network, d: &HubId, path: &mut Vec<HubId>, time: f64, out: &mut Vec<(f64, Vec<HubId>)>) {
        let u = path.last().unwrap().clone();
        if &u == d {
            out.push((time, path.clone()));
            return;
        }
        for a in out_arcs(net, &u) {
            if path.contains(&a.to) {
                continue;
            }
            path.push(a.to.clone());
            walk(net, d, path, time + a.travel_time, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(net, d, &mut vec![s.clone()], 0.0, &mut out);
    out
}

/// Minimum travel time from `s` to `d` by enumeration, with a path attaining it.
pub fn brute_shortest(net: &Network, s: &HubId, d: &HubId) -> Option<(f64, Vec<HubId>)> {
    simple_paths(net, s, d)
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.len().cmp(&b.1.len())).then(a.1.cmp(&b.1)))
}

fn bearing_ok(net: &Network, u: &HubId, v: &HubId, anchor: Bearing, sector: SectorParams) -> bool {
    let a = net.hub(u).unwrap().location;
    let b = net.hub(v).unwrap().location;
    initial_bearing(a, b).map_or(true, |x| within_sector(x, anchor, sector))
}

/// Hubs reachable from `cur` over simple, sector-compliant arc sequences in
/// which every hub is budget-feasible at its prefix time; sequences stop at
/// `d` and never return to `cur`. Also returns the admitted direct neighbours.
pub fn sector_enumeration(
    net: &Network,
    cur: &HubId,
    d: &HubId,
    anchor: Bearing,
    budget: f64,
    half_width: f64,
    handling: f64,
) -> (BTreeSet<HubId>, BTreeSet<HubId>) {
    let sector = SectorParams::new(half_width).unwrap();
    let to_dest = |h: &HubId| brute_shortest(net, h, d).map(|(t, _)| t);
    let feasible = |h: &HubId, g: f64| {
        let charge = if h == d { 0.0 } else { handling };
        to_dest(h).is_some_and(|rest| g + rest + charge <= budget + EPS)
    };

    let mut reached = BTreeSet::new();
    let mut direct = BTreeSet::new();
    let mut stack: Vec<(Vec<HubId>, f64)> = vec![(vec![cur.clone()], 0.0)];
    while let Some((path, g)) = stack.pop() {
        let u = path.last().unwrap();
        if u == d {
            continue;
        }
        for a in out_arcs(net, u) {
            if path.contains(&a.to) || !bearing_ok(net, u, &a.to, anchor, sector) {
                continue;
            }
            let g2 = g + a.travel_time;
            if !feasible(&a.to, g2) {
                continue;
            }
            reached.insert(a.to.clone());
            if path.len() == 1 {
                direct.insert(a.to.clone());
            }
            let mut next = path.clone();
            next.push(a.to.clone());
            stack.push((next, g2));
        }
    }
    (reached, direct)
}

#[derive(Debug, PartialEq)]
pub enum OracleOutcome {
    Found { members: BTreeSet<HubId>, next_hops: BTreeSet<HubId>, fallback: bool },
    Infeasible,
    NoPath,
}

/// Reference for the full discovery procedure: anchor on the midpoint of the
/// first shortest-path hop and the destination, recalibrate toward the first
/// hop once if the primary area misses it.
pub fn oracle_discovery(net: &Network, cur: &HubId, d: &HubId, budget: f64, half_width: f64, handling: f64) -> OracleOutcome {
    if cur == d {
        return OracleOutcome::Found {
            members: BTreeSet::from([d.clone()]),
            next_hops: BTreeSet::new(),
            fallback: false,
        };
    }
    let Some((_, path)) = brute_shortest(net, cur, d) else {
        return OracleOutcome::NoPath;
    };
    let first = &path[1];
    let here = net.hub(cur).unwrap().location;
    let target = if first == d {
        net.hub(d).unwrap().location
    } else {
        geographic_midpoint(net.hub(first).unwrap().location, net.hub(d).unwrap().location).unwrap()
    };

    let finish = |(mut members, next_hops): (BTreeSet<HubId>, BTreeSet<HubId>), fallback| {
        members.insert(d.clone());
        OracleOutcome::Found { members, next_hops, fallback }
    };

    let mut kept = None;
    if let Ok(anchor) = initial_bearing(here, target) {
        let primary = sector_enumeration(net, cur, d, anchor, budget, half_width, handling);
        if primary.1.contains(first) {
            return finish(primary, false);
        }
        if !primary.1.is_empty() {
            kept = Some(primary);
        }
    }
    let toward_first = initial_bearing(here, net.hub(first).unwrap().location).unwrap_or(Bearing::new(0.0));
    let fallback = sector_enumeration(net, cur, d, toward_first, budget, half_width, handling);
    if !fallback.1.is_empty() {
        return finish(fallback, true);
    }
    match kept {
        Some(primary) => finish(primary, false),
        None => OracleOutcome::Infeasible,
    }
}

//! Seeded synthetic networks: uniform hubs in a bounding box, k-nearest
//! undirected links, nearest-component stitching, and terminals chosen by
//! farthest-point selection.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Arc, Hub, HubId, Network, NetworkError};
use crate::geo::{haversine_distance, GeoPoint};

/// Latitude/longitude rectangle in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl Default for BoundingBox {
    /// Southeastern United States.
    fn default() -> Self {
        BoundingBox {
            lat_min: 24.0,
            lat_max: 37.0,
            lon_min: -92.0,
            lon_max: -75.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub hub_count: usize,
    pub bounding_box: BoundingBox,
    pub k_nearest: usize,
    pub speed_mph: f64,
    pub terminal_count: usize,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            hub_count: 30,
            bounding_box: BoundingBox::default(),
            k_nearest: 3,
            speed_mph: 50.0,
            terminal_count: 2,
        }
    }
}

// coordinates are rounded so that emitted documents stay readable
const COORD_SCALE: f64 = 1e5;

pub fn generate_network(params: &GeneratorParams, seed: u64) -> Result<Network, NetworkError> {
    check_params(params)?;
    let bb = params.bounding_box;
    let n = params.hub_count;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let lat = (rng.gen_range(bb.lat_min..=bb.lat_max) * COORD_SCALE).round() / COORD_SCALE;
        let lon = (rng.gen_range(bb.lon_min..=bb.lon_max) * COORD_SCALE).round() / COORD_SCALE;
        let p = GeoPoint::new(lat, lon).map_err(|e| NetworkError::Generation(e.to_string()))?;
        points.push(p);
    }

    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = haversine_distance(points[i], points[j]);
            if d <= 0.0 {
                return Err(NetworkError::Generation(format!(
                    "hubs {i} and {j} share a location"
                )));
            }
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }

    let mut links: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        order.sort_by(|&a, &b| dist[i][a].total_cmp(&dist[i][b]).then(a.cmp(&b)));
        for &j in order.iter().take(params.k_nearest) {
            links.insert((i.min(j), i.max(j)));
        }
    }
    stitch_components(&dist, &mut links);

    let terminals = pick_terminals(&dist, params.terminal_count);

    let width = (n - 1).to_string().len().max(2);
    let ids: Vec<HubId> = (0..n).map(|i| HubId::new(format!("H{i:0width$}"))).collect();
    let hubs = (0..n)
        .map(|i| Hub {
            id: ids[i].clone(),
            name: format!("Hub {i}"),
            location: points[i],
            is_destination_terminal: terminals.contains(&i),
        })
        .collect();
    let mut arcs = Vec::with_capacity(links.len() * 2);
    for &(i, j) in &links {
        let distance = dist[i][j];
        let travel_time = distance / params.speed_mph;
        for (a, b) in [(i, j), (j, i)] {
            arcs.push(Arc {
                from: ids[a].clone(),
                to: ids[b].clone(),
                travel_time,
                distance,
            });
        }
    }
    Network::new(hubs, arcs)
}

fn check_params(p: &GeneratorParams) -> Result<(), NetworkError> {
    let fail = |m: &str| Err(NetworkError::Generation(m.to_owned()));
    let bb = p.bounding_box;
    if p.hub_count < 2 {
        return fail("hub_count must be at least 2");
    }
    if p.k_nearest < 1 {
        return fail("k_nearest must be at least 1");
    }
    if p.terminal_count < 1 || p.terminal_count > p.hub_count {
        return fail("terminal_count must be between 1 and hub_count");
    }
    if !(p.speed_mph > 0.0 && p.speed_mph.is_finite()) {
        return fail("speed_mph must be positive");
    }
    let lat_ok = -90.0 <= bb.lat_min && bb.lat_min < bb.lat_max && bb.lat_max <= 90.0;
    let lon_ok = -180.0 < bb.lon_min && bb.lon_min < bb.lon_max && bb.lon_max <= 180.0;
    if !lat_ok || !lon_ok {
        return fail("bounding box is empty or out of range");
    }
    Ok(())
}

/// Joins components by repeatedly adding the shortest link between two
/// different components.
fn stitch_components(dist: &[Vec<f64>], links: &mut BTreeSet<(usize, usize)>) {
    let n = dist.len();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(comp: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while comp[r] != r {
            r = comp[r];
        }
        let mut y = x;
        while comp[y] != r {
            let next = comp[y];
            comp[y] = r;
            y = next;
        }
        r
    }
    for &(i, j) in links.iter() {
        let (a, b) = (find(&mut comp, i), find(&mut comp, j));
        comp[a.max(b)] = a.min(b);
    }
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                if find(&mut comp, i) == find(&mut comp, j) {
                    continue;
                }
                if best.map_or(true, |(d, _, _)| dist[i][j] < d) {
                    best = Some((dist[i][j], i, j));
                }
            }
        }
        let Some((_, i, j)) = best else { break };
        links.insert((i, j));
        let (a, b) = (find(&mut comp, i), find(&mut comp, j));
        comp[a.max(b)] = a.min(b);
    }
}

/// Farthest-apart pair first, then the hub maximizing its distance to the
/// nearest chosen terminal.
fn pick_terminals(dist: &[Vec<f64>], count: usize) -> Vec<usize> {
    let n = dist.len();
    let mut best = (0, 1);
    for i in 0..n {
        for j in (i + 1)..n {
            if dist[i][j] > dist[best.0][best.1] {
                best = (i, j);
            }
        }
    }
    let mut chosen = vec![best.0, best.1];
    chosen.truncate(count);
    while chosen.len() < count {
        let next = (0..n)
            .filter(|i| !chosen.contains(i))
            .max_by(|&a, &b| {
                let da = chosen.iter().map(|&c| dist[a][c]).fold(f64::INFINITY, f64::min);
                let db = chosen.iter().map(|&c| dist[b][c]).fold(f64::INFINITY, f64::min);
                da.total_cmp(&db).then(b.cmp(&a))
            })
            .expect("terminal_count <= hub_count");
        chosen.push(next);
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::emit;

    #[test]
    fn two_hubs_one_link() {
        let params = GeneratorParams {
            hub_count: 2,
            k_nearest: 1,
            ..Default::default()
        };
        let net = generate_network(&params, 99).unwrap();
        assert_eq!(net.hubs().len(), 2);
        assert_eq!(net.arcs().len(), 2);
    }

    #[test]
    fn deterministic_for_seed() {
        let params = GeneratorParams::default();
        let a = emit(&generate_network(&params, 7).unwrap());
        let b = emit(&generate_network(&params, 7).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, emit(&generate_network(&params, 8).unwrap()));
    }

    #[test]
    fn arc_time_follows_speed() {
        let net = generate_network(&GeneratorParams::default(), 3).unwrap();
        for arc in net.arcs() {
            assert!((arc.travel_time * 50.0 - arc.distance).abs() < 1e-9);
        }
        assert_eq!(net.terminals().count(), 2);
    }

    #[test]
    fn rejects_bad_params() {
        for p in [
            GeneratorParams { hub_count: 1, ..Default::default() },
            GeneratorParams { k_nearest: 0, ..Default::default() },
            GeneratorParams { terminal_count: 0, ..Default::default() },
            GeneratorParams { terminal_count: 31, ..Default::default() },
            GeneratorParams { speed_mph: 0.0, ..Default::default() },
        ] {
            assert!(matches!(generate_network(&p, 1), Err(NetworkError::Generation(_))));
        }
    }

    #[test]
    fn more_terminals_than_two() {
        let p = GeneratorParams {
            terminal_count: 4,
            ..Default::default()
        };
        assert_eq!(generate_network(&p, 5).unwrap().terminals().count(), 4);
    }

    #[test]
    fn generated_networks_validate_across_seeds() {
        for seed in 0..100 {
            let p = GeneratorParams {
                hub_count: 5 + (seed as usize % 30),
                k_nearest: 1 + (seed as usize % 3),
                ..Default::default()
            };
            let net = generate_network(&p, seed).unwrap();
            // symmetric arcs
            for arc in net.arcs() {
                let back = net.arc(&arc.to, &arc.from).unwrap();
                assert_eq!(back.travel_time, arc.travel_time);
            }
        }
    }
}

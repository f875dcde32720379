//! Minimum travel-time paths and destination-rooted time tables.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;
use thiserror::Error;

use crate::network::{HubId, Network, NetworkError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("unknown hub {0}")]
    UnknownHub(HubId),
    #[error("no path from {from} to {to}")]
    NoPath { from: HubId, to: HubId },
}

impl From<NetworkError> for PathError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::UnknownHub(h) => PathError::UnknownHub(h),
            other => unreachable!("lookup cannot fail with {other}"),
        }
    }
}

/// A simple hub sequence with its summed travel time (hours) and distance (miles).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Path {
    pub hubs: Vec<HubId>,
    pub total_time: f64,
    pub total_distance: f64,
}

impl Path {
    pub fn origin(&self) -> &HubId {
        &self.hubs[0]
    }

    pub fn destination(&self) -> &HubId {
        self.hubs.last().expect("paths are never empty")
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Label {
    time: f64,
    hops: usize,
    // dense indices; index order equals hub id order
    seq: Vec<usize>,
}

impl Eq for Label {}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.hops.cmp(&other.hops))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum travel-time path from `s` to `d`.
///
/// Ties are broken by fewer hops, then by the lexicographically smaller hub
/// sequence, so the result is fully determined by the network.
pub fn shortest_path(net: &Network, s: &HubId, d: &HubId) -> Result<Path, PathError> {
    let src = net.require(s)?;
    let dst = net.require(d)?;

    let mut best: Vec<Option<Label>> = vec![None; net.len()];
    let mut done = vec![false; net.len()];
    let start = Label {
        time: 0.0,
        hops: 0,
        seq: vec![src],
    };
    best[src] = Some(start.clone());
    let mut heap = BinaryHeap::from([Reverse(start)]);

    while let Some(Reverse(label)) = heap.pop() {
        let u = *label.seq.last().unwrap();
        if done[u] || best[u].as_ref() != Some(&label) {
            continue;
        }
        done[u] = true;
        if u == dst {
            break;
        }
        for (v, arc) in net.out_arcs(u) {
            if done[v] {
                continue;
            }
            let mut seq = label.seq.clone();
            seq.push(v);
            let cand = Label {
                time: label.time + arc.travel_time,
                hops: label.hops + 1,
                seq,
            };
            if best[v].as_ref().map_or(true, |b| cand < *b) {
                best[v] = Some(cand.clone());
                heap.push(Reverse(cand));
            }
        }
    }

    let label = best[dst]
        .take()
        .filter(|_| done[dst])
        .ok_or_else(|| PathError::NoPath {
            from: s.clone(),
            to: d.clone(),
        })?;
    let total_distance = label
        .seq
        .windows(2)
        .map(|w| net.arc_between(w[0], w[1]).expect("label follows arcs").distance)
        .fold(0.0, |acc, d| acc + d);
    Ok(Path {
        hubs: label.seq.iter().map(|&i| net.hub_at(i).id.clone()).collect(),
        total_time: label.time,
        total_distance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct MinTime(f64, usize);

impl Eq for MinTime {}

impl Ord for MinTime {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for MinTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum travel time from every hub to one destination. Hubs that cannot
/// reach the destination are absent.
#[derive(Debug, Clone, PartialEq)]
pub struct MinTimeTable {
    destination: HubId,
    dense: Vec<Option<f64>>,
    times: BTreeMap<HubId, f64>,
}

impl MinTimeTable {
    pub fn destination(&self) -> &HubId {
        &self.destination
    }

    pub fn get(&self, h: &HubId) -> Option<f64> {
        self.times.get(h).copied()
    }

    pub fn entries(&self) -> &BTreeMap<HubId, f64> {
        &self.times
    }

    pub(crate) fn at(&self, i: usize) -> Option<f64> {
        self.dense.get(i).copied().flatten()
    }
}

/// Single-source shortest times on the reversed graph, rooted at `d`.
pub fn min_time_table(net: &Network, d: &HubId) -> Result<MinTimeTable, PathError> {
    let dst = net.require(d)?;
    let mut dense: Vec<Option<f64>> = vec![None; net.len()];
    let mut done = vec![false; net.len()];
    dense[dst] = Some(0.0);
    let mut heap = BinaryHeap::from([Reverse(MinTime(0.0, dst))]);
    while let Some(Reverse(MinTime(t, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for (u, arc) in net.in_arcs(v) {
            let cand = t + arc.travel_time;
            if !done[u] && dense[u].map_or(true, |cur| cand < cur) {
                dense[u] = Some(cand);
                heap.push(Reverse(MinTime(cand, u)));
            }
        }
    }
    let times = dense
        .iter()
        .enumerate()
        .filter_map(|(i, t)| t.map(|t| (net.hub_at(i).id.clone(), t)))
        .collect();
    Ok(MinTimeTable {
        destination: d.clone(),
        dense,
        times,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::GeoPoint;
    use crate::network::{Arc, Hub};

    fn net(ids: &[&str], arcs: &[(&str, &str, f64)]) -> Network {
        let hubs = ids
            .iter()
            .enumerate()
            .map(|(i, id)| Hub {
                id: (*id).into(),
                name: String::new(),
                location: GeoPoint::new(0.0, i as f64).unwrap(),
                is_destination_terminal: false,
            })
            .collect();
        let arcs = arcs
            .iter()
            .map(|&(f, t, w)| Arc {
                from: f.into(),
                to: t.into(),
                travel_time: w,
                distance: w * 10.0,
            })
            .collect();
        Network::new(hubs, arcs).unwrap()
    }

    fn ids(p: &Path) -> Vec<&str> {
        p.hubs.iter().map(HubId::as_str).collect()
    }

    #[test]
    fn same_origin_and_destination() {
        let n = net(&["A", "B"], &[("A", "B", 1.0)]);
        let p = shortest_path(&n, &"A".into(), &"A".into()).unwrap();
        assert_eq!(ids(&p), ["A"]);
        assert_eq!((p.total_time, p.total_distance), (0.0, 0.0));
    }

    #[test]
    fn triangle_prefers_two_cheap_hops() {
        let n = net(
            &["A", "B", "C"],
            &[("A", "B", 1.0), ("B", "C", 1.0), ("A", "C", 3.0)],
        );
        let p = shortest_path(&n, &"A".into(), &"C".into()).unwrap();
        assert_eq!(ids(&p), ["A", "B", "C"]);
        assert_eq!(p.total_time, 2.0);
        assert_eq!(p.total_distance, 20.0);
    }

    #[test]
    fn ties_prefer_fewer_hops_then_lexicographic() {
        let n = net(
            &["A", "B", "C", "D"],
            &[("A", "C", 1.0), ("C", "D", 1.0), ("A", "B", 1.0), ("B", "D", 1.0)],
        );
        let p = shortest_path(&n, &"A".into(), &"D".into()).unwrap();
        assert_eq!(ids(&p), ["A", "B", "D"]);

        let n = net(
            &["A", "B", "C", "D"],
            &[("A", "B", 1.0), ("B", "C", 1.0), ("C", "D", 1.0), ("A", "D", 3.0)],
        );
        let p = shortest_path(&n, &"A".into(), &"D".into()).unwrap();
        assert_eq!(ids(&p), ["A", "D"]);
    }

    #[test]
    fn unreachable_and_unknown() {
        let n = net(&["A", "B"], &[("A", "B", 1.0)]);
        assert_eq!(
            shortest_path(&n, &"B".into(), &"A".into()),
            Err(PathError::NoPath {
                from: "B".into(),
                to: "A".into()
            })
        );
        assert_eq!(
            shortest_path(&n, &"Q".into(), &"A".into()),
            Err(PathError::UnknownHub("Q".into()))
        );
        assert!(matches!(min_time_table(&n, &"Q".into()), Err(PathError::UnknownHub(_))));
    }

    #[test]
    fn chain_table() {
        let n = net(&["A", "B", "C"], &[("A", "B", 1.0), ("B", "C", 1.0)]);
        let t = min_time_table(&n, &"C".into()).unwrap();
        assert_eq!(t.get(&"C".into()), Some(0.0));
        assert_eq!(t.get(&"B".into()), Some(1.0));
        assert_eq!(t.get(&"A".into()), Some(2.0));

        let t = min_time_table(&n, &"B".into()).unwrap();
        assert_eq!(t.get(&"C".into()), None);
        assert_eq!(t.entries().len(), 2);
    }
}

//! JSON network documents.
//!
//! ```json
//! { "edges": [ { "directed": false, "distance_mi": 100.0, "from": "A",
//!                "to": "B", "travel_time_h": 2.0 } ],
//!   "hubs":  [ { "id": "A", "lat": 33.7, "lon": -84.4, "name": "Atlanta",
//!                "terminal": false } ] }
//! ```
//!
//! Undirected edges expand to two arcs. [`emit`] folds symmetric arc pairs
//! back into undirected edges and writes keys and records in sorted order.

use serde::{Deserialize, Serialize};

use super::{Arc, Hub, HubId, Network, NetworkError, ValidationIssue};
use crate::geo::GeoPoint;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    edges: Vec<EdgeRecord>,
    hubs: Vec<HubRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HubRecord {
    id: String,
    lat: f64,
    lon: f64,
    #[serde(default)]
    name: String,
    #[serde(default)]
    terminal: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    #[serde(default)]
    directed: bool,
    distance_mi: f64,
    from: String,
    to: String,
    travel_time_h: f64,
}

pub fn load_network(document: &str) -> Result<Network, NetworkError> {
    let doc: Document =
        serde_json::from_str(document).map_err(|e| NetworkError::Parse(e.to_string()))?;

    let mut issues = Vec::new();
    let mut hubs = Vec::with_capacity(doc.hubs.len());
    for rec in doc.hubs {
        match GeoPoint::new(rec.lat, rec.lon) {
            Ok(location) => hubs.push(Hub {
                id: HubId::new(rec.id),
                name: rec.name,
                location,
                is_destination_terminal: rec.terminal,
            }),
            Err(e) => issues.push(ValidationIssue::InvalidLocation {
                hub: HubId::new(rec.id),
                reason: e.to_string(),
            }),
        }
    }

    let mut arcs = Vec::with_capacity(doc.edges.len() * 2);
    for e in doc.edges {
        let forward = Arc {
            from: HubId::new(e.from),
            to: HubId::new(e.to),
            travel_time: e.travel_time_h,
            distance: e.distance_mi,
        };
        if !e.directed {
            arcs.push(Arc {
                from: forward.to.clone(),
                to: forward.from.clone(),
                ..forward
            });
        }
        arcs.push(forward);
    }

    match Network::new(hubs, arcs) {
        Ok(net) if issues.is_empty() => Ok(net),
        Ok(_) => Err(NetworkError::Validation(issues)),
        Err(NetworkError::Validation(more)) => {
            issues.extend(more);
            Err(NetworkError::Validation(issues))
        }
        Err(other) => Err(other),
    }
}

/// Serializes `net` in the document format; the output is byte-stable.
pub fn emit(net: &Network) -> String {
    let hubs = net
        .hubs()
        .iter()
        .map(|h| HubRecord {
            id: h.id.as_str().to_owned(),
            lat: h.location.lat(),
            lon: h.location.lon(),
            name: h.name.clone(),
            terminal: h.is_destination_terminal,
        })
        .collect();

    let mut edges = Vec::new();
    for arc in net.arcs() {
        let reverse = net.arc(&arc.to, &arc.from);
        let symmetric = reverse.is_some_and(|r| {
            r.travel_time == arc.travel_time && r.distance == arc.distance
        });
        if symmetric && arc.from > arc.to {
            continue;
        }
        edges.push(EdgeRecord {
            directed: !symmetric,
            distance_mi: arc.distance,
            from: arc.from.as_str().to_owned(),
            to: arc.to.as_str().to_owned(),
            travel_time_h: arc.travel_time,
        });
    }

    let mut out = serde_json::to_string_pretty(&Document { edges, hubs })
        .expect("network document serialization is infallible");
    out.push('\n');
    out
}

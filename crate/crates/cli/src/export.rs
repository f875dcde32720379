//! Output files: GeoJSON renderings and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use dirroute::discovery::CandidateSet;
use dirroute::network::{HubId, Network};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::write(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::write(path, e))
}

pub fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn coords(net: &Network, h: &HubId) -> Value {
    let loc = net.hub(h).expect("hub from this network").location;
    json!([loc.lon(), loc.lat()])
}

fn line(net: &Network, hubs: &[HubId], properties: Value) -> Value {
    json!({
        "type": "Feature",
        "geometry": {"type": "LineString", "coordinates": hubs.iter().map(|h| coords(net, h)).collect::<Vec<_>>()},
        "properties": properties,
    })
}

fn collection(features: Vec<Value>) -> String {
    pretty(&json!({"type": "FeatureCollection", "features": features}))
}

pub fn path_geojson(net: &Network, path: &[HubId]) -> String {
    let mut features = Vec::new();
    // a single-hub path has no line to draw
    if path.len() > 1 {
        features.push(line(net, path, json!({"role": "shortest_path", "hubs": path})));
    }
    collection(features)
}

/// Candidate hubs as points, the arcs that admitted them and the shortest
/// path as lines.
pub fn discovery_geojson(net: &Network, cs: Option<&CandidateSet>, path: &[HubId]) -> String {
    let mut features = Vec::new();
    if let Some(cs) = cs {
        for (id, times) in &cs.members {
            let hub = net.hub(id).expect("members exist");
            features.push(json!({
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": coords(net, id)},
                "properties": {
                    "role": "candidate_hub",
                    "id": id,
                    "name": hub.name,
                    "next_hop": cs.next_hops.contains(id),
                    "min_time_from_current": times.min_time_from_current,
                    "min_time_to_dest": times.min_time_to_dest,
                },
            }));
        }
        for (from, to) in &cs.area_arcs {
            features.push(line(net, &[from.clone(), to.clone()], json!({"role": "candidate_arc", "from": from, "to": to})));
        }
    }
    if path.len() > 1 {
        features.push(line(net, path, json!({"role": "shortest_path", "hubs": path})));
    }
    collection(features)
}

#[derive(Debug, Serialize)]
pub struct OutputEntry {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run: digests of the exact inputs, the
/// seed and the tool version, plus digests of every output written.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config_digest: String,
    pub network_digest: String,
    pub shipments_digest: String,
    pub outputs: BTreeMap<String, OutputEntry>,
}

/// Collects output files under one directory, recording their digests.
pub struct OutDir {
    root: PathBuf,
    pub outputs: BTreeMap<String, OutputEntry>,
}

impl OutDir {
    pub fn new(root: PathBuf) -> Self {
        OutDir {
            root,
            outputs: BTreeMap::new(),
        }
    }

    pub fn put(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        write_file(&self.root.join(name), contents)?;
        self.outputs.insert(
            name.to_string(),
            OutputEntry {
                path: name.to_string(),
                sha256: sha256_hex(contents.as_bytes()),
            },
        );
        Ok(())
    }

    pub fn finish(self, mut manifest: RunManifest) -> Result<(), CliError> {
        manifest.outputs = self.outputs;
        write_file(&self.root.join("manifest.json"), &pretty(&manifest))
    }
}

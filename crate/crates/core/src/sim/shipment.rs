use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ScenarioConfig, SimError};
use crate::network::{HubId, Network};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ShipmentId(pub u32);

impl fmt::Display for ShipmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.0)
    }
}

/// Service class; serialized as its level number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum ServiceLevel {
    Level1,
    Level2,
    Level3,
}

impl ServiceLevel {
    pub const ALL: [ServiceLevel; 3] = [ServiceLevel::Level1, ServiceLevel::Level2, ServiceLevel::Level3];

    /// Hours from creation to deadline.
    pub fn deadline_offset(self) -> f64 {
        match self {
            ServiceLevel::Level1 => 24.0,
            ServiceLevel::Level2 => 48.0,
            ServiceLevel::Level3 => 72.0,
        }
    }
}

impl TryFrom<u8> for ServiceLevel {
    type Error = String;

    fn try_from(level: u8) -> Result<Self, Self::Error> {
        match level {
            1 => Ok(ServiceLevel::Level1),
            2 => Ok(ServiceLevel::Level2),
            3 => Ok(ServiceLevel::Level3),
            other => Err(format!("service level must be 1, 2 or 3, got {other}")),
        }
    }
}

impl From<ServiceLevel> for u8 {
    fn from(level: ServiceLevel) -> u8 {
        match level {
            ServiceLevel::Level1 => 1,
            ServiceLevel::Level2 => 2,
            ServiceLevel::Level3 => 3,
        }
    }
}

/// A transport request. Runtime state lives in [`super::ShipmentOutcome`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shipment {
    pub id: ShipmentId,
    pub origin: HubId,
    pub destination: HubId,
    pub service_level: ServiceLevel,
    pub created_at: f64,
    pub deadline: f64,
}

impl Shipment {
    pub fn new(
        id: ShipmentId,
        origin: HubId,
        destination: HubId,
        service_level: ServiceLevel,
        created_at: f64,
    ) -> Self {
        Shipment {
            id,
            origin,
            destination,
            service_level,
            created_at,
            deadline: created_at + service_level.deadline_offset(),
        }
    }
}

/// Draws `cfg.shipment_count` requests: origins uniform over non-terminal
/// hubs, destinations uniform over terminals, service level and creation time
/// uniform. The list is sorted by creation time and ids follow that order.
pub fn generate_shipments(net: &Network, cfg: &ScenarioConfig) -> Result<Vec<Shipment>, SimError> {
    let terminals: Vec<&HubId> = net.terminals().map(|h| &h.id).collect();
    let origins: Vec<&HubId> = net
        .hubs()
        .iter()
        .filter(|h| !h.is_destination_terminal)
        .map(|h| &h.id)
        .collect();
    if terminals.is_empty() {
        return Err(SimError::Config("network has no destination terminals".into()));
    }
    if origins.is_empty() {
        return Err(SimError::Config("network has no non-terminal origin hubs".into()));
    }
    if !(cfg.generation_window >= 0.0) {
        return Err(SimError::Config("generation_window must be non-negative".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut drafts = Vec::with_capacity(cfg.shipment_count);
    for _ in 0..cfg.shipment_count {
        let origin = (*origins.choose(&mut rng).unwrap()).clone();
        let destination = (*terminals.choose(&mut rng).unwrap()).clone();
        let level = *ServiceLevel::ALL.choose(&mut rng).unwrap();
        let created_at = if cfg.generation_window > 0.0 {
            rng.gen_range(0.0..=cfg.generation_window)
        } else {
            0.0
        };
        drafts.push((origin, destination, level, created_at));
    }
    drafts.sort_by(|a, b| a.3.total_cmp(&b.3));
    Ok(drafts
        .into_iter()
        .enumerate()
        .map(|(i, (o, d, l, t))| Shipment::new(ShipmentId(i as u32), o, d, l, t))
        .collect())
}

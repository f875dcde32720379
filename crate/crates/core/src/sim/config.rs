use serde::{Deserialize, Serialize};

use super::SimError;
use crate::discovery::SearchParams;
use crate::geo::SectorParams;
use crate::policy::{PolicyWeights, RoutingMode};

/// Every knob of one simulated scenario. Durations are in hours.
///
/// Field names double as the keys of the scenario configuration file; absent
/// keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub shipment_count: usize,
    pub generation_window: f64,
    pub mode: RoutingMode,
    pub half_width: f64,
    pub truck_capacity: usize,
    pub truck_call_delay: f64,
    pub load_time_base: f64,
    pub load_time_per_shipment: f64,
    pub handling_charge: f64,
    pub wait_threshold: f64,
    /// `None` disables the urgency trigger.
    pub urgency_slack: Option<f64>,
    pub w_time: f64,
    pub w_consolidation: f64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            shipment_count: 600,
            generation_window: 12.0,
            mode: RoutingMode::Directional,
            half_width: 50.0,
            truck_capacity: 20,
            truck_call_delay: 1.0,
            load_time_base: 0.25,
            load_time_per_shipment: 0.05,
            handling_charge: 0.5,
            wait_threshold: 4.0,
            urgency_slack: Some(1.0),
            w_time: 1.0,
            w_consolidation: 0.5,
            seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let durations = [
            ("generation_window", self.generation_window),
            ("truck_call_delay", self.truck_call_delay),
            ("load_time_base", self.load_time_base),
            ("load_time_per_shipment", self.load_time_per_shipment),
            ("handling_charge", self.handling_charge),
            ("wait_threshold", self.wait_threshold),
            ("urgency_slack", self.urgency_slack.unwrap_or(0.0)),
        ];
        for (name, value) in durations {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(SimError::Config(format!("{name} must be a non-negative duration, got {value}")));
            }
        }
        if self.truck_capacity < 1 {
            return Err(SimError::Config("truck_capacity must be at least 1".into()));
        }
        self.sector()?;
        self.weights()?;
        Ok(())
    }

    pub fn sector(&self) -> Result<SectorParams, SimError> {
        SectorParams::new(self.half_width).map_err(|e| SimError::Config(e.to_string()))
    }

    pub fn weights(&self) -> Result<PolicyWeights, SimError> {
        PolicyWeights::new(self.w_time, self.w_consolidation).map_err(|e| SimError::Config(e.to_string()))
    }

    pub fn search_params(&self) -> Result<SearchParams, SimError> {
        SearchParams::new(self.sector()?, self.handling_charge).map_err(|e| SimError::Config(e.to_string()))
    }

    pub fn loading_time(&self, shipments: usize) -> f64 {
        self.load_time_base + self.load_time_per_shipment * shipments as f64
    }

    /// True when the two configurations differ in nothing but the routing mode.
    pub fn same_protocol(&self, other: &ScenarioConfig) -> bool {
        let mut a = self.clone();
        a.mode = other.mode;
        a == *other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ScenarioConfig::default().validate().unwrap();
        assert!((ScenarioConfig::default().loading_time(1) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_values() {
        for cfg in [
            ScenarioConfig { truck_capacity: 0, ..Default::default() },
            ScenarioConfig { half_width: 0.0, ..Default::default() },
            ScenarioConfig { wait_threshold: -1.0, ..Default::default() },
            ScenarioConfig { w_time: 0.0, w_consolidation: 0.0, ..Default::default() },
        ] {
            assert!(matches!(cfg.validate(), Err(SimError::Config(_))));
        }
    }

    #[test]
    fn file_keys_and_partial_documents() {
        let cfg: ScenarioConfig =
            serde_json::from_str(r#"{"mode": "baseline", "wait_threshold": 2.5, "urgency_slack": null}"#).unwrap();
        assert_eq!(cfg.mode, RoutingMode::Baseline);
        assert_eq!(cfg.wait_threshold, 2.5);
        assert_eq!(cfg.urgency_slack, None);
        assert_eq!(cfg.truck_capacity, 20);
        assert!(serde_json::from_str::<ScenarioConfig>(r#"{"capacity": 3}"#).is_err());
    }

    #[test]
    fn protocol_comparison_ignores_mode() {
        let a = ScenarioConfig::default();
        let b = ScenarioConfig { mode: RoutingMode::Baseline, ..a.clone() };
        assert!(a.same_protocol(&b));
        let c = ScenarioConfig { seed: 4, ..b };
        assert!(!a.same_protocol(&c));
    }
}

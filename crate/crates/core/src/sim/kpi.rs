//! Run-level indicators and baseline/directional comparison.

use serde::Serialize;

use super::engine::{ShipmentOutcome, ShipmentStatus, TruckTrip};
use super::{ScenarioConfig, SimError};
use crate::policy::RoutingMode;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpiReport {
    pub mode: RoutingMode,
    pub shipment_count: usize,
    pub delivered: usize,
    /// Delivered no later than the original (unextended) deadline.
    pub delivered_on_time: usize,
    pub delivered_on_time_pct: f64,
    pub trucks_dispatched: usize,
    pub total_miles: f64,
    /// Neither delivered nor abandoned as infeasible.
    pub undelivered: usize,
    pub infeasible: usize,
    pub extended: usize,
    /// Hours past the original deadline, over delivered shipments.
    pub mean_lateness: f64,
    pub max_lateness: f64,
}

pub fn compute_kpis(mode: RoutingMode, outcomes: &[ShipmentOutcome], trips: &[TruckTrip]) -> KpiReport {
    let mut delivered = 0;
    let mut on_time = 0;
    let mut infeasible = 0;
    let mut lateness_sum = 0.0;
    let mut max_lateness: f64 = 0.0;
    for o in outcomes {
        match o.status {
            ShipmentStatus::Delivered => {
                delivered += 1;
                let late = (o.delivered_at.unwrap_or(f64::INFINITY) - o.original_deadline).max(0.0);
                if late == 0.0 {
                    on_time += 1;
                }
                lateness_sum += late;
                max_lateness = max_lateness.max(late);
            }
            ShipmentStatus::Infeasible => infeasible += 1,
            _ => {}
        }
    }
    let n = outcomes.len();
    KpiReport {
        mode,
        shipment_count: n,
        delivered,
        delivered_on_time: on_time,
        delivered_on_time_pct: if n == 0 { 100.0 } else { 100.0 * on_time as f64 / n as f64 },
        trucks_dispatched: trips.len(),
        total_miles: trips.iter().fold(0.0, |acc, t| acc + t.miles),
        undelivered: n - delivered - infeasible,
        infeasible,
        extended: outcomes.iter().filter(|o| o.extended).count(),
        mean_lateness: if delivered == 0 { 0.0 } else { lateness_sum / delivered as f64 },
        max_lateness,
    }
}

/// Relative change in percent; `None` when the baseline is zero.
pub fn delta_pct(base: f64, new: f64) -> Option<f64> {
    (base != 0.0).then(|| 100.0 * (new - base) / base)
}

/// One decimal with explicit sign, e.g. `-10.7%`; `n/a` for a missing delta.
pub fn format_delta(delta: Option<f64>) -> String {
    match delta {
        None => "n/a".into(),
        Some(d) => {
            let r = (d * 10.0).round() / 10.0;
            let r = if r == 0.0 { 0.0 } else { r };
            format!("{r:+.1}%")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub shipment_count: usize,
    pub baseline: KpiReport,
    pub directional: KpiReport,
    pub trucks_delta_pct: Option<f64>,
    pub miles_delta_pct: Option<f64>,
}

/// Pairs a baseline and a directional run of the same scenario.
pub fn compare_runs(
    base_cfg: &ScenarioConfig,
    base: &KpiReport,
    dir_cfg: &ScenarioConfig,
    dir: &KpiReport,
) -> Result<ComparisonReport, SimError> {
    if base.mode != RoutingMode::Baseline || dir.mode != RoutingMode::Directional {
        return Err(SimError::MismatchedScenarios(format!(
            "expected baseline then directional, got {} and {}",
            base.mode, dir.mode
        )));
    }
    if base_cfg.mode != base.mode || dir_cfg.mode != dir.mode {
        return Err(SimError::MismatchedScenarios("configuration modes do not match the reports".into()));
    }
    if !base_cfg.same_protocol(dir_cfg) {
        return Err(SimError::MismatchedScenarios("configurations differ in more than the routing mode".into()));
    }
    if base.shipment_count != dir.shipment_count {
        return Err(SimError::MismatchedScenarios(format!(
            "shipment counts differ: {} vs {}",
            base.shipment_count, dir.shipment_count
        )));
    }
    Ok(ComparisonReport {
        shipment_count: base.shipment_count,
        trucks_delta_pct: delta_pct(base.trucks_dispatched as f64, dir.trucks_dispatched as f64),
        miles_delta_pct: delta_pct(base.total_miles, dir.total_miles),
        baseline: base.clone(),
        directional: dir.clone(),
    })
}

fn demand_level(shipments: usize) -> &'static str {
    match shipments {
        0..=999 => "Low",
        1000..=1999 => "Moderate",
        _ => "High",
    }
}

fn thousands(x: f64) -> String {
    let digits = format!("{:.0}", x.abs());
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(c);
    }
    if x < -0.5 {
        out.insert(0, '-');
    }
    out
}

impl ComparisonReport {
    /// Tab-separated table, one row per routing scheme.
    pub fn to_table(&self) -> String {
        let mut out = String::from(
            "Demand Level\tNumber of Shipments\tRouting Scheme\tShipments Delivered On-time\t\
             Trucks Dispatched (Δ%)\tTotal Miles (Δ%)\tMean Lateness (h)\tMax Lateness (h)\n",
        );
        let b = &self.baseline;
        let d = &self.directional;
        out.push_str(&format!(
            "{}\t{}\tBaseline\t{:.1}%\t{}\t{}\t{:.2}\t{:.2}\n",
            demand_level(self.shipment_count),
            self.shipment_count,
            b.delivered_on_time_pct,
            b.trucks_dispatched,
            thousands(b.total_miles),
            b.mean_lateness,
            b.max_lateness,
        ));
        out.push_str(&format!(
            "\t\tDirectional\t{:.1}%\t{} ({})\t{} ({})\t{:.2}\t{:.2}\n",
            d.delivered_on_time_pct,
            d.trucks_dispatched,
            format_delta(self.trucks_delta_pct),
            thousands(d.total_miles),
            format_delta(self.miles_delta_pct),
            d.mean_lateness,
            d.max_lateness,
        ));
        out
    }
}
